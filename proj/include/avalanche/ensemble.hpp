#pragma once

#include "avalanche/disorder.hpp"
#include "avalanche/observables.hpp"
#include "avalanche/spectrum.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace avalanche {

enum class ObservableKind { occupation, otoc, holevo };

/// Starting state of the Holevo branches.
enum class HolevoInput {
    superposition, // (|vacuum> + |top>)/sqrt(2)
    top,           // bare top excitation
};

HolevoInput parse_holevo_input(std::string_view name);
std::string_view to_string(HolevoInput input);

struct EnsembleConfig {
    int layers = 4;
    DisorderMode mode = DisorderMode::ideal;
    double sigma = 0.0;
    double resample_dt = 0.0;
    double g = 1.0;
    double coupling_spread = 0.0; // eta; 0 keeps every coupling equal to g
    double t_max = 10.0;
    std::size_t n_steps = 101;
    std::uint64_t master_seed = 0;
    std::size_t realizations = 10;
    ObservableKind kind = ObservableKind::otoc;
    std::vector<Qubit> probes; // qubits for otoc/holevo; ignored for occupation
    Qubit source = 1;          // V qubit of the OTOC, operator qubit of Holevo
    bool vacuum = false;
    LocalOperator holevo_operator = LocalOperator::sigma_z;
    HolevoInput holevo_input = HolevoInput::superposition;
    unsigned threads = 0; // 0 = hardware concurrency
};

/// Throws ArgumentError on an inconsistent configuration.
void validate(const EnsembleConfig &config);

/// The qubit at the left boundary of each layer, layers 1..L.
std::vector<Qubit> left_edge_probes(int layers);

struct EnsembleResult {
    std::vector<std::vector<ObservableSeries>> per_realization; // [realization][probe]
    std::vector<ObservableSeries> averaged;                      // mean, sample std, count
};

/// Realization i draws from the stream (master_seed, i); reduction runs in
/// realization order, so results do not depend on the thread count.
EnsembleResult run(const EnsembleConfig &config);

/// Pointwise mean and sample standard deviation (n - 1 denominator).
ObservableSeries average(const std::vector<ObservableSeries> &series);

struct SpectrumEnsemble {
    std::vector<SpectrumResult> per_realization;
    SpectrumResult pooled; // ratios and histogram of all realizations together
};

/// Eigenvalues of the first disorder interval of each realization.
SpectrumEnsemble run_spectrum(const EnsembleConfig &config, std::size_t bins = 20);

struct Arrival {
    std::uint64_t realization = 0;
    std::optional<double> time;
};

/// 0.8 x twice the ideal-model arrival time at the last layer's left qubit,
/// on the config's grid; t_max when the ideal model never crosses.
double default_arrival_window(const EnsembleConfig &config, double threshold = -0.5);

/// Per-realization first crossing of the last-layer OTOC below `threshold`
/// inside [0, t_window].
std::vector<Arrival> arrival_scatter(const EnsembleConfig &config, std::optional<double> t_window = std::nullopt,
                                     double threshold = -0.5);

/// Runs body(i) for i in [0, n) on up to `threads` workers. The first
/// exception by index is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body);

} // namespace avalanche
