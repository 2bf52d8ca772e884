#include "avalanche/ensemble.hpp"

#include "avalanche/errors.hpp"
#include "avalanche/hamiltonian.hpp"
#include "avalanche/propagator.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

namespace avalanche {

HolevoInput parse_holevo_input(std::string_view name) {
    if (name == "superposition") return HolevoInput::superposition;
    if (name == "top") return HolevoInput::top;
    throw ArgumentError("unknown Holevo input '" + std::string(name) + "'");
}

std::string_view to_string(HolevoInput input) { return input == HolevoInput::superposition ? "superposition" : "top"; }

void validate(const EnsembleConfig &c) {
    if (c.layers < 1 || c.layers > kMaxLayers) throw ArgumentError("layers must be in [1, 6]");
    if (!(c.g > 0.0)) throw ArgumentError("g must be positive");
    if (!(c.sigma >= 0.0)) throw ArgumentError("sigma must be >= 0");
    if (!(c.t_max > 0.0)) throw ArgumentError("tmax must be positive");
    if (c.n_steps < 2) throw ArgumentError("steps must be >= 2");
    if (c.realizations < 1) throw ArgumentError("realizations must be >= 1");
    if (c.mode == DisorderMode::dynamic && !(c.resample_dt > 0.0))
        throw ArgumentError("dynamic mode needs resample-dt > 0");
    if (!(c.coupling_spread >= 0.0 && c.coupling_spread < 1.0))
        throw ArgumentError("coupling spread must be in [0, 1)");
    const int n = (1 << c.layers) - 1;
    if (c.source < 1 || c.source > n) throw ArgumentError("source qubit outside the tree");
    for (const Qubit q : c.probes)
        if (q < 1 || q > n) throw ArgumentError("probe qubit " + std::to_string(q) + " outside the tree");
    if (c.kind != ObservableKind::occupation && c.probes.empty()) throw ArgumentError("no probe qubits given");
}

std::vector<Qubit> left_edge_probes(int layers) {
    std::vector<Qubit> out;
    for (int l = 1; l <= layers; ++l) out.push_back(TreeNetwork::first_in_layer(l));
    return out;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::exception_ptr> errors(n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
    }
    for (const auto &e : errors)
        if (e) std::rethrow_exception(e);
}

namespace {

// Re-throws with the realization index in the message, keeping the category.
[[noreturn]] void rethrow_with_index(std::size_t i) {
    const std::string prefix = "realization " + std::to_string(i) + ": ";
    try {
        throw;
    } catch (const ArgumentError &e) {
        throw ArgumentError(prefix + e.what());
    } catch (const ResourceError &e) {
        throw ResourceError(prefix + e.what());
    } catch (const NumericalError &e) {
        throw NumericalError(prefix + e.what());
    }
}

TreeNetwork network_for(const EnsembleConfig &c, std::size_t realization) {
    if (c.coupling_spread > 0.0)
        return build_tree(c.layers, randomized_couplings(c.layers, c.g, c.coupling_spread, c.master_seed, realization));
    return build_tree(c.layers, c.g);
}

DisorderSchedule schedule_for(const EnsembleConfig &c, const TreeNetwork &network, std::size_t realization) {
    ScheduleParams p;
    p.mode = c.mode;
    p.sigma = c.sigma;
    p.resample_dt = c.resample_dt;
    p.t_max = c.t_max;
    p.master_seed = c.master_seed;
    p.realization = realization;
    return build_schedule(network, p);
}

std::vector<ObservableSeries> run_one(const EnsembleConfig &c, const ReducedBasis &basis, std::size_t realization) {
    const TreeNetwork network = network_for(c, realization);
    const DisorderSchedule schedule = schedule_for(c, network, realization);
    const Propagator propagator(basis, network, schedule);
    const auto times = time_grid(c.t_max, c.n_steps);
    std::vector<ObservableSeries> out;
    switch (c.kind) {
    case ObservableKind::occupation:
        out = occupation_series(propagator, basis, top_excitation(basis), times);
        break;
    case ObservableKind::otoc:
        if (!propagator.cached())
            throw ResourceError("OTOC needs every interval's decomposition cached; reduce tmax/resample-dt or layers");
        out = otoc(propagator, basis, top_excitation(basis), c.probes, c.source, times);
        break;
    case ObservableKind::holevo: {
        const StateVector initial =
            c.holevo_input == HolevoInput::superposition ? vacuum_top_superposition(basis) : top_excitation(basis);
        out = holevo(propagator, basis, initial, c.holevo_operator, c.source, c.probes, times);
        break;
    }
    }
    for (auto &s : out) {
        s.seed = c.master_seed;
        s.realization = realization;
    }
    return out;
}

} // namespace

ObservableSeries average(const std::vector<ObservableSeries> &series) {
    if (series.empty()) throw ArgumentError("nothing to average");
    ObservableSeries out = series.front();
    const std::size_t n = series.size();
    const std::size_t len = out.values.size();
    out.stddev.assign(len, 0.0);
    out.count = n;
    out.realization.reset();
    for (const auto &s : series)
        if (s.values.size() != len) throw ArgumentError("series lengths differ");
    // Deviations from the first realization keep identical inputs exact.
    const std::vector<double> &ref = series.front().values;
    for (std::size_t k = 0; k < len; ++k) {
        double shift = 0.0;
        for (const auto &s : series) shift += s.values[k] - ref[k];
        shift /= static_cast<double>(n);
        out.values[k] = ref[k] + shift;
        if (n > 1) {
            double ss = 0.0;
            for (const auto &s : series) {
                const double d = (s.values[k] - ref[k]) - shift;
                ss += d * d;
            }
            out.stddev[k] = std::sqrt(ss / static_cast<double>(n - 1));
        }
    }
    return out;
}

EnsembleResult run(const EnsembleConfig &config) {
    validate(config);
    const bool vacuum = config.vacuum || config.kind == ObservableKind::holevo;
    const ReducedBasis basis = enumerate(config.layers, vacuum);
    EnsembleResult result;
    result.per_realization.resize(config.realizations);
    parallel_for(config.realizations, config.threads, [&](std::size_t i) {
        try {
            result.per_realization[i] = run_one(config, basis, i);
        } catch (...) {
            rethrow_with_index(i);
        }
    });
    const std::size_t n_probes = result.per_realization.front().size();
    for (std::size_t p = 0; p < n_probes; ++p) {
        std::vector<ObservableSeries> column;
        column.reserve(config.realizations);
        for (const auto &r : result.per_realization) column.push_back(r[p]);
        result.averaged.push_back(average(column));
    }
    return result;
}

SpectrumEnsemble run_spectrum(const EnsembleConfig &config, std::size_t bins) {
    validate(config);
    const ReducedBasis basis = enumerate(config.layers, false);
    if (basis.slot_count() > kDenseLimit) throw ResourceError("spectrum needs dense diagonalization; too many layers");
    SpectrumEnsemble out;
    out.per_realization.resize(config.realizations);
    parallel_for(config.realizations, config.threads, [&](std::size_t i) {
        try {
            const TreeNetwork network = network_for(config, i);
            const DisorderSchedule schedule = schedule_for(config, network, i);
            const HamiltonianMatrix h = assemble(basis, network, schedule.intervals().front().detunings);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.to_dense(), Eigen::EigenvaluesOnly);
            if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
            const Eigen::VectorXd &ev = solver.eigenvalues();
            out.per_realization[i] = spacing_ratios(std::vector<double>(ev.data(), ev.data() + ev.size()), bins);
        } catch (...) {
            rethrow_with_index(i);
        }
    });
    double sum = 0.0;
    for (const auto &r : out.per_realization) {
        out.pooled.ratios.insert(out.pooled.ratios.end(), r.ratios.begin(), r.ratios.end());
        out.pooled.excluded_degenerate += r.excluded_degenerate;
    }
    for (const double r : out.pooled.ratios) sum += r;
    if (!out.pooled.ratios.empty()) out.pooled.mean_ratio = sum / static_cast<double>(out.pooled.ratios.size());
    out.pooled.histogram = ratio_histogram(out.pooled.ratios, bins);
    return out;
}

double default_arrival_window(const EnsembleConfig &config, double threshold) {
    EnsembleConfig ideal = config;
    ideal.mode = DisorderMode::ideal;
    ideal.sigma = 0.0;
    ideal.realizations = 1;
    ideal.coupling_spread = 0.0;
    ideal.kind = ObservableKind::otoc;
    ideal.probes = {TreeNetwork::first_in_layer(config.layers)};
    const auto res = run(ideal);
    const auto t = arrival_time(res.averaged.front(), threshold);
    if (!t) return config.t_max;
    return std::min(config.t_max, 0.8 * 2.0 * *t);
}

std::vector<Arrival> arrival_scatter(const EnsembleConfig &config, std::optional<double> t_window, double threshold) {
    EnsembleConfig c = config;
    c.kind = ObservableKind::otoc;
    c.probes = {TreeNetwork::first_in_layer(config.layers)};
    const double window = t_window ? *t_window : default_arrival_window(c, threshold);
    const auto res = run(c);
    std::vector<Arrival> out;
    for (std::size_t i = 0; i < res.per_realization.size(); ++i) {
        ObservableSeries s = res.per_realization[i].front();
        std::size_t keep = 0;
        while (keep < s.times.size() && s.times[keep] <= window * (1.0 + 1e-12)) ++keep;
        s.times.resize(keep);
        s.values.resize(keep);
        out.push_back({i, arrival_time(s, threshold)});
    }
    return out;
}

} // namespace avalanche
