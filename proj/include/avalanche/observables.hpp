#pragma once

#include "avalanche/propagator.hpp"
#include "avalanche/reduced_basis.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace avalanche {

enum class SeriesKind { occupation, otoc, commutator, holevo };

std::string_view to_string(SeriesKind kind);

/// A time-gridded observable. For `occupation` the probe is a layer (the
/// value is the layer's mean occupation); otherwise it is a qubit and
/// `source` is the second qubit of the pair. `stddev`/`count` are filled for
/// ensemble averages, and `realization` is empty for them.
struct ObservableSeries {
    SeriesKind kind = SeriesKind::otoc;
    int probe = 1;
    int source = 1;
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> stddev;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> realization;
};

/// n_steps uniform points on [0, t_max], both ends included.
std::vector<double> time_grid(double t_max, std::size_t n_steps);

/// <psi| (1 + sigma^z_q)/2 |psi>.
double mean_occupation(const ReducedBasis &basis, const StateVector &state, Qubit q);
/// Mean occupation of each layer's qubits, layers 1..L.
std::vector<double> layer_occupations(const ReducedBasis &basis, const StateVector &state);

/// Occupation series for every layer, one forward sweep.
std::vector<ObservableSeries> occupation_series(const Propagator &propagator, const ReducedBasis &basis,
                                                const StateVector &initial, const std::vector<double> &times);

/// F_ij(t) = <psi| W_i(t)^dag V_j^dag W_i(t) V_j |psi> with W = sigma^z_probe,
/// V = sigma^z_source and the same realization forward and backward. One
/// series per probe; the real part is reported and the imaginary part must
/// stay below 1e-9 (NumericalError otherwise).
std::vector<ObservableSeries> otoc(const Propagator &propagator, const ReducedBasis &basis, const StateVector &initial,
                                   const std::vector<Qubit> &probes, Qubit source, const std::vector<double> &times);

/// C_ij(t) = 2 (1 - Re F_ij(t)).
ObservableSeries commutator_from(const ObservableSeries &otoc_series);

/// Single-qubit reduced density matrix, index 0 = unoccupied, 1 = occupied.
Eigen::Matrix2cd reduced_density(const ReducedBasis &basis, const StateVector &state, Qubit q);

/// -Tr rho log2 rho. Eigenvalues down to -1e-9 are clamped to zero; anything
/// more negative raises NumericalError.
double von_neumann_entropy(const Eigen::Matrix2cd &rho);

/// Local operation distinguishing the two Holevo branches.
enum class LocalOperator {
    sigma_z, // diagonal Pauli-z
    flip,    // Pauli-x; only defined where the flipped pattern stays in the basis
};

LocalOperator parse_local_operator(std::string_view name);
std::string_view to_string(LocalOperator op);

StateVector apply_local(const ReducedBasis &basis, const StateVector &state, LocalOperator op, Qubit q);

/// chi_ij(t) = S[(rho_j + rho'_j)/2] - (S(rho_j) + S(rho'_j))/2 in bits, where
/// rho' evolves from op_i applied to `initial`. Requires the vacuum slot.
std::vector<ObservableSeries> holevo(const Propagator &propagator, const ReducedBasis &basis,
                                     const StateVector &initial, LocalOperator op, Qubit op_qubit,
                                     const std::vector<Qubit> &probes, const std::vector<double> &times);

/// First grid time whose OTOC value is <= threshold.
std::optional<double> arrival_time(const ObservableSeries &series, double threshold = -0.5);
/// First grid time whose value is strictly above threshold.
std::optional<double> first_time_exceeding(const ObservableSeries &series, double threshold);

} // namespace avalanche
