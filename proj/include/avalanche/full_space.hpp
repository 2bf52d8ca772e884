#pragma once

// Brute-force evolution in the unreduced 2^(2^L - 1) dimensional space, built
// from tensor products of single-qubit raising and lowering operators. Used
// as an independent check on the reduced-space machinery; small trees only.

#include "avalanche/disorder.hpp"
#include "avalanche/network.hpp"
#include "avalanche/propagator.hpp"
#include "avalanche/reduced_basis.hpp"

#include <Eigen/Dense>

namespace avalanche::full_space {

inline constexpr int kMaxLayers = 3;

/// Computational-basis index of a pattern; qubit 1 is the most significant
/// tensor factor.
std::size_t index_of(OccupationPattern p, int qubit_count);

/// Rotating-frame Hamiltonian sum_q Delta_q n_q + sum_v g_v (s-_p s+_l s+_r + h.c.).
Eigen::MatrixXcd hamiltonian(const TreeNetwork &network, const std::vector<double> &detunings);

/// Evolves the product state `initial` from 0 to t under the schedule.
Eigen::VectorXcd evolve(const TreeNetwork &network, const DisorderSchedule &schedule, double t,
                        OccupationPattern initial);

/// Places reduced amplitudes (vacuum slot included) into the full space.
Eigen::VectorXcd embed(const ReducedBasis &basis, const Eigen::VectorXcd &reduced);

/// Same as `evolve`, for an arbitrary full-space start vector.
Eigen::VectorXcd evolve_vector(const TreeNetwork &network, const DisorderSchedule &schedule, double t,
                               Eigen::VectorXcd psi);

/// Diagonal Pauli-z on qubit q.
Eigen::VectorXd sigma_z(int qubit_count, Qubit q);

/// 2x2 reduced density matrix of qubit q by explicit partial trace, with
/// index 0 = unoccupied and 1 = occupied.
Eigen::Matrix2cd reduced_density(const Eigen::VectorXcd &psi, int qubit_count, Qubit q);

} // namespace avalanche::full_space
