#pragma once

#include "avalanche/disorder.hpp"
#include "avalanche/hamiltonian.hpp"
#include "avalanche/reduced_basis.hpp"

#include <Eigen/Dense>

#include <vector>

namespace avalanche {

/// Amplitudes over basis slots at time `time` (units of 1/g).
struct StateVector {
    Eigen::VectorXcd amplitudes;
    double time = 0.0;

    double norm() const { return amplitudes.norm(); }
};

/// Unit amplitude on the top-qubit excitation at t = 0.
StateVector top_excitation(const ReducedBasis &basis);
/// (|vacuum> + |top>)/sqrt(2); requires the vacuum slot.
StateVector vacuum_top_superposition(const ReducedBasis &basis);

struct EigenSystem {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // orthonormal columns
};

/// Dense symmetric eigendecomposition; ResourceError above kDenseLimit.
EigenSystem eig(const HamiltonianMatrix &h);

/// Exact propagation under a piecewise-constant schedule. Each interval's
/// Hamiltonian is diagonalized once and reused for every step inside it, in
/// both time directions.
class Propagator {
  public:
    /// Decompositions are cached when they fit in `cache_budget_bytes`;
    /// otherwise each interval is diagonalized again whenever it is crossed.
    Propagator(const ReducedBasis &basis, const TreeNetwork &network, const DisorderSchedule &schedule,
               std::size_t cache_budget_bytes = std::size_t{1} << 30);

    /// Forward evolution from state.time to to_time >= state.time.
    StateVector evolve(StateVector state, double to_time) const;
    /// Backward evolution to to_time <= state.time using the adjoints of the
    /// same interval propagators, applied in reverse order.
    StateVector evolve_adjoint(StateVector state, double to_time) const;

    std::size_t dim() const { return dim_; }
    double horizon() const { return intervals_.back().end; }
    std::size_t interval_count() const { return intervals_.size(); }
    bool cached() const { return cached_; }
    const HamiltonianMatrix &hamiltonian(std::size_t interval) const { return intervals_[interval].hamiltonian; }
    /// The interval's decomposition; computed on the spot when not cached.
    EigenSystem eigensystem(std::size_t interval) const;

  private:
    struct Interval {
        double start = 0.0;
        double end = 0.0;
        HamiltonianMatrix hamiltonian;
        EigenSystem eigen; // empty unless cached
    };

    // v <- exp(-i H_k tau) v
    void apply_interval(Eigen::VectorXcd &v, std::size_t k, double tau) const;
    double tolerance() const;

    std::size_t dim_ = 0;
    bool cached_ = false;
    std::vector<Interval> intervals_;
};

/// v <- V diag(exp(-i lambda tau)) V^T v.
void apply_exponential(const EigenSystem &es, Eigen::VectorXcd &v, double tau);

} // namespace avalanche
