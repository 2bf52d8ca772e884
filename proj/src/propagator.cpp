#include "avalanche/propagator.hpp"

#include "avalanche/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace avalanche {

StateVector top_excitation(const ReducedBasis &basis) {
    StateVector s;
    s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.slot_count()));
    s.amplitudes[static_cast<Eigen::Index>(basis.top_slot())] = 1.0;
    return s;
}

StateVector vacuum_top_superposition(const ReducedBasis &basis) {
    if (!basis.has_vacuum()) throw ArgumentError("superposition with the vacuum requires the vacuum slot");
    StateVector s;
    s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.slot_count()));
    s.amplitudes[static_cast<Eigen::Index>(*basis.vacuum_slot())] = std::numbers::sqrt2 / 2.0;
    s.amplitudes[static_cast<Eigen::Index>(basis.top_slot())] = std::numbers::sqrt2 / 2.0;
    return s;
}

EigenSystem eig(const HamiltonianMatrix &h) {
    if (h.dim() > kDenseLimit)
        throw ResourceError("dense diagonalization limited to " + std::to_string(kDenseLimit) + " slots");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.to_dense());
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

void apply_exponential(const EigenSystem &es, Eigen::VectorXcd &v, double tau) {
    const Eigen::MatrixXd &V = es.vectors;
    Eigen::VectorXd re = V.transpose() * v.real();
    Eigen::VectorXd im = V.transpose() * v.imag();
    for (Eigen::Index k = 0; k < re.size(); ++k) {
        const double phase = -es.values[k] * tau;
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        const double r = re[k];
        re[k] = c * r - s * im[k];
        im[k] = s * r + c * im[k];
    }
    v.real() = V * re;
    v.imag() = V * im;
}

Propagator::Propagator(const ReducedBasis &basis, const TreeNetwork &network, const DisorderSchedule &schedule,
                       std::size_t cache_budget_bytes)
    : dim_(basis.slot_count()) {
    if (dim_ > kDenseLimit)
        throw ResourceError("propagation needs dense diagonalization, limited to " + std::to_string(kDenseLimit) +
                            " slots; got " + std::to_string(dim_));
    const auto &ivs = schedule.intervals();
    if (ivs.empty() || static_cast<int>(ivs.front().detunings.size()) != network.qubit_count())
        throw ArgumentError("schedule does not match the network");
    const auto edges = std::make_shared<const std::vector<KernelEdge>>(kernel_edges(basis, network));
    const std::size_t bytes = ivs.size() * dim_ * dim_ * sizeof(double);
    cached_ = bytes <= cache_budget_bytes;
    intervals_.reserve(ivs.size());
    for (const auto &iv : ivs) {
        Interval out{iv.start, iv.end, assemble(basis, network, edges, iv.detunings), {}};
        if (cached_) out.eigen = eig(out.hamiltonian);
        intervals_.push_back(std::move(out));
    }
}

EigenSystem Propagator::eigensystem(std::size_t interval) const {
    if (cached_) return intervals_.at(interval).eigen;
    return eig(intervals_.at(interval).hamiltonian);
}

void Propagator::apply_interval(Eigen::VectorXcd &v, std::size_t k, double tau) const {
    if (tau == 0.0) return;
    if (cached_) {
        apply_exponential(intervals_[k].eigen, v, tau);
    } else {
        apply_exponential(eig(intervals_[k].hamiltonian), v, tau);
    }
}

double Propagator::tolerance() const { return 1e-12 * std::max(1.0, horizon()); }

StateVector Propagator::evolve(StateVector state, double to_time) const {
    if (static_cast<std::size_t>(state.amplitudes.size()) != dim_) throw ArgumentError("state length does not match");
    const double tol = tolerance();
    if (to_time < state.time - tol) throw ArgumentError("evolve runs forward; use evolve_adjoint to go back");
    if (to_time > horizon() + tol) throw ArgumentError("schedule ends before the requested time");
    if (state.time < -tol) throw ArgumentError("state time precedes the schedule");
    double t = std::max(state.time, 0.0);
    to_time = std::min(to_time, horizon());
    // Largest k with start_k <= t.
    auto k = static_cast<std::size_t>(
        std::upper_bound(intervals_.begin(), intervals_.end(), t, [](double x, const Interval &iv) { return x < iv.start; }) -
        intervals_.begin());
    k = k == 0 ? 0 : k - 1;
    while (t < to_time - tol) {
        while (k + 1 < intervals_.size() && t >= intervals_[k].end - tol) ++k;
        const double seg_end = std::min(intervals_[k].end, to_time);
        apply_interval(state.amplitudes, k, seg_end - t);
        t = seg_end;
    }
    state.time = to_time;
    return state;
}

StateVector Propagator::evolve_adjoint(StateVector state, double to_time) const {
    if (static_cast<std::size_t>(state.amplitudes.size()) != dim_) throw ArgumentError("state length does not match");
    const double tol = tolerance();
    if (to_time > state.time + tol) throw ArgumentError("evolve_adjoint runs backward; use evolve to go forward");
    if (to_time < -tol) throw ArgumentError("schedule starts at t = 0");
    if (state.time > horizon() + tol) throw ArgumentError("state time lies beyond the schedule");
    double t = std::min(state.time, horizon());
    to_time = std::max(to_time, 0.0);
    // Smallest k with end_k >= t.
    auto k = static_cast<std::size_t>(
        std::lower_bound(intervals_.begin(), intervals_.end(), t, [](const Interval &iv, double x) { return iv.end < x; }) -
        intervals_.begin());
    k = std::min(k, intervals_.size() - 1);
    while (t > to_time + tol) {
        while (k > 0 && t <= intervals_[k].start + tol) --k;
        const double seg_start = std::max(intervals_[k].start, to_time);
        apply_interval(state.amplitudes, k, -(t - seg_start));
        t = seg_start;
    }
    state.time = to_time;
    return state;
}

} // namespace avalanche
