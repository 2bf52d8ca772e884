#include "avalanche/hamiltonian.hpp"

#include "avalanche/errors.hpp"

#include <algorithm>
#include <tuple>

namespace avalanche {

std::vector<KernelEdge> kernel_edges(const ReducedBasis &basis, const TreeNetwork &network) {
    if (basis.layers() != network.layers()) throw ArgumentError("basis and network layer counts differ");
    std::vector<KernelEdge> edges;
    const auto &states = basis.states();
    for (std::size_t k = 0; k < states.size(); ++k) {
        const OccupationPattern p = states[k];
        for (int v = 0; v < network.kernel_count(); ++v) {
            const Kernel &kern = network.kernels()[static_cast<std::size_t>(v)];
            if (!p.occupied(kern.parent) || p.occupied(kern.left) || p.occupied(kern.right)) continue;
            const OccupationPattern fired{p.bits ^ OccupationPattern::mask(kern.parent) ^ OccupationPattern::mask(kern.left) ^
                                          OccupationPattern::mask(kern.right)};
            const auto target = basis.slot_of(fired);
            // Charge is conserved by a firing, so the target is always a member.
            if (!target) throw NumericalError("kernel firing left the unit-charge sector");
            const std::size_t src = basis.slot_of_index(k + 1);
            edges.push_back({std::min(src, *target), std::max(src, *target), v, src, *target});
        }
    }
    std::sort(edges.begin(), edges.end(),
              [](const KernelEdge &a, const KernelEdge &b) { return std::tie(a.m, a.n) < std::tie(b.m, b.n); });
    return edges;
}

HamiltonianMatrix assemble(const ReducedBasis &basis, const TreeNetwork &network,
                           std::shared_ptr<const std::vector<KernelEdge>> edges, const std::vector<double> &detunings) {
    if (basis.layers() != network.layers()) throw ArgumentError("basis and network layer counts differ");
    if (static_cast<int>(detunings.size()) != network.qubit_count())
        throw ArgumentError("one detuning per qubit required");
    HamiltonianMatrix h;
    h.diagonal_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.slot_count()));
    const int n = network.qubit_count();
    for (std::size_t k = 1; k <= basis.dimension(); ++k) {
        const OccupationPattern p = basis.state(k);
        double e = 0.0;
        for (int q = 1; q <= n; ++q)
            if (p.occupied(q)) e += detunings[static_cast<std::size_t>(q - 1)];
        h.diagonal_[static_cast<Eigen::Index>(basis.slot_of_index(k))] = e;
    }
    h.edges_ = std::move(edges);
    h.couplings_.reserve(static_cast<std::size_t>(network.kernel_count()));
    for (const Kernel &v : network.kernels()) h.couplings_.push_back(v.coupling);
    return h;
}

HamiltonianMatrix assemble(const ReducedBasis &basis, const TreeNetwork &network, const std::vector<double> &detunings) {
    return assemble(basis, network, std::make_shared<const std::vector<KernelEdge>>(kernel_edges(basis, network)),
                    detunings);
}

Eigen::VectorXcd HamiltonianMatrix::apply(const Eigen::VectorXcd &v) const {
    if (static_cast<std::size_t>(v.size()) != dim()) throw ArgumentError("vector length does not match the Hamiltonian");
    Eigen::VectorXcd y = diagonal_.cast<std::complex<double>>().cwiseProduct(v);
    for (const KernelEdge &e : *edges_) {
        const double g = coupling(e);
        const auto m = static_cast<Eigen::Index>(e.m);
        const auto n = static_cast<Eigen::Index>(e.n);
        y[m] += g * v[n];
        y[n] += g * v[m];
    }
    return y;
}

Eigen::MatrixXd HamiltonianMatrix::to_dense() const {
    if (dim() > kDenseLimit) throw ResourceError("dense Hamiltonian limited to " + std::to_string(kDenseLimit) + " slots");
    const auto d = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    m.diagonal() = diagonal_;
    for (const KernelEdge &e : *edges_) {
        m(static_cast<Eigen::Index>(e.m), static_cast<Eigen::Index>(e.n)) += coupling(e);
        m(static_cast<Eigen::Index>(e.n), static_cast<Eigen::Index>(e.m)) += coupling(e);
    }
    return m;
}

} // namespace avalanche
