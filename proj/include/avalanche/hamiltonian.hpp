#pragma once

#include "avalanche/network.hpp"
#include "avalanche/reduced_basis.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace avalanche {

/// Largest slot count for which dense matrices are formed.
inline constexpr std::size_t kDenseLimit = 1500;

/// A pair of basis slots connected by one kernel firing. `high` holds the
/// parent excitation, `low` the two child excitations; m < n are the slots in
/// ascending order.
struct KernelEdge {
    std::size_t m = 0;
    std::size_t n = 0;
    int kernel = 0;      // index into TreeNetwork::kernels()
    std::size_t high = 0; // slot with the parent occupied
    std::size_t low = 0;  // slot with both children occupied
};

/// All edges of the unit-charge state graph, sorted by (m, n).
std::vector<KernelEdge> kernel_edges(const ReducedBasis &basis, const TreeNetwork &network);

/// Real symmetric reduced Hamiltonian in the rotating frame:
/// H = sum_m E_m |m><m| + sum_edges g_v (|m><n| + |n><m|).
/// The vacuum slot, when present, has zero diagonal and no edges.
class HamiltonianMatrix {
  public:
    std::size_t dim() const { return static_cast<std::size_t>(diagonal_.size()); }
    const Eigen::VectorXd &diagonal() const { return diagonal_; }
    const std::vector<KernelEdge> &edges() const { return *edges_; }
    const std::vector<double> &couplings() const { return couplings_; }
    double coupling(const KernelEdge &e) const { return couplings_[static_cast<std::size_t>(e.kernel)]; }

    /// y = H v.
    Eigen::VectorXcd apply(const Eigen::VectorXcd &v) const;
    /// Throws ResourceError above kDenseLimit.
    Eigen::MatrixXd to_dense() const;

  private:
    friend HamiltonianMatrix assemble(const ReducedBasis &, const TreeNetwork &,
                                      std::shared_ptr<const std::vector<KernelEdge>>, const std::vector<double> &);

    Eigen::VectorXd diagonal_;
    std::shared_ptr<const std::vector<KernelEdge>> edges_;
    std::vector<double> couplings_;
};

/// `detunings` holds Delta_q at index q-1; E_m = sum of Delta_q over occupied q.
HamiltonianMatrix assemble(const ReducedBasis &basis, const TreeNetwork &network,
                           std::shared_ptr<const std::vector<KernelEdge>> edges, const std::vector<double> &detunings);

HamiltonianMatrix assemble(const ReducedBasis &basis, const TreeNetwork &network, const std::vector<double> &detunings);

} // namespace avalanche
