#pragma once

#include <cstdint>
#include <vector>

namespace avalanche {

/// Heap-indexed qubit label: root is 1, the children of q are 2q and 2q+1.
using Qubit = int;

inline constexpr int kMaxLayers = 6;

/// One avalanche vertex: the parent de-excites while both children are excited
/// (and the reverse process). `coupling` is in units of the global g.
struct Kernel {
    Qubit parent = 1;
    Qubit left = 2;
    Qubit right = 3;
    double coupling = 1.0;
};

/// Layered binary tree of qubits with one kernel per non-leaf qubit.
/// Immutable after construction.
class TreeNetwork {
  public:
    int layers() const { return layers_; }
    int qubit_count() const { return (1 << layers_) - 1; }
    int kernel_count() const { return static_cast<int>(kernels_.size()); }

    /// Kernels in heap order of their parent qubit (top-down).
    const std::vector<Kernel> &kernels() const { return kernels_; }
    const Kernel &kernel_of(Qubit parent) const;

    bool valid(Qubit q) const { return q >= 1 && q <= qubit_count(); }

    /// Layer of q, 1-based. Throws ArgumentError for q outside the tree.
    int layer_of(Qubit q) const;

    /// Qubits of layer j are 2^(j-1) .. 2^j - 1.
    static Qubit first_in_layer(int layer) { return Qubit{1} << (layer - 1); }
    static Qubit last_in_layer(int layer) { return (Qubit{1} << layer) - 1; }
    static int layer_size(int layer) { return 1 << (layer - 1); }

  private:
    friend TreeNetwork build_tree(int layers, double g);
    friend TreeNetwork build_tree(int layers, std::vector<double> couplings);

    int layers_ = 1;
    std::vector<Kernel> kernels_;
};

/// Uniform coupling g on every kernel. Requires 1 <= layers <= 6.
TreeNetwork build_tree(int layers, double g = 1.0);

/// Explicit per-kernel couplings in heap order of the parent; used for the
/// randomized-coupling option.
TreeNetwork build_tree(int layers, std::vector<double> couplings);

/// Per-kernel couplings drawn uniformly from [g(1-eta), g(1+eta)], 0 <= eta < 1,
/// from a stream keyed by (master_seed, realization) that is separate from
/// the detuning stream.
std::vector<double> randomized_couplings(int layers, double g, double eta, std::uint64_t master_seed,
                                         std::uint64_t realization);

/// floor(log2 q) + 1, independent of any particular tree.
int layer_of(Qubit q);

} // namespace avalanche
