#include "avalanche/network.hpp"

#include "avalanche/errors.hpp"
#include "avalanche/random.hpp"

#include <bit>
#include <string>

namespace avalanche {

namespace {

void check_layers(int layers) {
    if (layers < 1 || layers > kMaxLayers)
        throw ArgumentError("layers must be in [1, " + std::to_string(kMaxLayers) + "], got " + std::to_string(layers));
}

} // namespace

int layer_of(Qubit q) {
    if (q < 1) throw ArgumentError("qubit index must be >= 1, got " + std::to_string(q));
    return std::bit_width(static_cast<unsigned>(q));
}

int TreeNetwork::layer_of(Qubit q) const {
    if (!valid(q))
        throw ArgumentError("qubit " + std::to_string(q) + " outside a " + std::to_string(layers_) + "-layer tree");
    return avalanche::layer_of(q);
}

const Kernel &TreeNetwork::kernel_of(Qubit parent) const {
    if (parent < 1 || parent > kernel_count())
        throw ArgumentError("qubit " + std::to_string(parent) + " has no kernel");
    return kernels_[static_cast<std::size_t>(parent - 1)];
}

TreeNetwork build_tree(int layers, double g) {
    check_layers(layers);
    const int n_kernels = (1 << (layers - 1)) - 1;
    return build_tree(layers, std::vector<double>(static_cast<std::size_t>(n_kernels), g));
}

TreeNetwork build_tree(int layers, std::vector<double> couplings) {
    check_layers(layers);
    const int n_kernels = (1 << (layers - 1)) - 1;
    if (static_cast<int>(couplings.size()) != n_kernels)
        throw ArgumentError("expected " + std::to_string(n_kernels) + " couplings, got " +
                            std::to_string(couplings.size()));
    TreeNetwork net;
    net.layers_ = layers;
    net.kernels_.reserve(couplings.size());
    for (int p = 1; p <= n_kernels; ++p) {
        const double c = couplings[static_cast<std::size_t>(p - 1)];
        if (!(c > 0.0)) throw ArgumentError("kernel couplings must be positive");
        net.kernels_.push_back(Kernel{p, 2 * p, 2 * p + 1, c});
    }
    return net;
}

std::vector<double> randomized_couplings(int layers, double g, double eta, std::uint64_t master_seed,
                                         std::uint64_t realization) {
    check_layers(layers);
    if (!(g > 0.0)) throw ArgumentError("g must be positive");
    if (!(eta >= 0.0 && eta < 1.0)) throw ArgumentError("coupling spread eta must be in [0, 1)");
    auto engine = make_stream(master_seed, realization, /*tag=*/0x67);
    std::vector<double> out(static_cast<std::size_t>((1 << (layers - 1)) - 1));
    for (auto &c : out) c = uniform(engine, g * (1.0 - eta), g * (1.0 + eta));
    return out;
}

} // namespace avalanche
