#pragma once

#include <cstdint>
#include <random>

namespace avalanche {

using RandomEngine = std::mt19937_64;

/// Independent stream for (master_seed, stream). Streams are seeded directly
/// from the pair, so realization i never depends on draws made for i-1.
inline RandomEngine make_stream(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t tag = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    return RandomEngine(seq);
}

/// Uniform on [lo, hi] from the top 53 bits of one engine draw. Spelled out
/// instead of std::uniform_real_distribution so schedules are identical
/// across standard libraries.
inline double uniform(RandomEngine &engine, double lo, double hi) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

} // namespace avalanche
