#include "avalanche/reduced_basis.hpp"

#include "avalanche/errors.hpp"

#include <bit>
#include <numeric>

namespace avalanche {

std::string OccupationPattern::to_string(int qubit_count) const {
    std::string s(static_cast<std::size_t>(qubit_count), '0');
    for (int q = 1; q <= qubit_count; ++q)
        if (occupied(q)) s[static_cast<std::size_t>(q - 1)] = '1';
    return s;
}

OccupationPattern OccupationPattern::from_string(const std::string &s) {
    if (s.size() > 64) throw ArgumentError("pattern longer than 64 qubits");
    OccupationPattern p;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            p.bits |= std::uint64_t{1} << i;
        else if (s[i] != '0')
            throw ArgumentError("pattern must consist of '0' and '1'");
    }
    return p;
}

Charge conserved_charge(OccupationPattern p, int layers) {
    if (layers < 1 || layers > kMaxLayers) throw ArgumentError("layers out of range");
    const int n = (1 << layers) - 1;
    if (static_cast<int>(std::bit_width(p.bits)) > n) throw ArgumentError("pattern has bits beyond the tree");
    std::uint64_t num = 0;
    for (int q = 1; q <= n; ++q)
        if (p.occupied(q)) num += std::uint64_t{1} << (layers - layer_of(q));
    const std::uint64_t den = std::uint64_t{1} << (layers - 1);
    const std::uint64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

std::uint64_t dimension(int layers) {
    if (layers < 1) throw ArgumentError("layers must be >= 1");
    std::uint64_t d = 1;
    for (int l = 2; l <= layers; ++l) d = d * d + 1;
    return d;
}

namespace {

// States of the subtree rooted at `root` with `depth` layers, in recursive order.
std::vector<std::uint64_t> enumerate_subtree(Qubit root, int depth) {
    std::vector<std::uint64_t> out;
    out.push_back(OccupationPattern::mask(root));
    if (depth == 1) return out;
    const auto left = enumerate_subtree(2 * root, depth - 1);
    const auto right = enumerate_subtree(2 * root + 1, depth - 1);
    out.reserve(1 + left.size() * right.size());
    for (const auto r : right)
        for (const auto l : left) out.push_back(r | l);
    return out;
}

} // namespace

ReducedBasis enumerate(int layers, bool include_vacuum) {
    if (layers < 1) throw ArgumentError("layers must be >= 1");
    if (layers > kMaxLayers) throw ResourceError("enumeration supports up to 6 layers, got " + std::to_string(layers));
    ReducedBasis basis;
    basis.layers_ = layers;
    basis.include_vacuum_ = include_vacuum;
    const auto masks = enumerate_subtree(1, layers);
    basis.states_.reserve(masks.size());
    basis.index_.reserve(masks.size() + 1);
    for (std::size_t k = 0; k < masks.size(); ++k) {
        basis.states_.push_back({masks[k]});
        basis.index_.emplace(masks[k], k + 1);
    }
    return basis;
}

OccupationPattern ReducedBasis::state(std::size_t index) const {
    if (index < 1 || index > states_.size()) throw ArgumentError("state index out of range");
    return states_[index - 1];
}

std::optional<std::size_t> ReducedBasis::index_of(OccupationPattern p) const {
    if (p.bits == 0) return include_vacuum_ ? std::optional<std::size_t>{0} : std::nullopt;
    const auto it = index_.find(p.bits);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> ReducedBasis::slot_of(OccupationPattern p) const {
    const auto idx = index_of(p);
    if (!idx) return std::nullopt;
    return slot_of_index(*idx);
}

OccupationPattern ReducedBasis::pattern_at_slot(std::size_t slot) const {
    if (include_vacuum_ && slot == 0) return {};
    return state(index_of_slot(slot));
}

std::vector<OccupationPattern> brute_force_enumerate(int layers) {
    if (layers < 1) throw ArgumentError("layers must be >= 1");
    if (layers > 4) throw ResourceError("brute-force enumeration supports up to 4 layers");
    const int n = (1 << layers) - 1;
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<char> unit(count, 0);
    for (std::uint64_t bits = 0; bits < count; ++bits) unit[bits] = conserved_charge({bits}, layers).is_one();

    // Unit charge alone admits patterns such as a parent together with its
    // own children; keep the part connected to the top excitation by kernel
    // firings.
    std::vector<char> seen(count, 0);
    std::vector<std::uint64_t> stack{OccupationPattern::mask(1)};
    seen[stack.front()] = 1;
    while (!stack.empty()) {
        const std::uint64_t bits = stack.back();
        stack.pop_back();
        for (Qubit p = 1; 2 * p + 1 <= n; ++p) {
            const std::uint64_t top = OccupationPattern::mask(p);
            const std::uint64_t kids = OccupationPattern::mask(2 * p) | OccupationPattern::mask(2 * p + 1);
            std::uint64_t next = 0;
            if ((bits & (top | kids)) == top) next = (bits & ~top) | kids;
            else if ((bits & (top | kids)) == kids) next = (bits & ~kids) | top;
            else continue;
            if (unit[next] && !seen[next]) {
                seen[next] = 1;
                stack.push_back(next);
            }
        }
    }
    std::vector<OccupationPattern> out;
    for (std::uint64_t bits = 0; bits < count; ++bits)
        if (seen[bits]) out.push_back({bits});
    return out;
}

std::vector<double> sigma_z_diagonal(const ReducedBasis &basis, Qubit q) {
    if (q < 1 || q > basis.qubit_count()) throw ArgumentError("qubit outside the basis tree");
    std::vector<double> z(basis.slot_count());
    for (std::size_t s = 0; s < z.size(); ++s) z[s] = basis.pattern_at_slot(s).occupied(q) ? 1.0 : -1.0;
    return z;
}

} // namespace avalanche
