#pragma once

#include "avalanche/network.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace avalanche {

/// Occupation of every qubit of a tree; bit (q-1) is set iff qubit q is excited.
/// Trees up to six layers (63 qubits) fit in one word.
struct OccupationPattern {
    std::uint64_t bits = 0;

    bool occupied(Qubit q) const { return (bits >> (q - 1)) & 1U; }
    static std::uint64_t mask(Qubit q) { return std::uint64_t{1} << (q - 1); }
    static OccupationPattern single(Qubit q) { return {mask(q)}; }

    /// '0'/'1' characters for qubits 1..qubit_count, in that order.
    std::string to_string(int qubit_count) const;
    static OccupationPattern from_string(const std::string &s);

    friend bool operator==(OccupationPattern, OccupationPattern) = default;
};

/// Layer-weighted excitation number sum_q n_q / 2^(layer(q)-1), kept exact as
/// a reduced fraction.
struct Charge {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
    bool is_one() const { return numerator == denominator; }
    friend bool operator==(const Charge &, const Charge &) = default;
};

Charge conserved_charge(OccupationPattern p, int layers);

/// D(1) = 1, D(L) = D(L-1)^2 + 1.
std::uint64_t dimension(int layers);

/// The unit-charge sector of an L-layer tree in recursive order: index 1 is
/// the top excitation, index (m-1)*D(L-1) + n + 1 is right-subtree state m
/// combined with left-subtree state n. Optionally carries the all-zero
/// pattern as an extra slot.
///
/// Two numbering schemes are exposed. `index` is the 1-based state number
/// (vacuum = 0). `slot` is the 0-based position in amplitude vectors: the
/// vacuum occupies slot 0 when enabled, so slot = index in that case and
/// slot = index - 1 otherwise.
class ReducedBasis {
  public:
    int layers() const { return layers_; }
    int qubit_count() const { return (1 << layers_) - 1; }
    /// Number of unit-charge states D.
    std::size_t dimension() const { return states_.size(); }
    bool has_vacuum() const { return include_vacuum_; }
    /// Length of amplitude vectors: D, plus one with the vacuum.
    std::size_t slot_count() const { return states_.size() + (include_vacuum_ ? 1 : 0); }

    /// State `index` in 1..D.
    OccupationPattern state(std::size_t index) const;
    /// 1..D, or 0 for the vacuum when enabled; nullopt if not a member.
    std::optional<std::size_t> index_of(OccupationPattern p) const;

    std::size_t slot_of_index(std::size_t index) const { return include_vacuum_ ? index : index - 1; }
    std::size_t index_of_slot(std::size_t slot) const { return include_vacuum_ ? slot : slot + 1; }
    std::optional<std::size_t> slot_of(OccupationPattern p) const;
    OccupationPattern pattern_at_slot(std::size_t slot) const;
    std::optional<std::size_t> vacuum_slot() const {
        return include_vacuum_ ? std::optional<std::size_t>{0} : std::nullopt;
    }
    std::size_t top_slot() const { return slot_of_index(1); }

    const std::vector<OccupationPattern> &states() const { return states_; }

  private:
    friend ReducedBasis enumerate(int layers, bool include_vacuum);

    int layers_ = 1;
    bool include_vacuum_ = false;
    std::vector<OccupationPattern> states_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Recursive enumeration; layers must be in [1, 6].
ReducedBasis enumerate(int layers, bool include_vacuum = false);

/// Exhaustive scan of all 2^(2^L-1) patterns: unit charge, connected to the
/// top excitation by kernel firings; ascending by bits. Test oracle; layers <= 4.
std::vector<OccupationPattern> brute_force_enumerate(int layers);

/// +1 where qubit q is occupied, -1 otherwise (vacuum slot included), indexed
/// by slot.
std::vector<double> sigma_z_diagonal(const ReducedBasis &basis, Qubit q);

} // namespace avalanche
