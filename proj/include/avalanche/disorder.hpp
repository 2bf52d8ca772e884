#pragma once

#include "avalanche/network.hpp"
#include "avalanche/random.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace avalanche {

enum class DisorderMode { ideal, static_, dynamic };

DisorderMode parse_mode(std::string_view name);
std::string_view to_string(DisorderMode mode);

/// Mismatch epsilon_v per kernel (heap order of parents), each uniform on
/// [-sigma, +sigma].
std::vector<double> sample_vertex_mismatches(const TreeNetwork &network, double sigma, RandomEngine &engine);

/// Per-qubit detunings (index q-1) realizing the given mismatches: the root
/// and every left child are pinned to zero, and the right child absorbs
/// Delta_parent - epsilon_v, so Delta_parent - Delta_left - Delta_right = epsilon_v.
std::vector<double> mismatches_to_detunings(const TreeNetwork &network, const std::vector<double> &mismatches);

/// Inverse of the above for any detuning assignment.
std::vector<double> detunings_to_mismatches(const TreeNetwork &network, const std::vector<double> &detunings);

struct ScheduleParams {
    DisorderMode mode = DisorderMode::ideal;
    double sigma = 0.0;       // units of g
    double resample_dt = 0.0; // units of 1/g, dynamic mode only
    double t_max = 1.0;
    std::uint64_t master_seed = 0;
    std::uint64_t realization = 0;
};

/// Piecewise-constant detunings; one interval for ideal and static modes.
class DisorderSchedule {
  public:
    struct Interval {
        double start = 0.0;
        double end = 0.0;
        std::vector<double> mismatches; // per kernel
        std::vector<double> detunings;  // per qubit, index q-1
    };

    const ScheduleParams &params() const { return params_; }
    DisorderMode mode() const { return params_.mode; }
    /// Latest time the schedule covers.
    double horizon() const { return intervals_.back().end; }
    const std::vector<Interval> &intervals() const { return intervals_; }

    /// Interval containing t; the right end of the last interval belongs to it.
    std::size_t interval_at(double t) const;
    double detuning(Qubit q, double t) const;

  private:
    friend DisorderSchedule build_schedule(const TreeNetwork &, const ScheduleParams &);
    friend DisorderSchedule with_detuning_offsets(const TreeNetwork &, DisorderSchedule, const std::vector<double> &);

    ScheduleParams params_;
    std::vector<Interval> intervals_;
};

DisorderSchedule build_schedule(const TreeNetwork &network, const ScheduleParams &params);

/// Adds a fixed per-qubit offset (index q-1) to every interval's detunings
/// and recomputes the mismatches. An offset of c / 2^(layer-1) leaves every
/// mismatch unchanged and shifts unit-charge energies by c.
DisorderSchedule with_detuning_offsets(const TreeNetwork &network, DisorderSchedule schedule,
                                       const std::vector<double> &offsets);

/// Number of resampling intervals needed to cover t_max, tolerant of
/// round-off in t_max / dt.
std::size_t interval_count(double t_max, double dt);

} // namespace avalanche
