#include "avalanche/disorder.hpp"

#include "avalanche/errors.hpp"

#include <algorithm>
#include <cmath>

namespace avalanche {

DisorderMode parse_mode(std::string_view name) {
    if (name == "ideal") return DisorderMode::ideal;
    if (name == "static") return DisorderMode::static_;
    if (name == "dynamic") return DisorderMode::dynamic;
    throw ArgumentError("unknown disorder mode '" + std::string(name) + "'");
}

std::string_view to_string(DisorderMode mode) {
    switch (mode) {
    case DisorderMode::ideal: return "ideal";
    case DisorderMode::static_: return "static";
    case DisorderMode::dynamic: return "dynamic";
    }
    return "?";
}

std::vector<double> sample_vertex_mismatches(const TreeNetwork &network, double sigma, RandomEngine &engine) {
    if (!(sigma >= 0.0)) throw ArgumentError("disorder strength sigma must be >= 0");
    std::vector<double> eps(static_cast<std::size_t>(network.kernel_count()));
    for (auto &e : eps) e = uniform(engine, -sigma, sigma);
    return eps;
}

std::vector<double> mismatches_to_detunings(const TreeNetwork &network, const std::vector<double> &mismatches) {
    if (static_cast<int>(mismatches.size()) != network.kernel_count())
        throw ArgumentError("one mismatch per kernel required");
    std::vector<double> delta(static_cast<std::size_t>(network.qubit_count()), 0.0);
    for (std::size_t k = 0; k < mismatches.size(); ++k) {
        const Kernel &v = network.kernels()[k];
        delta[static_cast<std::size_t>(v.left - 1)] = 0.0;
        delta[static_cast<std::size_t>(v.right - 1)] = delta[static_cast<std::size_t>(v.parent - 1)] - mismatches[k];
    }
    return delta;
}

std::vector<double> detunings_to_mismatches(const TreeNetwork &network, const std::vector<double> &detunings) {
    if (static_cast<int>(detunings.size()) != network.qubit_count())
        throw ArgumentError("one detuning per qubit required");
    std::vector<double> eps;
    eps.reserve(static_cast<std::size_t>(network.kernel_count()));
    for (const Kernel &v : network.kernels())
        eps.push_back(detunings[static_cast<std::size_t>(v.parent - 1)] - detunings[static_cast<std::size_t>(v.left - 1)] -
                      detunings[static_cast<std::size_t>(v.right - 1)]);
    return eps;
}

std::size_t interval_count(double t_max, double dt) {
    const double ratio = t_max / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, rounded)) return std::max<std::size_t>(1, static_cast<std::size_t>(rounded));
    return static_cast<std::size_t>(std::ceil(ratio));
}

std::size_t DisorderSchedule::interval_at(double t) const {
    if (intervals_.size() == 1) return 0;
    const auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                                     [](double x, const Interval &iv) { return x < iv.end; });
    if (it == intervals_.end()) return intervals_.size() - 1;
    return static_cast<std::size_t>(it - intervals_.begin());
}

double DisorderSchedule::detuning(Qubit q, double t) const {
    const auto &iv = intervals_[interval_at(t)];
    if (q < 1 || q > static_cast<int>(iv.detunings.size())) throw ArgumentError("qubit outside the schedule's tree");
    return iv.detunings[static_cast<std::size_t>(q - 1)];
}

DisorderSchedule build_schedule(const TreeNetwork &network, const ScheduleParams &params) {
    if (!(params.t_max > 0.0)) throw ArgumentError("t_max must be positive");
    if (!(params.sigma >= 0.0)) throw ArgumentError("disorder strength sigma must be >= 0");
    if (params.mode == DisorderMode::dynamic && !(params.resample_dt > 0.0))
        throw ArgumentError("dynamic disorder requires resample_dt > 0");

    DisorderSchedule s;
    s.params_ = params;
    auto engine = make_stream(params.master_seed, params.realization);
    auto make_interval = [&](double start, double end, std::vector<double> eps) {
        DisorderSchedule::Interval iv;
        iv.start = start;
        iv.end = end;
        iv.detunings = mismatches_to_detunings(network, eps);
        iv.mismatches = std::move(eps);
        return iv;
    };

    switch (params.mode) {
    case DisorderMode::ideal:
        s.intervals_.push_back(
            make_interval(0.0, params.t_max, std::vector<double>(static_cast<std::size_t>(network.kernel_count()), 0.0)));
        break;
    case DisorderMode::static_:
        s.intervals_.push_back(make_interval(0.0, params.t_max, sample_vertex_mismatches(network, params.sigma, engine)));
        break;
    case DisorderMode::dynamic: {
        const std::size_t n = interval_count(params.t_max, params.resample_dt);
        s.intervals_.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double start = static_cast<double>(k) * params.resample_dt;
            double end = static_cast<double>(k + 1) * params.resample_dt;
            if (k + 1 == n) end = std::max(end, params.t_max);
            s.intervals_.push_back(make_interval(start, end, sample_vertex_mismatches(network, params.sigma, engine)));
        }
        break;
    }
    }
    return s;
}

DisorderSchedule with_detuning_offsets(const TreeNetwork &network, DisorderSchedule schedule,
                                       const std::vector<double> &offsets) {
    if (static_cast<int>(offsets.size()) != network.qubit_count()) throw ArgumentError("one offset per qubit required");
    for (auto &iv : schedule.intervals_) {
        if (iv.detunings.size() != offsets.size()) throw ArgumentError("schedule does not match the network");
        for (std::size_t q = 0; q < offsets.size(); ++q) iv.detunings[q] += offsets[q];
        iv.mismatches = detunings_to_mismatches(network, iv.detunings);
    }
    return schedule;
}

} // namespace avalanche
