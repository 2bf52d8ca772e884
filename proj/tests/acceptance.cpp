// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check prints the measured quantities it decided on.

#include "avalanche/disorder.hpp"
#include "avalanche/ensemble.hpp"
#include "avalanche/full_space.hpp"
#include "avalanche/hamiltonian.hpp"
#include "avalanche/observables.hpp"
#include "avalanche/output.hpp"
#include "avalanche/propagator.hpp"
#include "avalanche/reduced_basis.hpp"
#include "avalanche/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace avalanche;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string num(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string opt(const std::optional<double> &x) { return x ? num(*x) : std::string("none"); }

DisorderSchedule schedule(const TreeNetwork &t, DisorderMode mode, double sigma, double dt, double t_max,
                          std::uint64_t seed, std::uint64_t realization = 0) {
    ScheduleParams p;
    p.mode = mode;
    p.sigma = sigma;
    p.resample_dt = dt;
    p.t_max = t_max;
    p.master_seed = seed;
    p.realization = realization;
    return build_schedule(t, p);
}

EnsembleConfig config(int layers, DisorderMode mode, double sigma, double t_max, std::size_t steps,
                      std::size_t realizations, ObservableKind kind) {
    EnsembleConfig c;
    c.layers = layers;
    c.mode = mode;
    c.sigma = sigma;
    c.t_max = t_max;
    c.n_steps = steps;
    c.realizations = realizations;
    c.kind = kind;
    c.master_seed = 2024;
    c.threads = 1;
    return c;
}

// Mean of the series values on [lo, hi].
double window_mean(const ObservableSeries &s, double lo, double hi) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < s.times.size(); ++k)
        if (s.times[k] >= lo - 1e-12 && s.times[k] <= hi + 1e-12) {
            sum += s.values[k];
            ++n;
        }
    return sum / static_cast<double>(n);
}

double sample_std(const std::vector<double> &x) {
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double ss = 0.0;
    for (const double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

// Layer-1 occupation drops below 0.05 and afterwards exceeds 0.8.
struct Recurrence {
    std::optional<double> drop, back;
    double peak_after_drop = 0.0;
};

Recurrence recurrence(const ObservableSeries &layer1) {
    Recurrence r;
    for (std::size_t k = 0; k < layer1.times.size(); ++k) {
        if (!r.drop) {
            if (layer1.values[k] < 0.05) r.drop = layer1.times[k];
            continue;
        }
        r.peak_after_drop = std::max(r.peak_after_drop, layer1.values[k]);
        if (!r.back && layer1.values[k] > 0.8) r.back = layer1.times[k];
    }
    return r;
}

// Rank of each value with "never" after every finite time; ties share a rank.
std::vector<int> ranks(const std::vector<std::optional<double>> &times) {
    std::vector<int> out(times.size());
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double ti = times[i].value_or(inf);
        int r = 0;
        for (std::size_t j = 0; j < times.size(); ++j)
            if (times[j].value_or(inf) < ti) ++r;
        out[i] = r;
    }
    return out;
}

std::string join(const std::vector<std::optional<double>> &v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + opt(v[i]);
    return s + "]";
}

Verdict basis_counts() {
    Verdict v;
    const std::uint64_t expected[] = {1, 2, 5, 26, 677, 458330};
    for (int l = 1; l <= 6; ++l) {
        const std::uint64_t d = dimension(l);
        v.require(d == expected[l - 1], "D(" + std::to_string(l) + ")=" + std::to_string(d));
    }
    const auto start = std::chrono::steady_clock::now();
    const ReducedBasis six = enumerate(6);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(six.dimension() == 458330 && secs < 120.0,
              "enumerate(6)=" + std::to_string(six.dimension()) + " in " + num(secs, 3) + " s");
    for (int l = 1; l <= 4; ++l) {
        const auto brute = brute_force_enumerate(l);
        const ReducedBasis b = enumerate(l);
        std::vector<std::uint64_t> a, c;
        for (const auto p : brute) a.push_back(p.bits);
        for (const auto p : b.states()) c.push_back(p.bits);
        std::sort(a.begin(), a.end());
        std::sort(c.begin(), c.end());
        v.require(a == c, "brute force L=" + std::to_string(l) + " " + std::to_string(a.size()));
    }
    return v;
}

Verdict oracle_equivalence() {
    Verdict v;
    const TreeNetwork t = build_tree(3);
    const ReducedBasis b = enumerate(3);
    double worst = 1.0;
    for (const auto mode : {DisorderMode::static_, DisorderMode::dynamic})
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto sched = schedule(t, mode, 5.0, 2.0, 10.0, seed);
            const Propagator prop(b, t, sched);
            StateVector s = top_excitation(b);
            for (const double time : time_grid(10.0, 41)) {
                s = prop.evolve(s, time);
                const Eigen::VectorXcd full = full_space::evolve(t, sched, time, OccupationPattern::single(1));
                worst = std::min(worst, std::abs(full_space::embed(b, s.amplitudes).dot(full)));
            }
        }
    v.require(worst >= 1.0 - 1e-9, "min overlap 1-" + num(1.0 - worst, 3));
    return v;
}

Verdict two_layer_closed_forms() {
    Verdict v;
    const TreeNetwork t = build_tree(2);
    const ReducedBasis b = enumerate(2);
    const auto sched = schedule(t, DisorderMode::ideal, 0.0, 0.0, 5.0, 0);
    const Propagator prop(b, t, sched);
    const auto times = time_grid(5.0, 501);
    const auto occ = occupation_series(prop, b, top_excitation(b), times);
    const auto f = otoc(prop, b, top_excitation(b), {2}, 1, times);
    double occ_err = 0.0, f_err = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double c = std::cos(times[k]);
        occ_err = std::max(occ_err, std::abs(occ[0].values[k] - c * c));
        f_err = std::max(f_err, std::abs(f[0].values[k] - std::cos(4.0 * times[k])));
    }
    v.require(occ_err < 1e-9, "max |n1 - cos^2| " + num(occ_err, 2));
    v.require(f_err < 1e-9, "max |F12 - cos 4t| " + num(f_err, 2));
    return v;
}

Verdict ideal_recurrence() {
    Verdict v;
    const auto r = run(config(4, DisorderMode::ideal, 0.0, 50.0, 500, 1, ObservableKind::occupation));
    const Recurrence rec = recurrence(r.averaged[0]);
    v.require(rec.drop.has_value(), "drop below 0.05 at " + opt(rec.drop));
    v.require(rec.back.has_value(), "return above 0.8 at " + opt(rec.back));
    return v;
}

std::vector<std::optional<double>> ideal_arrivals(int layers, double g, double t_max, std::size_t steps) {
    auto c = config(layers, DisorderMode::ideal, 0.0, t_max, steps, 1, ObservableKind::otoc);
    c.g = g;
    c.probes = left_edge_probes(layers);
    const auto r = run(c);
    std::vector<std::optional<double>> out;
    for (std::size_t p = 1; p < r.averaged.size(); ++p) out.push_back(arrival_time(r.averaged[p]));
    return out;
}

Verdict ballistic_scaling() {
    Verdict v;
    const auto fast = ideal_arrivals(5, 1.0, 20.0, 401);
    const auto slow = ideal_arrivals(5, 0.5, 40.0, 801);
    bool increasing = std::all_of(fast.begin(), fast.end(), [](auto x) { return x.has_value(); });
    for (std::size_t i = 1; increasing && i < fast.size(); ++i) increasing = *fast[i] > *fast[i - 1];
    v.require(increasing, "g=1 layers 2..5 " + join(fast));
    bool doubled = increasing;
    for (std::size_t i = 0; doubled && i < slow.size(); ++i)
        doubled = slow[i] && std::abs(*slow[i] / *fast[i] - 2.0) <= 0.2;
    v.require(doubled, "g=0.5 " + join(slow));
    return v;
}

Verdict static_localisation() {
    Verdict v;
    std::vector<double> means;
    for (const double sigma : {0.0, 2.0, 5.0, 10.0}) {
        auto c = config(5, sigma == 0.0 ? DisorderMode::ideal : DisorderMode::static_, sigma, 100.0, 201, 10,
                        ObservableKind::otoc);
        c.probes = {TreeNetwork::first_in_layer(5)};
        means.push_back(window_mean(run(c).averaged[0], 50.0, 100.0));
    }
    bool increasing = true;
    for (std::size_t i = 1; i < means.size(); ++i) increasing = increasing && means[i] > means[i - 1];
    std::string s;
    for (const double m : means) s += (s.empty() ? "" : " ") + num(m);
    v.require(increasing, "window means for sigma 0,2,5,10: " + s);
    return v;
}

Verdict level_statistics() {
    Verdict v;
    auto c = config(5, DisorderMode::static_, 5.0, 1.0, 2, 20, ObservableKind::otoc);
    c.probes = {1};
    const auto s = run_spectrum(c);
    v.require(std::abs(s.pooled.mean_ratio - 0.386) <= 0.02,
              "pooled <r>=" + num(s.pooled.mean_ratio) + " over " + std::to_string(s.pooled.ratios.size()) +
                  " ratios, " + std::to_string(s.pooled.excluded_degenerate) + " excluded");
    return v;
}

Verdict dynamic_regimes() {
    Verdict v;
    // The late-time band of the average is resolved to about 0.15 / sqrt(n / 10).
    const std::size_t n = 200;
    auto slow = config(4, DisorderMode::dynamic, 5.0, 100.0, 401, n, ObservableKind::otoc);
    slow.resample_dt = 2.0;
    slow.probes = {TreeNetwork::first_in_layer(3), TreeNetwork::first_in_layer(4)};
    const auto f = run(slow).averaged;
    // Arrival of the averaged avalanche at the last layer of this ensemble.
    const auto t_arrival = arrival_time(f[1]);
    v.require(t_arrival.has_value(), "t_arrival " + opt(t_arrival));
    for (const auto &s : f) {
        const double m = window_mean(s, 75.0, 100.0);
        double drift = 0.0;
        for (std::size_t k = 0; k < s.times.size(); ++k)
            if (s.times[k] >= 75.0 - 1e-12) drift = std::max(drift, std::abs(s.values[k] - m));
        v.require(drift < 0.05, "F(q" + std::to_string(s.probe) + ") late drift " + num(drift) + " around " + num(m));
    }

    slow.kind = ObservableKind::occupation;
    slow.n_steps = 1001;
    const auto occ = run(slow).averaged[0];
    double peak = 0.0;
    for (std::size_t k = 0; k < occ.times.size(); ++k)
        if (occ.times[k] >= t_arrival.value_or(0.0)) peak = std::max(peak, occ.values[k]);
    v.require(peak <= 0.5, "dt=2 layer-1 max after arrival " + num(peak));

    auto fast = config(4, DisorderMode::dynamic, 5.0, 50.0, 500, 10, ObservableKind::occupation);
    fast.resample_dt = 0.02;
    const Recurrence rec = recurrence(run(fast).averaged[0]);
    v.require(rec.drop && rec.back, "dt=0.02 drop " + opt(rec.drop) + ", return " + opt(rec.back) +
                                        ", peak after drop " + num(rec.peak_after_drop));
    return v;
}

Verdict arrival_scatter_check() {
    Verdict v;
    std::vector<double> stds;
    for (const double dt : {2.0, 0.2}) {
        auto c = config(4, DisorderMode::dynamic, 5.0, 40.0, 801, 10, ObservableKind::otoc);
        c.resample_dt = dt;
        c.probes = {TreeNetwork::first_in_layer(4)};
        const auto a = arrival_scatter(c, c.t_max);
        std::vector<double> times;
        for (const auto &x : a)
            if (x.time) times.push_back(*x.time);
        const bool all = times.size() == a.size();
        v.require(all, "dt=" + num(dt) + " crossed " + std::to_string(times.size()) + "/" + std::to_string(a.size()));
        stds.push_back(times.size() > 1 ? sample_std(times) : 0.0);
        v.detail += " std " + num(stds.back());
    }
    v.require(stds[0] > stds[1], "std(dt=2) > std(dt=0.2)");
    return v;
}

Verdict holevo_check() {
    Verdict v;
    // Default input and operator.
    auto c = config(5, DisorderMode::static_, 5.0, 50.0, 201, 10, ObservableKind::holevo);
    c.probes = left_edge_probes(5);
    const auto def = run(c);
    v.require(std::abs(def.averaged[0].values[0] - 1.0) < 1e-9, "chi11(0)=" + num(def.averaged[0].values[0], 17));
    double lo = 1.0, hi = 0.0, deeper = 0.0;
    auto scan = [&](const EnsembleResult &r) {
        for (const auto &real : r.per_realization)
            for (const auto &s : real)
                for (const double x : s.values) {
                    lo = std::min(lo, x);
                    hi = std::max(hi, x);
                }
    };
    scan(def);
    for (const auto &real : def.per_realization)
        for (std::size_t p = 1; p < real.size(); ++p)
            for (const double x : real[p].values) deeper = std::max(deeper, x);

    // sigma^z on qubit 1 never reaches the other qubits (deeper == 0), so the
    // layer order uses the flip on qubit 1 from the bare top excitation.
    c.holevo_operator = LocalOperator::flip;
    c.holevo_input = HolevoInput::top;
    const auto flip = run(c);
    scan(flip);
    v.require(lo >= -1e-12 && hi <= 1.0 + 1e-12, "chi range [" + num(lo) + ", " + num(hi) + "]");
    v.detail += "; default-operator max chi for layers 2..5 " + num(deeper, 2);

    auto o = c;
    o.kind = ObservableKind::otoc;
    const auto f = run(o);
    std::vector<std::optional<double>> chi_times, otoc_times;
    for (std::size_t p = 1; p < c.probes.size(); ++p) {
        chi_times.push_back(first_time_exceeding(flip.averaged[p], 0.5));
        otoc_times.push_back(arrival_time(f.averaged[p]));
    }
    // Agreement only means something when both sides order at least two layers.
    auto ordered = [](const std::vector<std::optional<double>> &t) {
        return std::count_if(t.begin(), t.end(), [](auto x) { return x.has_value(); }) >= 2;
    };
    v.require(ordered(chi_times) && ordered(otoc_times) && ranks(chi_times) == ranks(otoc_times),
              "layers 2..5 chi>0.5 at " + join(chi_times) + ", OTOC arrival at " + join(otoc_times));
    return v;
}

Verdict invariants() {
    Verdict v;
    const TreeNetwork t = build_tree(4);
    const ReducedBasis b = enumerate(4, true);

    // Unitarity and static energy.
    double norm_err = 0.0, energy_err = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Propagator st(b, t, schedule(t, DisorderMode::static_, 5.0, 0.0, 100.0, seed));
        const Propagator dy(b, t, schedule(t, DisorderMode::dynamic, 5.0, 0.3, 100.0, seed));
        const auto &h = st.hamiltonian(0);
        StateVector s = top_excitation(b), d = top_excitation(b);
        const double e0 = s.amplitudes.dot(h.apply(s.amplitudes)).real();
        for (const double time : time_grid(100.0, 101)) {
            s = st.evolve(s, time);
            d = dy.evolve(d, time);
            norm_err = std::max({norm_err, std::abs(s.norm() - 1.0), std::abs(d.norm() - 1.0)});
            energy_err = std::max(energy_err, std::abs(s.amplitudes.dot(h.apply(s.amplitudes)).real() - e0));
        }
    }
    v.require(norm_err < 1e-9, "norm drift " + num(norm_err, 2));
    v.require(energy_err < 1e-9, "energy drift " + num(energy_err, 2));

    // Hermiticity, exact.
    bool hermitian = true;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto sched = schedule(t, DisorderMode::static_, 5.0, 0.0, 1.0, seed);
        const Eigen::MatrixXd m = assemble(b, t, sched.intervals().front().detunings).to_dense();
        hermitian = hermitian && (m - m.transpose()).cwiseAbs().maxCoeff() == 0.0;
    }
    v.require(hermitian, "H - H^T == 0");

    // Im F directly from the two branches.
    {
        const ReducedBasis plain = enumerate(4);
        const Propagator prop(plain, t, schedule(t, DisorderMode::dynamic, 5.0, 0.5, 20.0, 9));
        const auto zi = sigma_z_diagonal(plain, 8);
        const auto zj = sigma_z_diagonal(plain, 1);
        auto mul = [](const std::vector<double> &z, StateVector s) {
            for (Eigen::Index k = 0; k < s.amplitudes.size(); ++k) s.amplitudes(k) *= z[static_cast<std::size_t>(k)];
            return s;
        };
        double im = 0.0;
        for (const double time : time_grid(20.0, 41)) {
            const StateVector psi = top_excitation(plain);
            // a = Z_i(t) psi, b = Z_j Z_i(t) Z_j psi
            const StateVector a = prop.evolve_adjoint(mul(zi, prop.evolve(psi, time)), 0.0);
            StateVector w = prop.evolve_adjoint(mul(zi, prop.evolve(mul(zj, psi), time)), 0.0);
            w = mul(zj, w);
            im = std::max(im, std::abs(a.amplitudes.dot(w.amplitudes).imag()));
        }
        v.require(im < 1e-9, "max |Im F| " + num(im, 2));
    }

    // Gauge shift of all reported observables.
    {
        double worst = 0.0;
        const auto times = time_grid(20.0, 81);
        const std::vector<Qubit> probes = {1, 2, 4, 8};
        for (const auto mode : {DisorderMode::static_, DisorderMode::dynamic}) {
            const auto base = schedule(t, mode, 5.0, 1.0, 20.0, 4);
            std::vector<double> offsets(15);
            for (Qubit q = 1; q <= 15; ++q) offsets[q - 1] = 1.7 / std::pow(2.0, layer_of(q) - 1);
            const auto shifted = with_detuning_offsets(t, base, offsets);
            const Propagator pa(b, t, base), pb(b, t, shifted);
            auto cmp = [&](const std::vector<ObservableSeries> &x, const std::vector<ObservableSeries> &y) {
                for (std::size_t p = 0; p < x.size(); ++p)
                    for (std::size_t k = 0; k < x[p].values.size(); ++k)
                        worst = std::max(worst, std::abs(x[p].values[k] - y[p].values[k]));
            };
            cmp(occupation_series(pa, b, top_excitation(b), times), occupation_series(pb, b, top_excitation(b), times));
            cmp(otoc(pa, b, top_excitation(b), probes, 1, times), otoc(pb, b, top_excitation(b), probes, 1, times));
            cmp(holevo(pa, b, vacuum_top_superposition(b), LocalOperator::sigma_z, 1, probes, times),
                holevo(pb, b, vacuum_top_superposition(b), LocalOperator::sigma_z, 1, probes, times));
            cmp(holevo(pa, b, top_excitation(b), LocalOperator::flip, 1, probes, times),
                holevo(pb, b, top_excitation(b), LocalOperator::flip, 1, probes, times));
        }
        v.require(worst < 1e-9, "gauge shift max change " + num(worst, 2));
    }

    // Byte-identical CSVs under different worker counts.
    {
        bool same = true;
        for (const auto kind : {ObservableKind::occupation, ObservableKind::otoc, ObservableKind::holevo}) {
            auto c = config(4, DisorderMode::dynamic, 5.0, 10.0, 51, 6, kind);
            c.resample_dt = 0.5;
            c.probes = left_edge_probes(4);
            std::string first;
            for (const unsigned threads : {1U, 2U, 5U}) {
                c.threads = threads;
                const auto r = run(c);
                std::ostringstream os;
                if (kind == ObservableKind::occupation)
                    output::write_occupation_csv(os, r.averaged);
                else
                    output::write_series_csv(os, r.averaged);
                output::write_realizations_csv(os, r.per_realization);
                if (threads == 1U)
                    first = os.str();
                else
                    same = same && os.str() == first;
            }
        }
        v.require(same, "CSV bytes equal for 1, 2, 5 threads");
    }
    return v;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"basis counts", basis_counts},
        {"reduced vs full-space evolution", oracle_equivalence},
        {"two-layer closed forms", two_layer_closed_forms},
        {"ideal recurrence", ideal_recurrence},
        {"ballistic arrival scaling", ballistic_scaling},
        {"static disorder localisation", static_localisation},
        {"level spacing statistics", level_statistics},
        {"dynamic disorder regimes", dynamic_regimes},
        {"arrival time scatter", arrival_scatter_check},
        {"holevo information", holevo_check},
        {"invariants", invariants},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception &e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!v.pass) ++failures;
        std::printf("%s %2zu %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
