#include "avalanche/observables.hpp"

#include "avalanche/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace avalanche {

std::string_view to_string(SeriesKind kind) {
    switch (kind) {
    case SeriesKind::occupation: return "occupation";
    case SeriesKind::otoc: return "otoc";
    case SeriesKind::commutator: return "commutator";
    case SeriesKind::holevo: return "holevo";
    }
    return "?";
}

std::vector<double> time_grid(double t_max, std::size_t n_steps) {
    if (n_steps < 2) throw ArgumentError("time grid needs at least 2 points");
    if (!(t_max > 0.0)) throw ArgumentError("t_max must be positive");
    std::vector<double> t(n_steps);
    const double dt = t_max / static_cast<double>(n_steps - 1);
    for (std::size_t k = 0; k < n_steps; ++k) t[k] = static_cast<double>(k) * dt;
    t.back() = t_max;
    return t;
}

double mean_occupation(const ReducedBasis &basis, const StateVector &state, Qubit q) {
    if (q < 1 || q > basis.qubit_count()) throw ArgumentError("qubit outside the basis tree");
    double n = 0.0;
    for (std::size_t s = 0; s < basis.slot_count(); ++s)
        if (basis.pattern_at_slot(s).occupied(q)) n += std::norm(state.amplitudes[static_cast<Eigen::Index>(s)]);
    return n;
}

std::vector<double> layer_occupations(const ReducedBasis &basis, const StateVector &state) {
    const int layers = basis.layers();
    std::vector<double> per_layer(static_cast<std::size_t>(layers), 0.0);
    for (std::size_t s = 0; s < basis.slot_count(); ++s) {
        const double w = std::norm(state.amplitudes[static_cast<Eigen::Index>(s)]);
        if (w == 0.0) continue;
        const OccupationPattern p = basis.pattern_at_slot(s);
        for (int l = 1; l <= layers; ++l) {
            const std::uint64_t lo = OccupationPattern::mask(TreeNetwork::first_in_layer(l));
            const std::uint64_t layer_mask = lo * ((std::uint64_t{1} << TreeNetwork::layer_size(l)) - 1);
            per_layer[static_cast<std::size_t>(l - 1)] += w * std::popcount(p.bits & layer_mask);
        }
    }
    for (int l = 1; l <= layers; ++l) per_layer[static_cast<std::size_t>(l - 1)] /= TreeNetwork::layer_size(l);
    return per_layer;
}

namespace {

void check_times(const Propagator &propagator, const std::vector<double> &times) {
    if (times.empty()) return;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (times[k] < times[k - 1]) throw ArgumentError("time grid must be non-decreasing");
    if (times.front() < 0.0) throw ArgumentError("time grid starts before t = 0");
    if (times.back() > propagator.horizon() * (1.0 + 1e-12))
        throw ArgumentError("time grid extends beyond the disorder schedule");
}

void multiply_diagonal(Eigen::VectorXcd &v, const std::vector<double> &diag) {
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] *= diag[static_cast<std::size_t>(k)];
}

ObservableSeries make_series(SeriesKind kind, int probe, int source, const std::vector<double> &times) {
    ObservableSeries s;
    s.kind = kind;
    s.probe = probe;
    s.source = source;
    s.times = times;
    s.values.reserve(times.size());
    return s;
}

} // namespace

std::vector<ObservableSeries> occupation_series(const Propagator &propagator, const ReducedBasis &basis,
                                                const StateVector &initial, const std::vector<double> &times) {
    check_times(propagator, times);
    std::vector<ObservableSeries> out;
    for (int l = 1; l <= basis.layers(); ++l) out.push_back(make_series(SeriesKind::occupation, l, 1, times));
    StateVector psi = initial;
    for (const double t : times) {
        psi = propagator.evolve(std::move(psi), t);
        const auto occ = layer_occupations(basis, psi);
        for (std::size_t l = 0; l < occ.size(); ++l) out[l].values.push_back(occ[l]);
    }
    return out;
}

std::vector<ObservableSeries> otoc(const Propagator &propagator, const ReducedBasis &basis, const StateVector &initial,
                                   const std::vector<Qubit> &probes, Qubit source, const std::vector<double> &times) {
    check_times(propagator, times);
    if (std::abs(initial.time) > 0.0) throw ArgumentError("OTOC initial state must be given at t = 0");
    const auto z_source = sigma_z_diagonal(basis, source);
    std::vector<std::vector<double>> z_probe;
    std::vector<ObservableSeries> out;
    for (const Qubit q : probes) {
        z_probe.push_back(sigma_z_diagonal(basis, q));
        out.push_back(make_series(SeriesKind::otoc, q, source, times));
    }

    StateVector a = initial; // U |psi>
    StateVector b = initial; // U V |psi>
    multiply_diagonal(b.amplitudes, z_source);
    for (const double t : times) {
        a = propagator.evolve(std::move(a), t);
        b = propagator.evolve(std::move(b), t);
        for (std::size_t p = 0; p < probes.size(); ++p) {
            StateVector left = a;
            multiply_diagonal(left.amplitudes, z_probe[p]);
            left = propagator.evolve_adjoint(std::move(left), 0.0);
            StateVector right = b;
            multiply_diagonal(right.amplitudes, z_probe[p]);
            right = propagator.evolve_adjoint(std::move(right), 0.0);
            multiply_diagonal(right.amplitudes, z_source);
            const std::complex<double> f = left.amplitudes.dot(right.amplitudes);
            if (std::abs(f.imag()) >= 1e-9)
                throw NumericalError("OTOC acquired an imaginary part " + std::to_string(f.imag()) + " at t = " +
                                     std::to_string(t));
            out[p].values.push_back(f.real());
        }
    }
    return out;
}

ObservableSeries commutator_from(const ObservableSeries &otoc_series) {
    if (otoc_series.kind != SeriesKind::otoc) throw ArgumentError("commutator needs an OTOC series");
    ObservableSeries c = otoc_series;
    c.kind = SeriesKind::commutator;
    for (auto &v : c.values) v = 2.0 * (1.0 - v);
    for (auto &s : c.stddev) s *= 2.0;
    return c;
}

Eigen::Matrix2cd reduced_density(const ReducedBasis &basis, const StateVector &state, Qubit q) {
    if (q < 1 || q > basis.qubit_count()) throw ArgumentError("qubit outside the basis tree");
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    const std::uint64_t bit = OccupationPattern::mask(q);
    for (std::size_t s = 0; s < basis.slot_count(); ++s) {
        const std::complex<double> amp = state.amplitudes[static_cast<Eigen::Index>(s)];
        const OccupationPattern p = basis.pattern_at_slot(s);
        const int a = p.occupied(q) ? 1 : 0;
        rho(a, a) += std::norm(amp);
        if (a == 1) {
            // Partner differs only in qubit q; in the unit-charge sector this
            // is only ever the top excitation paired with the vacuum.
            if (const auto partner = basis.slot_of({p.bits ^ bit})) {
                const std::complex<double> c = amp * std::conj(state.amplitudes[static_cast<Eigen::Index>(*partner)]);
                rho(1, 0) += c;
                rho(0, 1) += std::conj(c);
            }
        }
    }
    return rho;
}

double von_neumann_entropy(const Eigen::Matrix2cd &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < 2; ++k) {
        double lambda = solver.eigenvalues()[k];
        if (lambda < -1e-9) throw NumericalError("density matrix has eigenvalue " + std::to_string(lambda));
        if (lambda <= 0.0) continue;
        s -= lambda * std::log2(lambda);
    }
    return std::max(s, 0.0);
}

LocalOperator parse_local_operator(std::string_view name) {
    if (name == "sigma-z" || name == "sigma_z" || name == "z") return LocalOperator::sigma_z;
    if (name == "flip" || name == "x") return LocalOperator::flip;
    throw ArgumentError("unknown local operator '" + std::string(name) + "'");
}

std::string_view to_string(LocalOperator op) { return op == LocalOperator::sigma_z ? "sigma-z" : "flip"; }

StateVector apply_local(const ReducedBasis &basis, const StateVector &state, LocalOperator op, Qubit q) {
    if (q < 1 || q > basis.qubit_count()) throw ArgumentError("qubit outside the basis tree");
    StateVector out = state;
    if (op == LocalOperator::sigma_z) {
        multiply_diagonal(out.amplitudes, sigma_z_diagonal(basis, q));
        return out;
    }
    out.amplitudes.setZero();
    const std::uint64_t bit = OccupationPattern::mask(q);
    for (std::size_t s = 0; s < basis.slot_count(); ++s) {
        const std::complex<double> amp = state.amplitudes[static_cast<Eigen::Index>(s)];
        if (std::abs(amp) == 0.0) continue;
        const auto target = basis.slot_of({basis.pattern_at_slot(s).bits ^ bit});
        if (!target) {
            if (std::abs(amp) > 1e-12)
                throw ArgumentError("flipping qubit " + std::to_string(q) + " leaves the represented subspace");
            continue;
        }
        out.amplitudes[static_cast<Eigen::Index>(*target)] = amp;
    }
    return out;
}

std::vector<ObservableSeries> holevo(const Propagator &propagator, const ReducedBasis &basis,
                                     const StateVector &initial, LocalOperator op, Qubit op_qubit,
                                     const std::vector<Qubit> &probes, const std::vector<double> &times) {
    if (!basis.has_vacuum()) throw ArgumentError("Holevo information requires the vacuum slot");
    check_times(propagator, times);
    std::vector<ObservableSeries> out;
    for (const Qubit q : probes) out.push_back(make_series(SeriesKind::holevo, q, op_qubit, times));
    StateVector a = initial;
    StateVector b = apply_local(basis, initial, op, op_qubit);
    for (const double t : times) {
        a = propagator.evolve(std::move(a), t);
        b = propagator.evolve(std::move(b), t);
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const Eigen::Matrix2cd ra = reduced_density(basis, a, probes[p]);
            const Eigen::Matrix2cd rb = reduced_density(basis, b, probes[p]);
            const double chi =
                von_neumann_entropy(0.5 * (ra + rb)) - 0.5 * (von_neumann_entropy(ra) + von_neumann_entropy(rb));
            if (chi < -1e-9 || chi > 1.0 + 1e-9) throw NumericalError("Holevo information outside [0, 1]");
            out[p].values.push_back(std::clamp(chi, 0.0, 1.0));
        }
    }
    return out;
}

std::optional<double> arrival_time(const ObservableSeries &series, double threshold) {
    if (series.kind != SeriesKind::otoc) throw ArgumentError("arrival time is defined on OTOC series");
    for (std::size_t k = 0; k < series.values.size(); ++k)
        if (series.values[k] <= threshold) return series.times[k];
    return std::nullopt;
}

std::optional<double> first_time_exceeding(const ObservableSeries &series, double threshold) {
    for (std::size_t k = 0; k < series.values.size(); ++k)
        if (series.values[k] > threshold) return series.times[k];
    return std::nullopt;
}

} // namespace avalanche
