#include "avalanche/full_space.hpp"

#include "avalanche/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <complex>

namespace avalanche::full_space {

namespace {

using Mat2 = Eigen::Matrix2cd;

// |0> is index 0, |1> (excited) is index 1.
Mat2 raising() {
    Mat2 m = Mat2::Zero();
    m(1, 0) = 1.0;
    return m;
}

Mat2 lowering() { return raising().adjoint(); }

Mat2 number() {
    Mat2 m = Mat2::Zero();
    m(1, 1) = 1.0;
    return m;
}

// Product of single-qubit operators, identity on qubits absent from `ops`.
Eigen::MatrixXcd product_operator(int qubit_count, const std::vector<std::pair<Qubit, Mat2>> &ops) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 1; q <= qubit_count; ++q) {
        Mat2 local = Mat2::Identity();
        for (const auto &[target, op] : ops)
            if (target == q) local = local * op;
        Eigen::MatrixXcd next = Eigen::kroneckerProduct(out, local).eval();
        out = std::move(next);
    }
    return out;
}

void check_size(const TreeNetwork &network) {
    if (network.layers() > kMaxLayers)
        throw ResourceError("full-space evolution supports at most " + std::to_string(kMaxLayers) + " layers");
}

} // namespace

std::size_t index_of(OccupationPattern p, int qubit_count) {
    std::size_t idx = 0;
    for (int q = 1; q <= qubit_count; ++q) idx = (idx << 1) | (p.occupied(q) ? 1U : 0U);
    return idx;
}

Eigen::MatrixXcd hamiltonian(const TreeNetwork &network, const std::vector<double> &detunings) {
    check_size(network);
    const int n = network.qubit_count();
    const auto dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (Qubit q = 1; q <= n; ++q) h += detunings.at(static_cast<std::size_t>(q - 1)) * product_operator(n, {{q, number()}});
    for (const Kernel &v : network.kernels()) {
        const Eigen::MatrixXcd fire =
            product_operator(n, {{v.parent, lowering()}, {v.left, raising()}, {v.right, raising()}});
        h += v.coupling * (fire + fire.adjoint());
    }
    return h;
}

Eigen::VectorXcd evolve_vector(const TreeNetwork &network, const DisorderSchedule &schedule, double t,
                               Eigen::VectorXcd psi) {
    check_size(network);
    if (t > schedule.horizon() * (1 + 1e-12)) throw ArgumentError("schedule ends before the requested time");
    const std::complex<double> minus_i(0.0, -1.0);
    for (const auto &iv : schedule.intervals()) {
        if (iv.start >= t) break;
        const double tau = std::min(iv.end, t) - iv.start;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian(network, iv.detunings));
        const Eigen::MatrixXcd &V = solver.eigenvectors();
        Eigen::VectorXcd c = V.adjoint() * psi;
        for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(minus_i * solver.eigenvalues()[k] * tau);
        psi = V * c;
    }
    return psi;
}

Eigen::VectorXcd evolve(const TreeNetwork &network, const DisorderSchedule &schedule, double t,
                        OccupationPattern initial) {
    check_size(network);
    const int n = network.qubit_count();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    psi[static_cast<Eigen::Index>(index_of(initial, n))] = 1.0;
    return evolve_vector(network, schedule, t, std::move(psi));
}

Eigen::VectorXcd embed(const ReducedBasis &basis, const Eigen::VectorXcd &reduced) {
    if (basis.layers() > kMaxLayers) throw ResourceError("full-space embedding supports at most 3 layers");
    const int n = basis.qubit_count();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    for (std::size_t s = 0; s < basis.slot_count(); ++s)
        psi[static_cast<Eigen::Index>(index_of(basis.pattern_at_slot(s), n))] = reduced[static_cast<Eigen::Index>(s)];
    return psi;
}

Eigen::VectorXd sigma_z(int qubit_count, Qubit q) {
    const Eigen::Index dim = Eigen::Index{1} << qubit_count;
    Eigen::VectorXd z(dim);
    const int shift = qubit_count - q;
    for (Eigen::Index i = 0; i < dim; ++i) z[i] = ((i >> shift) & 1) ? 1.0 : -1.0;
    return z;
}

Eigen::Matrix2cd reduced_density(const Eigen::VectorXcd &psi, int qubit_count, Qubit q) {
    // Reshape to (left qubits, qubit q, right qubits) and contract the outer indices.
    const Eigen::Index left = Eigen::Index{1} << (q - 1);
    const Eigen::Index right = Eigen::Index{1} << (qubit_count - q);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (Eigen::Index l = 0; l < left; ++l)
        for (Eigen::Index r = 0; r < right; ++r)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    rho(a, b) += psi[(l * 2 + a) * right + r] * std::conj(psi[(l * 2 + b) * right + r]);
    return rho;
}

} // namespace avalanche::full_space
