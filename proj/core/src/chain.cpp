#include "ness/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ness {

namespace {

void check_site(int n, int x, int lo, int hi, const char* what) {
    if (x < lo || x > hi)
        throw std::out_of_range(std::string(what) + ": site " + std::to_string(x) +
                                " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] for n = " + std::to_string(n));
}

}  // namespace

StateVector::StateVector(int n) : n_(n), z_(Eigen::VectorXd::Zero(2 * n + 1)) {
    if (n < 2) throw ParameterError("n must be at least 2");
}

StateVector::StateVector(int n, Eigen::VectorXd z) : n_(n), z_(std::move(z)) {
    if (n < 2) throw ParameterError("n must be at least 2");
    if (z_.size() != 2 * n + 1)
        throw std::invalid_argument("state length must be 2n+1");
    if (!z_.allFinite()) throw std::invalid_argument("state has non-finite entries");
}

OperatorSet assemble_operators(const ChainParams& params, double tau_value) {
    params.validate();
    const int n = params.n;
    const int N = 2 * n + 1;
    const double g = params.gamma;
    const double gb = 0.5 * (params.gamma + params.gamma_tilde);

    std::vector<Eigen::Triplet<double>> t;
    t.reserve(5 * n + 4);
    for (int x = 1; x <= n; ++x) {
        t.emplace_back(ir(x), ip(n, x), 1.0);
        t.emplace_back(ir(x), ip(n, x - 1), -1.0);
    }
    t.emplace_back(ip(n, 0), ir(1), 1.0);
    t.emplace_back(ip(n, 0), ip(n, 0), -gb);
    for (int x = 1; x <= n - 1; ++x) {
        t.emplace_back(ip(n, x), ir(x + 1), 1.0);
        t.emplace_back(ip(n, x), ir(x), -1.0);
        t.emplace_back(ip(n, x), ip(n, x), -g);
    }
    t.emplace_back(ip(n, n), ir(n), -1.0);
    t.emplace_back(ip(n, n), ip(n, n), -gb);

    OperatorSet ops;
    ops.n = n;
    ops.B.resize(N, N);
    ops.B.setFromTriplets(t.begin(), t.end());
    ops.B.makeCompressed();
    ops.c = Eigen::VectorXd::Zero(N);
    ops.c[ip(n, n)] = tau_value;
    ops.exchange_pairs.resize(n);
    for (int x = 0; x < n; ++x) ops.exchange_pairs[x] = x;
    ops.sqrt_gamma = std::sqrt(g);
    ops.D = Eigen::VectorXd::Zero(N);
    ops.D[ip(n, 0)] = params.gamma_tilde * params.T_minus;
    ops.D[ip(n, n)] = params.gamma_tilde * params.T_plus;
    return ops;
}

Eigen::MatrixXd OperatorSet::exchange_matrix(int k) const {
    const int x = exchange_pairs.at(k);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dim(), dim());
    C(ip(n, x), ip(n, x + 1)) = -sqrt_gamma;
    C(ip(n, x + 1), ip(n, x)) = sqrt_gamma;
    return C;
}

Eigen::MatrixXd OperatorSet::exchange_term(const Eigen::MatrixXd& M) const {
    // C_k M C_k^T on the block {a, b} = {ip(x), ip(x+1)}:
    //   [ g M_bb, -g M_ba ; -g M_ab, g M_aa ]
    const double g = sqrt_gamma * sqrt_gamma;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
    for (int x : exchange_pairs) {
        const int a = ip(n, x);
        const int b = ip(n, x + 1);
        out(a, a) += g * M(b, b);
        out(b, b) += g * M(a, a);
        out(a, b) -= g * M(b, a);
        out(b, a) -= g * M(a, b);
    }
    return out;
}

QuadraticForm QuadraticForm::zero(int dim) {
    return {Eigen::MatrixXd::Zero(dim, dim), Eigen::VectorXd::Zero(dim), 0.0};
}

double QuadraticForm::expect(const Eigen::VectorXd& m, const Eigen::MatrixXd& M) const {
    return Q.cwiseProduct(M).sum() + b.dot(m) + k;
}

QuadraticForm apply_generator(const OperatorSet& ops, const QuadraticForm& f) {
    const Eigen::MatrixXd B = Eigen::MatrixXd(ops.B);
    QuadraticForm out;
    Eigen::MatrixXd QB = f.Q * B;
    out.Q = QB + QB.transpose();
    // C_k^T Q C_k has the same band structure as C_k M C_k^T with C_k -> C_k^T.
    const double g = ops.sqrt_gamma * ops.sqrt_gamma;
    for (int x : ops.exchange_pairs) {
        const int a = ip(ops.n, x);
        const int b = ip(ops.n, x + 1);
        out.Q(a, a) += g * f.Q(b, b);
        out.Q(b, b) += g * f.Q(a, a);
        out.Q(a, b) -= g * f.Q(b, a);
        out.Q(b, a) -= g * f.Q(a, b);
    }
    out.b = 2.0 * f.Q * ops.c + B.transpose() * f.b;
    out.k = f.b.dot(ops.c) + f.Q.diagonal().dot(ops.D);
    return out;
}

QuadraticForm monomial(int dim, int i) {
    QuadraticForm f = QuadraticForm::zero(dim);
    f.b[i] = 1.0;
    return f;
}

QuadraticForm monomial(int dim, int i, int j) {
    QuadraticForm f = QuadraticForm::zero(dim);
    f.Q(i, j) += 0.5;
    f.Q(j, i) += 0.5;
    return f;
}

double site_energy(const StateVector& z, int x) {
    check_site(z.n(), x, 0, z.n(), "site_energy");
    const double p = z.p(x);
    if (x == 0) return 0.5 * p * p;
    const double r = z.r(x);
    return 0.5 * (p * p + r * r);
}

double total_energy(const StateVector& z) { return 0.5 * z.z().squaredNorm(); }

double bulk_current(const StateVector& z, int x, double gamma) {
    check_site(z.n(), x, 0, z.n() - 1, "bulk_current");
    const double px = z.p(x);
    const double py = z.p(x + 1);
    return -px * z.r(x + 1) + 0.5 * gamma * (px * px - py * py);
}

BoundaryCurrents boundary_currents(const StateVector& z, const ChainParams& params,
                                   double tau_value) {
    const double p0 = z.p(0);
    const double pn = z.p(z.n());
    return {0.5 * params.gamma_tilde * (params.T_minus - p0 * p0),
            -0.5 * params.gamma_tilde * (params.T_plus - pn * pn) - tau_value * pn};
}

QuadraticForm site_energy_form(int n, int x) {
    const int N = 2 * n + 1;
    QuadraticForm f = QuadraticForm::zero(N);
    f.Q(ip(n, x), ip(n, x)) = 0.5;
    if (x >= 1) f.Q(ir(x), ir(x)) = 0.5;
    return f;
}

QuadraticForm bulk_current_form(int n, int x, double gamma) {
    const int N = 2 * n + 1;
    QuadraticForm f = QuadraticForm::zero(N);
    f.Q(ip(n, x), ir(x + 1)) -= 0.5;
    f.Q(ir(x + 1), ip(n, x)) -= 0.5;
    f.Q(ip(n, x), ip(n, x)) += 0.5 * gamma;
    f.Q(ip(n, x + 1), ip(n, x + 1)) -= 0.5 * gamma;
    return f;
}

}  // namespace ness
