#include "ness/moments.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <complex>

namespace ness {

namespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Bartels-Stewart for B X + X B^T = R with B real, using B = U T U^H.
class SchurLyapunov {
public:
    explicit SchurLyapunov(const Eigen::MatrixXd& B) : schur_(B.cast<Complex>()) {
        if (schur_.info() != Eigen::Success)
            throw SolverError("Schur decomposition of the drift matrix failed", 0.0);
        Tt_ = schur_.matrixT().transpose();
    }

    Eigen::MatrixXd solve(const Eigen::MatrixXd& R) const {
        const ComplexMatrix& U = schur_.matrixU();
        const ComplexMatrix& T = schur_.matrixT();
        const int N = static_cast<int>(R.rows());
        ComplexMatrix rhs = U.adjoint() * R.cast<Complex>() * U;
        ComplexMatrix Y = ComplexMatrix::Zero(N, N);
        Eigen::VectorXcd col(N);
        // T Y + Y T^H = rhs, column j depends on columns k > j.
        for (int j = N - 1; j >= 0; --j) {
            col = rhs.col(j);
            for (int k = j + 1; k < N; ++k) col -= std::conj(T(j, k)) * Y.col(k);
            const Complex shift = std::conj(T(j, j));
            for (int i = N - 1; i >= 0; --i) {
                Complex s = col[i];
                // Row i of T is column i of Tt_.
                for (int l = i + 1; l < N; ++l) s -= Tt_(l, i) * Y(l, j);
                const Complex d = T(i, i) + shift;
                if (std::abs(d) < 1e-300)
                    throw SolverError("Lyapunov operator is singular", std::abs(d));
                Y(i, j) = s / d;
            }
        }
        Eigen::MatrixXd X = (U * Y * U.adjoint()).real();
        return 0.5 * (X + X.transpose());
    }

private:
    Eigen::ComplexSchur<ComplexMatrix> schur_;
    ComplexMatrix Tt_;
};

/// Packed index of the unordered pair {i, j} in an N x N symmetric matrix.
struct PackedIndex {
    int N;
    long operator()(int i, int j) const {
        if (i > j) std::swap(i, j);
        return static_cast<long>(i) * N - static_cast<long>(i) * (i - 1) / 2 + (j - i);
    }
    long size() const { return static_cast<long>(N) * (N + 1) / 2; }
};

Eigen::MatrixXd forcing(const OperatorSet& ops, const Eigen::VectorXd& m) {
    Eigen::MatrixXd F = ops.c * m.transpose();
    F += F.transpose().eval();
    F.diagonal() += ops.D;
    return F;
}

Eigen::MatrixXd solve_direct(const OperatorSet& ops, const Eigen::VectorXd& m) {
    const int N = ops.dim();
    const PackedIndex idx{N};
    const long P = idx.size();
    const Eigen::MatrixXd F = forcing(ops, m);
    const auto& B = ops.B;
    const double g = ops.sqrt_gamma * ops.sqrt_gamma;

    // Row of the exchange contribution for pair (a, b) = (ip(x), ip(x+1)):
    //   (a,a) <- g M_bb, (b,b) <- g M_aa, (a,b) <- -g M_ab.
    std::vector<std::vector<std::pair<long, double>>> exchange(P);
    for (int x : ops.exchange_pairs) {
        const int a = ip(ops.n, x);
        const int b = ip(ops.n, x + 1);
        exchange[idx(a, a)].emplace_back(idx(b, b), g);
        exchange[idx(b, b)].emplace_back(idx(a, a), g);
        exchange[idx(a, b)].emplace_back(idx(a, b), -g);
    }

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(P) * 7);
    Eigen::VectorXd rhs(P);
    for (int i = 0; i < N; ++i) {
        for (int j = i; j < N; ++j) {
            const long row = idx(i, j);
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(B, i); it; ++it)
                trip.emplace_back(row, idx(static_cast<int>(it.col()), j), it.value());
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(B, j); it; ++it)
                trip.emplace_back(row, idx(i, static_cast<int>(it.col())), it.value());
            for (const auto& [col, v] : exchange[row]) trip.emplace_back(row, col, v);
            rhs[row] = -F(i, j);
        }
    }
    Eigen::SparseMatrix<double> A(P, P);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse LU of the vectorized Lyapunov operator failed: " +
                              lu.lastErrorMessage(),
                          0.0);
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !sol.allFinite())
        throw SolverError("vectorized Lyapunov solve failed", 0.0);

    Eigen::MatrixXd M(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) M(i, j) = M(j, i) = sol[idx(i, j)];
    return M;
}

double norm1(const Eigen::SparseMatrix<double, Eigen::RowMajor>& B) {
    Eigen::VectorXd colsum = Eigen::VectorXd::Zero(B.cols());
    for (int k = 0; k < B.outerSize(); ++k)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(B, k); it; ++it)
            colsum[it.col()] += std::abs(it.value());
    return colsum.maxCoeff();
}

}  // namespace

Eigen::VectorXd solve_stationary_mean(const OperatorSet& ops) {
    Eigen::SparseMatrix<double> B = ops.B;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success) throw SolverError("drift matrix is singular", 0.0);
    Eigen::VectorXd m = lu.solve(-ops.c);
    const double res = (ops.B * m + ops.c).lpNorm<Eigen::Infinity>();
    if (!m.allFinite() || res > 1e-9 * (1.0 + ops.c.lpNorm<Eigen::Infinity>()))
        throw SolverError("stationary mean solve failed", res);
    return m;
}

double lyapunov_residual(const OperatorSet& ops, const Eigen::VectorXd& m,
                         const Eigen::MatrixXd& M) {
    Eigen::MatrixXd BM = ops.B * M;
    Eigen::MatrixXd R = BM + BM.transpose() + ops.exchange_term(M) + forcing(ops, m);
    return R.lpNorm<Eigen::Infinity>();
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& B, const Eigen::MatrixXd& R) {
    return SchurLyapunov(B).solve(R);
}

MomentSolution solve_stationary_second_moments(const OperatorSet& ops, const Eigen::VectorXd& m,
                                               const LyapunovOptions& opts) {
    MomentSolution sol;
    sol.n = ops.n;
    sol.m = m;

    if (opts.method == LyapunovMethod::Direct) {
        sol.M = solve_direct(ops, m);
        sol.iterations = 1;
        sol.residual = lyapunov_residual(ops, m, sol.M);
    } else {
        const SchurLyapunov inner{Eigen::MatrixXd(ops.B)};
        const Eigen::MatrixXd F = forcing(ops, m);
        Eigen::MatrixXd M = inner.solve(-F);
        double res = lyapunov_residual(ops, m, M);
        int it = 1;
        while (res > opts.tolerance && it < opts.max_iterations) {
            M = inner.solve(-(ops.exchange_term(M) + F));
            res = lyapunov_residual(ops, m, M);
            ++it;
        }
        if (!(res <= opts.tolerance))
            throw SolverError("Lyapunov fixed-point iteration did not converge in " +
                                  std::to_string(it) + " iterations",
                              res);
        sol.M = std::move(M);
        sol.iterations = it;
        sol.residual = res;
    }

    if (!(sol.residual <= 1e-9 * (1.0 + sol.M.lpNorm<Eigen::Infinity>())))
        throw SolverError("second-moment solution fails the residual check", sol.residual);

    if (opts.check_psd) {
        const Eigen::MatrixXd cov = sol.covariance();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        if (lmin < -opts.psd_tolerance * std::max(cov.trace(), 1e-300))
            throw SolverError("covariance is not positive semidefinite, min eigenvalue " +
                                  std::to_string(lmin),
                              sol.residual);
    }
    return sol;
}

MomentSolution solve_stationary(const ChainParams& params, const LyapunovOptions& opts) {
    const OperatorSet ops = assemble_operators(params, params.tau());
    const Eigen::VectorXd m = solve_stationary_mean(ops);
    return solve_stationary_second_moments(ops, m, opts);
}

MomentSolution local_equilibrium_moments(int n, const std::function<double(double)>& r0,
                                         const std::function<double(double)>& temperature) {
    const int N = 2 * n + 1;
    MomentSolution s;
    s.n = n;
    s.m = Eigen::VectorXd::Zero(N);
    s.M = Eigen::MatrixXd::Zero(N, N);
    for (int x = 1; x <= n; ++x) {
        const double u = static_cast<double>(x) / n;
        s.m[ir(x)] = r0(u);
        s.M(ir(x), ir(x)) = temperature(u);
    }
    for (int x = 0; x <= n; ++x) s.M(ip(n, x), ip(n, x)) = temperature(static_cast<double>(x) / n);
    s.M += s.m * s.m.transpose();
    return s;
}

std::vector<MomentSolution> evolve_moments(const std::function<OperatorSet(double)>& ops_at,
                                           const Eigen::VectorXd& m0, const Eigen::MatrixXd& M0,
                                           const std::vector<double>& output_times,
                                           const EvolveOptions& opts) {
    const OperatorSet ops0 = ops_at(0.0);
    const int n = ops0.n;
    const double n2 = static_cast<double>(n) * n;
    const double dt_max = opts.stability_factor / (n2 * norm1(ops0.B));

    if (!M0.isApprox(M0.transpose(), 1e-12))
        throw std::invalid_argument("initial second-moment matrix must be symmetric");
    if (!std::is_sorted(output_times.begin(), output_times.end()) ||
        (!output_times.empty() && output_times.front() < 0.0))
        throw std::invalid_argument("output times must be sorted and nonnegative");

    struct Deriv {
        Eigen::VectorXd dm;
        Eigen::MatrixXd dM;
    };
    auto rhs = [&](double t, const Eigen::VectorXd& m, const Eigen::MatrixXd& M) {
        const OperatorSet ops = ops_at(t);
        Deriv d;
        d.dm = n2 * (ops.B * m + ops.c);
        Eigen::MatrixXd BM = ops.B * M;
        d.dM = BM + BM.transpose() + ops.exchange_term(M) + forcing(ops, m);
        d.dM *= n2;
        return d;
    };

    Eigen::VectorXd m = m0;
    Eigen::MatrixXd M = M0;
    double t = 0.0;
    const double scale0 = 1.0 + M0.lpNorm<Eigen::Infinity>();

    auto rk4 = [&](double h, Eigen::VectorXd& mo, Eigen::MatrixXd& Mo) {
        const Deriv k1 = rhs(t, m, M);
        const Deriv k2 = rhs(t + 0.5 * h, m + 0.5 * h * k1.dm, M + 0.5 * h * k1.dM);
        const Deriv k3 = rhs(t + 0.5 * h, m + 0.5 * h * k2.dm, M + 0.5 * h * k2.dM);
        const Deriv k4 = rhs(t + h, m + h * k3.dm, M + h * k3.dM);
        mo = m + (h / 6.0) * (k1.dm + 2.0 * k2.dm + 2.0 * k3.dm + k4.dm);
        Mo = M + (h / 6.0) * (k1.dM + 2.0 * k2.dM + 2.0 * k3.dM + k4.dM);
        Mo = 0.5 * (Mo + Mo.transpose()).eval();
    };

    std::vector<MomentSolution> out;
    out.reserve(output_times.size());
    Eigen::VectorXd mn;
    Eigen::MatrixXd Mn;
    for (double target : output_times) {
        while (t < target - 1e-14 * std::max(1.0, target)) {
            double h = std::min(dt_max, target - t);
            int halvings = 0;
            for (;;) {
                rk4(h, mn, Mn);
                const OperatorSet ops = ops_at(t + h);
                const double limit =
                    1e3 * (scale0 + ops.c.squaredNorm() + ops.D.lpNorm<Eigen::Infinity>());
                const double next = Mn.lpNorm<Eigen::Infinity>();
                // Moments of the stable linear system stay at the scale of the
                // initial data and forcing; growth past it is RK4 instability.
                if (Mn.allFinite() && mn.allFinite() && next <= limit) break;
                if (++halvings > opts.max_halvings)
                    throw SolverError("moment ODE step became unstable at t = " +
                                          std::to_string(t),
                                      next);
                h *= 0.5;
            }
            m.swap(mn);
            M.swap(Mn);
            t += h;
        }
        MomentSolution s;
        s.n = n;
        s.m = m;
        s.M = M;
        s.t = target;
        const OperatorSet ops = ops_at(target);
        Eigen::MatrixXd BM = ops.B * M;
        // Residual of the time-t equation is dM/dt / n^2; reported for diagnostics.
        s.residual = (BM + BM.transpose() + ops.exchange_term(M) + forcing(ops, m))
                         .lpNorm<Eigen::Infinity>();
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<MomentSolution> evolve_moments(const ChainParams& params, const Eigen::VectorXd& m0,
                                           const Eigen::MatrixXd& M0,
                                           const std::vector<double>& output_times,
                                           const EvolveOptions& opts) {
    params.validate();
    auto ops_at = [&params](double t) { return assemble_operators(params, params.tau_plus(t)); };
    return evolve_moments(ops_at, m0, M0, output_times, opts);
}

}  // namespace ness
