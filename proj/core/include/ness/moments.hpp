#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ness/chain.hpp"
#include "ness/params.hpp"

namespace ness {

/// Raised when a linear solve or an iteration fails; carries the last residual.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// First and raw second moments, stationary or at time t.
struct MomentSolution {
    int n = 0;
    Eigen::VectorXd m;
    Eigen::MatrixXd M;
    double residual = 0.0;
    int iterations = 0;
    double t = 0.0;

    Eigen::MatrixXd covariance() const { return M - m * m.transpose(); }
    double mean_r(int x) const { return m[ir(x)]; }
    double mean_p(int x) const { return m[ip(n, x)]; }
    double rr(int x, int y) const { return M(ir(x), ir(y)); }
    double pp(int x, int y) const { return M(ip(n, x), ip(n, y)); }
    double rp(int x, int y) const { return M(ir(x), ip(n, y)); }
};

enum class LyapunovMethod {
    /// Sparse LU on the vectorized operator over the symmetric-packed unknowns.
    Direct,
    /// Lag the exchange term and solve the remaining Lyapunov equation by
    /// Bartels-Stewart on the Schur form of B.
    FixedPoint,
};

struct LyapunovOptions {
    LyapunovMethod method = LyapunovMethod::Direct;
    double tolerance = 1e-10;
    int max_iterations = 200;
    bool check_psd = true;
    double psd_tolerance = 1e-8;
};

/// Solves B m + c = 0.
Eigen::VectorXd solve_stationary_mean(const OperatorSet& ops);

/// Max-norm of B M + M B^T + sum_k C_k M C_k^T + c m^T + m c^T + D.
double lyapunov_residual(const OperatorSet& ops, const Eigen::VectorXd& m,
                         const Eigen::MatrixXd& M);

MomentSolution solve_stationary_second_moments(const OperatorSet& ops, const Eigen::VectorXd& m,
                                               const LyapunovOptions& opts = {});

/// Mean and second moments together, for a constant-tension parameter set.
MomentSolution solve_stationary(const ChainParams& params, const LyapunovOptions& opts = {});

/// Solves B X + X B^T = R for X by Bartels-Stewart. Exposed for testing.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& B, const Eigen::MatrixXd& R);

struct EvolveOptions {
    /// Safety factor s in n^2 dt ||B||_1 <= s.
    double stability_factor = 0.5;
    int max_halvings = 8;
};

/// Moments of the product-Gaussian local-equilibrium ensemble: independent
/// r_x ~ N(r0(x/n), T(x/n)), p_x ~ N(0, T(x/n)).
MomentSolution local_equilibrium_moments(int n, const std::function<double(double)>& r0,
                                         const std::function<double(double)>& temperature);

/// Integrates the moment ODEs in macroscopic time with classical RK4 and
/// returns the moments at each requested time (sorted, nonnegative).
std::vector<MomentSolution> evolve_moments(const std::function<OperatorSet(double)>& ops_at,
                                           const Eigen::VectorXd& m0, const Eigen::MatrixXd& M0,
                                           const std::vector<double>& output_times,
                                           const EvolveOptions& opts = {});

std::vector<MomentSolution> evolve_moments(const ChainParams& params, const Eigen::VectorXd& m0,
                                           const Eigen::MatrixXd& M0,
                                           const std::vector<double>& output_times,
                                           const EvolveOptions& opts = {});

}  // namespace ness
