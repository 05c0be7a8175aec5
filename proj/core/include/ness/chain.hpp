#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <utility>
#include <vector>

#include "ness/params.hpp"

namespace ness {

// Index layout shared by every module: z = (r_1..r_n, p_0..p_n).
inline int ir(int x) { return x - 1; }
inline int ip(int n, int x) { return n + x; }

/// Microscopic configuration of the chain.
class StateVector {
public:
    explicit StateVector(int n);
    StateVector(int n, Eigen::VectorXd z);

    int n() const { return n_; }
    int dim() const { return static_cast<int>(z_.size()); }

    double r(int x) const { return z_[ir(x)]; }
    double p(int x) const { return z_[ip(n_, x)]; }
    double& r(int x) { return z_[ir(x)]; }
    double& p(int x) { return z_[ip(n_, x)]; }

    const Eigen::VectorXd& z() const { return z_; }
    Eigen::VectorXd& z() { return z_; }

    bool finite() const { return z_.allFinite(); }

private:
    int n_;
    Eigen::VectorXd z_;
};

/// Linear-drift / linear-noise representation of the chain SDE in
/// microscopic time:
///
///   dz = (B z + c) ds + sum_k C_k z dw_k + D^{1/2} dw~
///
/// C_k acts on the momentum pair (x, x+1) only, so it is stored implicitly
/// through `exchange_pairs` and `sqrt_gamma`.
struct OperatorSet {
    int n = 0;
    Eigen::SparseMatrix<double, Eigen::RowMajor> B;
    Eigen::VectorXd c;
    /// Left site x of each exchange pair (x, x+1), x = 0..n-1.
    std::vector<int> exchange_pairs;
    double sqrt_gamma = 0.0;
    /// Diagonal of the additive noise covariance.
    Eigen::VectorXd D;

    int dim() const { return 2 * n + 1; }

    /// Dense C_k for pair index k.
    Eigen::MatrixXd exchange_matrix(int k) const;

    /// sum_k C_k M C_k^T, touching only the momentum tridiagonal band.
    Eigen::MatrixXd exchange_term(const Eigen::MatrixXd& M) const;

    Eigen::VectorXd drift(const Eigen::VectorXd& z) const { return B * z + c; }
};

OperatorSet assemble_operators(const ChainParams& params, double tau_value);

/// f(z) = z^T Q z + b^T z + k, with Q symmetric.
struct QuadraticForm {
    Eigen::MatrixXd Q;
    Eigen::VectorXd b;
    double k = 0.0;

    static QuadraticForm zero(int dim);
    double operator()(const Eigen::VectorXd& z) const { return z.dot(Q * z) + b.dot(z) + k; }
    /// Expectation given first and raw second moments.
    double expect(const Eigen::VectorXd& m, const Eigen::MatrixXd& M) const;
};

/// Generator (microscopic time) applied to a quadratic function. Quadratic
/// functions are closed under the generator, so the result is again a
/// QuadraticForm.
QuadraticForm apply_generator(const OperatorSet& ops, const QuadraticForm& f);

// Monomial builders over the shared index layout.
QuadraticForm monomial(int dim, int i);
QuadraticForm monomial(int dim, int i, int j);

double site_energy(const StateVector& z, int x);
double total_energy(const StateVector& z);

/// j_{x,x+1} = -p_x r_{x+1} + (gamma/2)(p_x^2 - p_{x+1}^2), x = 0..n-1.
double bulk_current(const StateVector& z, int x, double gamma);

struct BoundaryCurrents {
    double left = 0.0;   // j_{-1,0}
    double right = 0.0;  // j_{n,n+1}
};

BoundaryCurrents boundary_currents(const StateVector& z, const ChainParams& params,
                                   double tau_value);

// The observables above as quadratic forms; used to take NESS averages.
QuadraticForm site_energy_form(int n, int x);
QuadraticForm bulk_current_form(int n, int x, double gamma);

}  // namespace ness
