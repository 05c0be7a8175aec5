#pragma once

#include <stdexcept>
#include <string>

namespace ness {

/// Error raised for parameter sets that violate the model's constraints.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Boundary tension as a function of macroscopic time.
///
/// Only three shapes are supported: a constant, a linear ramp that saturates
/// at `end_value` once `t >= ramp_time`, and a sinusoid
/// `value + amplitude * sin(2*pi*t/period)`.
class TensionSchedule {
public:
    enum class Kind { Constant, Ramp, Sinusoid };

    TensionSchedule() = default;

    static TensionSchedule constant(double value);
    static TensionSchedule ramp(double start_value, double end_value, double ramp_time);
    static TensionSchedule sinusoid(double mean, double amplitude, double period);

    double operator()(double t) const;

    Kind kind() const { return kind_; }
    bool is_constant() const { return kind_ == Kind::Constant; }
    /// Value at t = 0.
    double initial() const { return (*this)(0.0); }

    /// Human-readable form used in manifests, e.g. "ramp(0,1,0.25)".
    std::string describe() const;

private:
    Kind kind_ = Kind::Constant;
    double a_ = 0.0;
    double b_ = 0.0;
    double c_ = 1.0;
};

/// Physical parameters of the open chain.
struct ChainParams {
    int n = 16;
    double gamma = 1.0;
    double gamma_tilde = 1.0;
    TensionSchedule tau_plus = TensionSchedule::constant(0.0);
    double T_minus = 1.0;
    double T_plus = 1.0;

    /// Throws ParameterError naming the first violated constraint.
    void validate() const;

    /// Stationary tension; throws if the schedule is not constant.
    double tau() const;

    int dim() const { return 2 * n + 1; }
};

/// Convenience constructor for the constant-tension case.
ChainParams make_params(int n, double gamma, double gamma_tilde, double tau, double T_minus,
                        double T_plus);

}  // namespace ness
