#include "ness/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ness {

TensionSchedule TensionSchedule::constant(double value) {
    TensionSchedule s;
    s.kind_ = Kind::Constant;
    s.a_ = value;
    return s;
}

TensionSchedule TensionSchedule::ramp(double start_value, double end_value, double ramp_time) {
    if (!(ramp_time > 0.0)) throw ParameterError("ramp time must be positive");
    TensionSchedule s;
    s.kind_ = Kind::Ramp;
    s.a_ = start_value;
    s.b_ = end_value;
    s.c_ = ramp_time;
    return s;
}

TensionSchedule TensionSchedule::sinusoid(double mean, double amplitude, double period) {
    if (!(period > 0.0)) throw ParameterError("sinusoid period must be positive");
    TensionSchedule s;
    s.kind_ = Kind::Sinusoid;
    s.a_ = mean;
    s.b_ = amplitude;
    s.c_ = period;
    return s;
}

double TensionSchedule::operator()(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return a_;
        case Kind::Ramp: {
            const double s = std::clamp(t / c_, 0.0, 1.0);
            return a_ + (b_ - a_) * s;
        }
        case Kind::Sinusoid:
            return a_ + b_ * std::sin(2.0 * std::numbers::pi * t / c_);
    }
    return a_;
}

std::string TensionSchedule::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::Constant:
            os << a_;
            break;
        case Kind::Ramp:
            os << "ramp(" << a_ << "," << b_ << "," << c_ << ")";
            break;
        case Kind::Sinusoid:
            os << "sin(" << a_ << "," << b_ << "," << c_ << ")";
            break;
    }
    return os.str();
}

void ChainParams::validate() const {
    if (n < 2) throw ParameterError("n must be at least 2");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("gamma must be positive");
    if (!(gamma_tilde > 0.0) || !std::isfinite(gamma_tilde))
        throw ParameterError("gamma_tilde must be positive");
    if (!(T_minus >= 0.0) || !std::isfinite(T_minus))
        throw ParameterError("T_minus must be nonnegative");
    if (!(T_plus >= 0.0) || !std::isfinite(T_plus))
        throw ParameterError("T_plus must be nonnegative");
    if (!std::isfinite(tau_plus(0.0))) throw ParameterError("tau_plus must be finite");
}

double ChainParams::tau() const {
    if (!tau_plus.is_constant())
        throw ParameterError("a stationary computation requires a constant tau_plus");
    return tau_plus(0.0);
}

ChainParams make_params(int n, double gamma, double gamma_tilde, double tau, double T_minus,
                        double T_plus) {
    ChainParams p;
    p.n = n;
    p.gamma = gamma;
    p.gamma_tilde = gamma_tilde;
    p.tau_plus = TensionSchedule::constant(tau);
    p.T_minus = T_minus;
    p.T_plus = T_plus;
    p.validate();
    return p;
}

}  // namespace ness
