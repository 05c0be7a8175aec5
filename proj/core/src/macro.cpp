#include "ness/macro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ness {

namespace {

/// Solves (I - k L) x = rhs on the interior with Dirichlet values already in
/// x[0], x[m]; L is the second-difference operator scaled by 1/du^2.
void implicit_solve(std::vector<double>& x, const std::vector<double>& rhs, double k_over_du2) {
    const int m = static_cast<int>(x.size()) - 1;
    const int N = m - 1;
    if (N <= 0) return;
    const double diag = 1.0 + 2.0 * k_over_du2;
    const double off = -k_over_du2;
    std::vector<double> cp(static_cast<size_t>(N)), dp(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        double d = rhs[i + 1];
        if (i == 0) d -= off * x[0];
        if (i == N - 1) d -= off * x[m];
        const double denom = diag - (i > 0 ? off * cp[i - 1] : 0.0);
        cp[i] = off / denom;
        dp[i] = (d - (i > 0 ? off * dp[i - 1] : 0.0)) / denom;
    }
    x[N] = dp[N - 1];
    for (int i = N - 2; i >= 0; --i) x[i + 1] = dp[i] - cp[i] * x[i + 2];
}

double laplacian(const std::vector<double>& f, int i, double inv_du2) {
    return (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv_du2;
}

void check_grid(const std::vector<double>& f, const char* what) {
    if (f.size() < 3) throw std::invalid_argument(std::string(what) + " needs at least 3 nodes");
}

std::vector<double> squared(const std::vector<double>& v) {
    std::vector<double> s(v.size());
    std::transform(v.begin(), v.end(), s.begin(), [](double a) { return a * a; });
    return s;
}

/// One CN step for the stretch from t to t + h.
void stretch_step(const ChainParams& p, std::vector<double>& r, double t, double h, double du) {
    const int m = static_cast<int>(r.size()) - 1;
    const double D = 1.0 / p.gamma;
    const double inv_du2 = 1.0 / (du * du);
    std::vector<double> rhs(r.size(), 0.0);
    for (int i = 1; i < m; ++i) rhs[i] = r[i] + 0.5 * h * D * laplacian(r, i, inv_du2);
    r[0] = 0.0;
    r[m] = p.tau_plus(t + h);
    implicit_solve(r, rhs, 0.5 * h * D * inv_du2);
}

/// One CN step for the energy from t to t + h given r at both levels.
void energy_step(const ChainParams& p, std::vector<double>& e, const std::vector<double>& r_old,
                 const std::vector<double>& r_new, double t, double h, double du) {
    const int m = static_cast<int>(e.size()) - 1;
    const double a = 0.5 * (1.0 / p.gamma + p.gamma);
    const double b = 0.25 * (1.0 / p.gamma - p.gamma);
    const double inv_du2 = 1.0 / (du * du);
    std::vector<double> r2(e.size());
    for (size_t i = 0; i < e.size(); ++i) r2[i] = 0.5 * (r_old[i] * r_old[i] + r_new[i] * r_new[i]);
    std::vector<double> rhs(e.size(), 0.0);
    for (int i = 1; i < m; ++i)
        rhs[i] = e[i] + 0.5 * h * a * laplacian(e, i, inv_du2) + h * b * laplacian(r2, i, inv_du2);
    const double tau = p.tau_plus(t + h);
    e[0] = p.T_minus;
    e[m] = p.T_plus + 0.5 * tau * tau;
    implicit_solve(e, rhs, 0.5 * h * a * inv_du2);
}

double max_diffusivity(const ChainParams& p) {
    return std::max(1.0 / p.gamma, 0.5 * (1.0 / p.gamma + p.gamma));
}

}  // namespace

std::vector<double> MacroFields::e_mech() const {
    std::vector<double> out = squared(r);
    for (double& v : out) v *= 0.5;
    return out;
}

std::vector<double> MacroFields::e_th() const {
    std::vector<double> out = e_mech();
    for (size_t i = 0; i < out.size(); ++i) out[i] = e[i] - out[i];
    return out;
}

StationaryProfiles stationary_profiles(const ChainParams& params) {
    params.validate();
    StationaryProfiles s;
    s.gamma = params.gamma;
    s.tau = params.tau();
    s.T_minus = params.T_minus;
    s.T_plus = params.T_plus;
    const double g = params.gamma;
    const double dT = params.T_plus - params.T_minus;
    s.J_ss = -0.5 * (1.0 / g + g) * dT - s.tau * s.tau / (2.0 * g);
    if (s.tau == 0.0) {
        s.u_max = dT >= 0.0 ? 1.0 : 0.0;
    } else {
        // Vertex of tau^2/(1+g^2) u(1-u) + dT u + T_-.
        s.u_max = std::clamp(0.5 + (1.0 + g * g) * dT / (2.0 * s.tau * s.tau), 0.0, 1.0);
    }
    s.interior = s.u_max > 0.0 && s.u_max < 1.0;
    s.e_th_max = s.e_th_ss(s.u_max);
    return s;
}

MacroFields StretchHistory::at_level(std::size_t k) const {
    MacroFields f;
    f.m = m;
    f.r = levels.at(k);
    f.t = std::min(dt * static_cast<double>(k), t_end());
    f.mesh_ratio = mesh_ratio;
    return f;
}

StretchHistory solve_stretch(const ChainParams& params, const std::vector<double>& r0,
                             double t_end, double dt) {
    params.validate();
    check_grid(r0, "stretch initial data");
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("need dt > 0 and t_end >= 0");
    StretchHistory h;
    h.m = static_cast<int>(r0.size()) - 1;
    h.dt = dt;
    const double du = 1.0 / h.m;
    h.mesh_ratio = dt / (params.gamma * du * du);
    const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    h.levels.reserve(static_cast<size_t>(steps) + 1);
    h.levels.push_back(r0);
    std::vector<double> r = r0;
    double t = 0.0;
    for (long k = 0; k < steps; ++k) {
        const double step = std::min(dt, t_end - t);
        stretch_step(params, r, t, step, du);
        t += step;
        h.levels.push_back(r);
    }
    return h;
}

MacroFields solve_energy(const ChainParams& params, const std::vector<double>& e0,
                         const StretchHistory& stretch) {
    params.validate();
    check_grid(e0, "energy initial data");
    if (static_cast<int>(e0.size()) != stretch.m + 1)
        throw std::invalid_argument("energy and stretch grids differ");
    const double du = 1.0 / stretch.m;
    std::vector<double> e = e0;
    double t = 0.0;
    const double t_end = stretch.t_end();
    for (size_t k = 0; k + 1 < stretch.levels.size(); ++k) {
        const double step = std::min(stretch.dt, t_end - t);
        energy_step(params, e, stretch.levels[k], stretch.levels[k + 1], t, step, du);
        t += step;
    }
    MacroFields f;
    f.m = stretch.m;
    f.t = t_end;
    f.r = stretch.levels.back();
    f.e = std::move(e);
    f.mesh_ratio = stretch.dt * max_diffusivity(params) / (du * du);
    return f;
}

std::vector<MacroFields> solve_macro(const ChainParams& params, const std::vector<double>& r0,
                                     const std::vector<double>& e0,
                                     const std::vector<double>& output_times, double dt) {
    params.validate();
    check_grid(r0, "stretch initial data");
    if (r0.size() != e0.size()) throw std::invalid_argument("energy and stretch grids differ");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!std::is_sorted(output_times.begin(), output_times.end()) ||
        (!output_times.empty() && output_times.front() < 0.0))
        throw std::invalid_argument("output times must be sorted and nonnegative");
    const int m = static_cast<int>(r0.size()) - 1;
    const double du = 1.0 / m;
    std::vector<double> r = r0, e = e0, r_old;
    double t = 0.0;
    std::vector<MacroFields> out;
    for (double target : output_times) {
        while (t < target - 1e-12 * std::max(1.0, target)) {
            const double step = std::min(dt, target - t);
            r_old = r;
            stretch_step(params, r, t, step, du);
            energy_step(params, e, r_old, r, t, step, du);
            t += step;
        }
        MacroFields f;
        f.m = m;
        f.t = target;
        f.r = r;
        f.e = e;
        f.mesh_ratio = dt * max_diffusivity(params) / (du * du);
        out.push_back(std::move(f));
    }
    return out;
}

ThermalSplit thermal_split(const MacroFields& fields, double gamma, const MacroFields* previous) {
    ThermalSplit s;
    s.e_mech = fields.e_mech();
    s.e_th = fields.e_th();
    const int m = fields.m;
    const double du = 1.0 / m;
    const double inv_du2 = 1.0 / (du * du);
    const double a = 0.5 * (1.0 / gamma + gamma);

    std::vector<double> th = s.e_th;
    std::vector<double> rr = fields.r;
    std::vector<double> th_prev, r_prev;
    double dt = 0.0;
    if (previous) {
        if (previous->m != m) throw std::invalid_argument("slices on different grids");
        dt = fields.t - previous->t;
        if (!(dt > 0.0)) throw std::invalid_argument("previous slice must be earlier");
        th_prev = previous->e_th();
        r_prev = previous->r;
    }
    auto source = [&](const std::vector<double>& r, int i) {
        const double g = (r[i + 1] - r[i - 1]) / (2.0 * du);
        return g * g / gamma;
    };
    for (int i = 1; i < m; ++i) {
        double res;
        if (previous) {
            const double dtdt = (th[i] - th_prev[i]) / dt;
            const double spatial = 0.5 * (a * laplacian(th, i, inv_du2) + source(rr, i)) +
                                   0.5 * (a * laplacian(th_prev, i, inv_du2) + source(r_prev, i));
            res = dtdt - spatial;
        } else {
            res = a * laplacian(th, i, inv_du2) + source(rr, i);
        }
        s.residual = std::max(s.residual, std::abs(res));
    }
    return s;
}

std::vector<double> sample_grid(int m, const std::function<double(double)>& f) {
    std::vector<double> out(static_cast<size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) out[i] = f(static_cast<double>(i) / m);
    return out;
}

}  // namespace ness
