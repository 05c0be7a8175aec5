#include "ness/profile.hpp"

#include <limits>

namespace ness {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double phi_at(const MomentSolution& sol, double gamma, int x) {
    return -(sol.rr(x, x) + sol.pp(x - 1, x)) / (2.0 * gamma) -
           0.25 * gamma * (sol.pp(x, x) + sol.pp(x - 1, x - 1));
}

ProfileTable profile_from_moments(const MomentSolution& sol, const ChainParams& params,
                                  double tau_value) {
    const int n = sol.n;
    const double g = params.gamma;
    ProfileTable tab;
    tab.n = n;
    tab.t = sol.t;
    const auto rows = static_cast<size_t>(n + 1);
    tab.mean_r.assign(rows, kNaN);
    tab.mean_p.assign(rows, kNaN);
    tab.pp.assign(rows, kNaN);
    tab.rr.assign(rows, kNaN);
    tab.energy.assign(rows, kNaN);
    tab.mech_energy_mean.assign(rows, kNaN);
    tab.mech_energy_raw.assign(rows, kNaN);
    tab.phi.assign(rows, kNaN);
    tab.current.assign(rows, kNaN);

    for (int x = 0; x <= n; ++x) {
        tab.mean_p[x] = sol.mean_p(x);
        tab.pp[x] = sol.pp(x, x);
        tab.energy[x] = 0.5 * tab.pp[x];
        if (x >= 1) {
            tab.mean_r[x] = sol.mean_r(x);
            tab.rr[x] = sol.rr(x, x);
            tab.energy[x] += 0.5 * tab.rr[x];
            tab.mech_energy_mean[x] = 0.5 * tab.mean_r[x] * tab.mean_r[x];
            tab.mech_energy_raw[x] = 0.5 * tab.rr[x];
            tab.phi[x] = phi_at(sol, g, x);
        }
        if (x < n)
            tab.current[x] = -sol.rp(x + 1, x) + 0.5 * g * (sol.pp(x, x) - sol.pp(x + 1, x + 1));
    }
    const double gt = params.gamma_tilde;
    tab.jbar = 0.5 * gt * (params.T_minus - sol.pp(0, 0));
    tab.jbar_right = -0.5 * gt * (params.T_plus - sol.pp(n, n)) - tau_value * sol.mean_p(n);
    tab.current[n] = tab.jbar_right;
    tab.pbar = sol.mean_p(0);
    return tab;
}

ProfileTable profile_from_moments(const MomentSolution& sol, const ChainParams& params) {
    return profile_from_moments(sol, params, params.tau());
}

DecompositionReport energy_decomposition(const MomentSolution& sol, double gamma,
                                         const GridFunction& G) {
    const int n = sol.n;
    const double g2 = gamma * gamma;
    const double s = 1.0 + g2;
    DecompositionReport rep;
    for (int x = 1; x <= n; ++x) {
        const double w = G(static_cast<double>(x) / n) / n;
        const double px2 = sol.pp(x, x);
        const double pm2 = sol.pp(x - 1, x - 1);
        const double rx2 = sol.rr(x, x);
        rep.H_phi += w * phi_at(sol, gamma, x);
        rep.H_nabla += w * (px2 - pm2);
        rep.H_corr += w * sol.pp(x - 1, x);
        rep.H_m += w * (px2 - rx2);
        rep.total += w * 0.5 * (px2 + rx2);
    }
    rep.H_phi *= -2.0 * gamma / s;
    rep.H_nabla *= g2 / (2.0 * s);
    rep.H_corr *= -1.0 / s;
    rep.H_m *= (1.0 - g2) / (2.0 * s);
    return rep;
}

double equipartition_defect(const MomentSolution& sol, const GridFunction& G) {
    const int n = sol.n;
    const double n2 = static_cast<double>(n) * n;
    double acc = 0.0;
    for (int x = 2; x <= n - 2; ++x) {
        const double lap = n2 * (G(static_cast<double>(x + 1) / n) +
                                 G(static_cast<double>(x - 1) / n) -
                                 2.0 * G(static_cast<double>(x) / n));
        const double var_r = sol.rr(x, x) - sol.mean_r(x) * sol.mean_r(x);
        acc += lap * (sol.pp(x, x) - var_r);
    }
    return acc / n;
}

}  // namespace ness
