#pragma once

#include <functional>
#include <vector>

#include "ness/moments.hpp"
#include "ness/params.hpp"

namespace ness {

/// Test function on [0,1], sampled at x/n.
using GridFunction = std::function<double(double)>;

/// Per-site observables built from a MomentSolution. Row x runs over 0..n;
/// entries that do not exist at a site (r_0, phi(0)) are NaN.
struct ProfileTable {
    int n = 0;
    std::vector<double> mean_r;
    std::vector<double> mean_p;
    std::vector<double> pp;
    std::vector<double> rr;
    std::vector<double> energy;
    /// 1/2 <r_x>^2
    std::vector<double> mech_energy_mean;
    /// 1/2 <r_x^2>
    std::vector<double> mech_energy_raw;
    std::vector<double> phi;
    /// <j_{x,x+1}> for x < n; the last row holds <j_{n,n+1}>.
    std::vector<double> current;
    /// (gamma~/2)(T_- - <p_0^2>)
    double jbar = 0.0;
    /// -(gamma~/2)(T_+ - <p_n^2>) - tau <p_n>
    double jbar_right = 0.0;
    double pbar = 0.0;
    double t = 0.0;
};

/// Averages of the profile observables. `tau_value` is the tension at the
/// time of the solution (the stationary tension for NESS solutions).
ProfileTable profile_from_moments(const MomentSolution& sol, const ChainParams& params,
                                  double tau_value);
ProfileTable profile_from_moments(const MomentSolution& sol, const ChainParams& params);

/// phi(x) = -(<r_x^2> + <p_{x-1}p_x>)/(2 gamma) - gamma (<p_x^2> + <p_{x-1}^2>)/4.
double phi_at(const MomentSolution& sol, double gamma, int x);

struct DecompositionReport {
    double H_phi = 0.0;
    double H_nabla = 0.0;
    double H_corr = 0.0;
    double H_m = 0.0;
    /// (1/n) sum_{x=1}^n G(x/n) <E_x>
    double total = 0.0;

    double sum() const { return H_phi + H_nabla + H_corr + H_m; }
};

DecompositionReport energy_decomposition(const MomentSolution& sol, double gamma,
                                         const GridFunction& G);

/// (1/n) sum_{x=2}^{n-2} (Delta_n G)_x (<p_x^2> - Var r_x), with
/// (Delta_n G)_x = n^2 (G_{x+1} + G_{x-1} - 2 G_x).
double equipartition_defect(const MomentSolution& sol, const GridFunction& G);

}  // namespace ness
