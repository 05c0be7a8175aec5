#pragma once

#include <functional>
#include <vector>

#include "ness/params.hpp"

namespace ness {

/// Grid functions r(t,u), e(t,u) on u_i = i/m, i = 0..m.
struct MacroFields {
    int m = 0;
    double t = 0.0;
    std::vector<double> r;
    std::vector<double> e;
    /// D dt / du^2 of the stiffest diffusion in the run.
    double mesh_ratio = 0.0;

    double u(int i) const { return static_cast<double>(i) / m; }
    std::vector<double> e_mech() const;
    std::vector<double> e_th() const;
};

/// Closed-form stationary solution for a constant tension.
struct StationaryProfiles {
    double gamma = 1.0;
    double tau = 0.0;
    double T_minus = 1.0;
    double T_plus = 1.0;
    double J_ss = 0.0;
    /// Location of the maximum of e_th_ss on [0,1].
    double u_max = 0.0;
    double e_th_max = 0.0;
    /// True when the maximum is attained strictly inside (0,1).
    bool interior = false;

    double r_ss(double u) const { return tau * u; }
    double e_th_ss(double u) const {
        return tau * tau / (1.0 + gamma * gamma) * u * (1.0 - u) + (T_plus - T_minus) * u + T_minus;
    }
    double e_ss(double u) const { return e_th_ss(u) + 0.5 * r_ss(u) * r_ss(u); }
};

StationaryProfiles stationary_profiles(const ChainParams& params);

/// Mesh ratio above which results carry a conditioning warning.
inline constexpr double kMeshRatioWarning = 1e4;

/// Crank-Nicolson stretch levels r^0..r^K on a uniform time mesh.
struct StretchHistory {
    int m = 0;
    double dt = 0.0;
    std::vector<std::vector<double>> levels;
    double mesh_ratio = 0.0;

    double t_end() const { return dt * static_cast<double>(levels.size() - 1); }
    MacroFields at_level(std::size_t k) const;
};

/// dr/dt = gamma^{-1} r_uu, r(t,0) = 0, r(t,1) = tau(t). The last step is
/// shortened so the final level lands on t_end exactly.
StretchHistory solve_stretch(const ChainParams& params, const std::vector<double>& r0,
                             double t_end, double dt);

/// de/dt = 1/2 d_uu{(1/gamma + gamma) e + 1/2 (1/gamma - gamma) r^2} with
/// e(t,0) = T_-, e(t,1) = T_+ + tau(t)^2/2. Diffusion of e is Crank-Nicolson;
/// the r^2 flux is explicit at the half step from the supplied stretch.
MacroFields solve_energy(const ChainParams& params, const std::vector<double>& e0,
                         const StretchHistory& stretch);

/// Both fields at each requested time without storing the full history.
std::vector<MacroFields> solve_macro(const ChainParams& params, const std::vector<double>& r0,
                                     const std::vector<double>& e0,
                                     const std::vector<double>& output_times, double dt);

struct ThermalSplit {
    std::vector<double> e_mech;
    std::vector<double> e_th;
    /// Max over interior nodes of the discrete e_th equation residual.
    double residual = 0.0;
};

/// Splits e into r^2/2 and the thermal part, and evaluates the residual of
/// de_th/dt = 1/2 (1/gamma + gamma) e_th_uu + (r_u)^2 / gamma. Without a
/// previous slice the time derivative is taken as zero.
ThermalSplit thermal_split(const MacroFields& fields, double gamma,
                           const MacroFields* previous = nullptr);

/// Samples f at the grid nodes.
std::vector<double> sample_grid(int m, const std::function<double(double)>& f);

}  // namespace ness
