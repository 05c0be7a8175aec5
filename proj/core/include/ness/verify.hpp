#pragma once

#include <string>
#include <vector>

#include "ness/moments.hpp"
#include "ness/params.hpp"
#include "ness/profile.hpp"

namespace ness {

enum class Verdict { Pass, Fail, Informational };

const char* to_string(Verdict v);

/// Outcome of one convergence or consistency study.
struct VerificationReport {
    std::string name;
    std::vector<int> n_values;
    /// Primary metric per n (same order as n_values).
    std::vector<double> metrics;
    /// Named auxiliary series, e.g. one per test function or observable.
    struct Series {
        std::string label;
        std::vector<double> values;
        double extrapolated = 0.0;
        double target = 0.0;
        bool ok = true;
    };
    std::vector<Series> series;
    double extrapolated = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Informational;
    std::string engines;
    std::string details;

    bool failed() const { return verdict == Verdict::Fail; }
};

/// True when |values| is non-increasing (each step allowed `slack` growth).
bool decreasing_magnitude(const std::vector<double>& values, double slack = 0.0);

/// sup_x |<r_x> - tau x/n| from the exact mean; passes when the sup decreases
/// with n and the last value is at most 2|tau|/n_max + 1e-9.
VerificationReport check_elongation_profile(const ChainParams& params, const std::vector<int>& n_list);

/// n * jbar per n, Richardson-extrapolated (order 1) from the two largest n;
/// passes within 1% of J_ss (absolute 1e-8 when J_ss = 0).
VerificationReport check_current_limit(const ChainParams& params, const std::vector<int>& n_list,
                                       const LyapunovOptions& opts = {});

/// (1/n) sum G(x/n) <E_x> against the integral of G (e_th_ss + r_ss^2/2);
/// passes when errors decrease and the Richardson limit is within 1%.
/// Informational for gamma != 1.
struct NamedFunction {
    std::string name;
    GridFunction f;
};
VerificationReport check_energy_profile(const ChainParams& params, const std::vector<int>& n_list,
                                        const std::vector<NamedFunction>& G_set,
                                        const LyapunovOptions& opts = {});

/// Sign of extrapolated n * jbar over a tension grid against the sign of
/// J_ss; the empirical reversal must be within one grid step of
/// sqrt((1 + gamma^2)(T_- - T_+)). Metrics hold the reversal tension seen at
/// each n alone.
VerificationReport check_uphill(const ChainParams& base, const std::vector<double>& tau_grid,
                                const std::vector<int>& n_list, const LyapunovOptions& opts = {});

/// argmax of <p_x^2> against u_max, the peak against max(T_-, T_+) and the
/// sup distance to e_th_ss. Informational when the maximum is not interior
/// or gamma != 1.
VerificationReport check_interior_maximum(const ChainParams& params,
                                          const LyapunovOptions& opts = {});

/// Boundary second moments against their large-n limits.
VerificationReport check_boundary_limits(const ChainParams& params, const std::vector<int>& n_list,
                                         const LyapunovOptions& opts = {});

/// Moment-ODE energy and stretch profiles against the PDE fields at the
/// given times, from matched local-equilibrium initial data. Passes when the
/// sup discrepancy decreases with n and is below 5% at the largest n.
struct NonstationarySetup {
    int m = 256;
    double pde_dt = 1e-4;
    std::vector<double> times{0.1, 0.5};
};
VerificationReport check_nonstationary_consistency(const ChainParams& params,
                                                   const std::vector<int>& n_list,
                                                   const NonstationarySetup& setup = {});

/// equipartition_defect over n; never fails.
VerificationReport probe_equipartition(const ChainParams& params, const std::vector<int>& n_list,
                                       const GridFunction& G, const LyapunovOptions& opts = {});

/// Signs of the heat exchanged with each bath over a tension grid; never fails.
VerificationReport scan_boundary_heat(const ChainParams& base, const std::vector<double>& tau_grid,
                                      const LyapunovOptions& opts = {});

/// Gauss-Legendre quadrature on [0,1].
double integrate_unit(const GridFunction& f, int panels = 64);

}  // namespace ness
