#include "app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "ness/io.hpp"
#include "ness/macro.hpp"
#include "ness/parallel.hpp"
#include "ness/profile.hpp"
#include "ness/stats.hpp"
#include "ness/verify.hpp"

namespace ness::app {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const std::string t = trim(v);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

long long to_integer(const std::string& key, const std::string& v) {
    long long out = 0;
    const std::string t = trim(v);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << (v == 0.0 ? 0.0 : v);
    return os.str();
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17);
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

void write_csv(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ostringstream os;
    body(os);
    write_text_file(path, os.str());
}

std::string path_in(const RunConfig& c, const std::string& name) {
    return (std::filesystem::path(c.out) / name).string();
}

LyapunovOptions lyapunov_options(const RunConfig& c) {
    LyapunovOptions o;
    o.method = c.lyapunov;
    return o;
}

ChainParams with_n(ChainParams p, int n) {
    p.n = n;
    return p;
}

// moments ------------------------------------------------------------------

int run_moments(const RunConfig& c) {
    const MomentSolution sol = solve_stationary(c.params, lyapunov_options(c));
    const ProfileTable table = profile_from_moments(sol, c.params);
    write_csv(path_in(c, "profile.csv"), [&](std::ostream& os) { write_profile_csv(os, table); });
    write_text_file(path_in(c, "summary.json"), moments_summary_json(sol, table));
    std::cout << "moments n=" << c.params.n << " jbar=" << fmt(table.jbar)
              << " n*jbar=" << fmt(c.params.n * table.jbar) << " pbar=" << fmt(table.pbar)
              << " residual=" << sol.residual << '\n';
    return kOk;
}

// simulate -----------------------------------------------------------------

int run_simulate(const RunConfig& c) {
    const EstimateTable est = run_ness(c.params, c.sim);
    write_csv(path_in(c, "estimates.csv"), [&](std::ostream& os) { write_estimate_csv(os, est); });
    write_text_file(path_in(c, "simulation.json"), simulation_manifest_json(c.params, c.sim, est));
    std::cout << "simulate n=" << c.params.n << " jbar=" << fmt(est.jbar_left.value) << " +- "
              << fmt(est.jbar_left.se) << " batches=" << est.batches
              << (est.accepted ? "" : " (" + est.note + ")") << '\n';
    return kOk;
}

// pde ----------------------------------------------------------------------

int run_pde(const RunConfig& c) {
    const ChainParams& p = c.params;
    std::vector<double> r0, e0;
    if (c.pde_initial == "zero") {
        r0.assign(static_cast<size_t>(c.pde_m) + 1, 0.0);
        e0 = r0;
    } else if (c.pde_initial == "linear") {
        const double tau0 = p.tau_plus.initial();
        r0 = sample_grid(c.pde_m, [&](double u) { return tau0 * u; });
        e0 = sample_grid(c.pde_m, [&](double u) {
            return p.T_minus + (p.T_plus - p.T_minus) * u + 0.5 * tau0 * tau0 * u * u;
        });
    } else {
        const StationaryProfiles sp = stationary_profiles(p);
        r0 = sample_grid(c.pde_m, [&](double u) { return sp.r_ss(u); });
        e0 = sample_grid(c.pde_m, [&](double u) { return sp.e_ss(u); });
    }
    const std::vector<MacroFields> slices = solve_macro(p, r0, e0, c.times, c.pde_dt);
    write_csv(path_in(c, "fields.csv"), [&](std::ostream& os) { write_macro_csv(os, slices); });
    write_text_file(path_in(c, "summary.json"), macro_summary_json(p, slices, c.pde_dt));
    if (!slices.empty() && slices.front().mesh_ratio > kMeshRatioWarning)
        std::cerr << "warning: mesh ratio " << slices.front().mesh_ratio
                  << " is large; reduce pde_dt for accurate transients\n";
    std::cout << "pde m=" << c.pde_m << " slices=" << slices.size();
    if (p.tau_plus.is_constant()) {
        const StationaryProfiles sp = stationary_profiles(p);
        std::cout << " J_ss=" << fmt(sp.J_ss) << " u_max=" << fmt(sp.u_max)
                  << " e_th_max=" << fmt(sp.e_th_max);
    }
    std::cout << '\n';
    return kOk;
}

// verify -------------------------------------------------------------------

struct SuiteSizes {
    std::vector<int> elongation, current, energy, uphill, boundary, nonstationary, probe;
    int interior_n, heat_n;
};

SuiteSizes suite_sizes(const std::string& suite) {
    if (suite == "full")
        return {{32, 64, 128, 256}, {64, 128, 256}, {32, 64, 128}, {64, 128},
                {32, 64, 128, 256}, {16, 32, 64},   {32, 64, 128}, 128, 64};
    return {{16, 32, 64}, {32, 64}, {16, 32, 64}, {32, 64}, {16, 32, 64}, {8, 16, 32}, {16, 32}, 64, 16};
}

std::vector<std::function<VerificationReport()>> compose_suite(const RunConfig& c) {
    const SuiteSizes sz = suite_sizes(c.suite);
    const ChainParams p = c.params;
    const LyapunovOptions opts = lyapunov_options(c);
    std::vector<std::function<VerificationReport()>> checks;

    checks.emplace_back([=] { return check_elongation_profile(p, sz.elongation); });
    checks.emplace_back([=] { return check_current_limit(p, sz.current, opts); });
    checks.emplace_back([=] {
        const std::vector<NamedFunction> G{
            {"1", [](double) { return 1.0; }},
            {"sin(pi u)", [](double u) { return std::sin(std::numbers::pi * u); }},
            {"u^2", [](double u) { return u * u; }}};
        return check_energy_profile(p, sz.energy, G, opts);
    });
    checks.emplace_back([=] {
        ChainParams base = p;
        base.T_minus = std::max(p.T_minus, p.T_plus);
        base.T_plus = std::min(p.T_minus, p.T_plus);
        if (base.T_minus == base.T_plus) base.T_minus += 1.0;
        const double crit =
            std::sqrt((1.0 + base.gamma * base.gamma) * (base.T_minus - base.T_plus));
        const Range grid{0.0, 0.25, std::ceil(4.0 * crit) / 4.0 + 1.0};
        return check_uphill(base, grid.values(), sz.uphill, opts);
    });
    checks.emplace_back([=] { return check_interior_maximum(with_n(p, sz.interior_n), opts); });
    checks.emplace_back([=] { return check_boundary_limits(p, sz.boundary, opts); });
    checks.emplace_back([=] {
        ChainParams q = p;
        if (q.tau_plus.is_constant()) q.tau_plus = TensionSchedule::ramp(1.0, 2.0, 0.5);
        return check_nonstationary_consistency(q, sz.nonstationary);
    });
    checks.emplace_back([=] {
        return probe_equipartition(p, sz.probe, [](double u) { return std::sin(std::numbers::pi * u); },
                                   opts);
    });
    checks.emplace_back([=] {
        return scan_boundary_heat(with_n(p, sz.heat_n), Range{0.0, 0.5, 3.0}.values(), opts);
    });
    return checks;
}

int run_verify(const RunConfig& c) {
    const auto checks = compose_suite(c);
    std::vector<VerificationReport> reports(checks.size());
    parallel_for(static_cast<int>(checks.size()), [&](int i) { reports[i] = checks[i](); });

    bool failed = false;
    nlohmann::ordered_json index;
    index["suite"] = c.suite;
    index["checks"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        write_text_file(path_in(c, "reports/" + r.name + ".json"), report_json(r));
        failed = failed || r.failed();
        std::cout << std::left << std::setw(28) << r.name << ' ' << to_string(r.verdict)
                  << "  extrapolated=" << fmt(r.extrapolated) << " target=" << fmt(r.target) << '\n';
        index["checks"].push_back({{"check", r.name}, {"verdict", to_string(r.verdict)}});
    }
    index["verdict"] = failed ? "fail" : "pass";
    write_text_file(path_in(c, "verify_summary.json"), index.dump(2));
    std::cout << "suite " << c.suite << ": " << (failed ? "FAIL" : "PASS") << '\n';
    return failed ? kVerificationFailed : kOk;
}

// sweep --------------------------------------------------------------------

int run_sweep(const RunConfig& c) {
    const std::vector<double> taus =
        c.tau_range ? c.tau_range->values() : std::vector<double>{c.params.tau()};
    std::vector<int> ns = c.n_list;
    std::sort(ns.begin(), ns.end());
    const LyapunovOptions opts = lyapunov_options(c);

    std::vector<std::vector<double>> njbar(taus.size(), std::vector<double>(ns.size()));
    const int jobs = static_cast<int>(taus.size() * ns.size());
    parallel_for(jobs, [&](int k) {
        const size_t t = static_cast<size_t>(k) / ns.size();
        const size_t i = static_cast<size_t>(k) % ns.size();
        ChainParams p = with_n(c.params, ns[i]);
        p.tau_plus = TensionSchedule::constant(taus[t]);
        njbar[t][i] = ns[i] * profile_from_moments(solve_stationary(p, opts), p).jbar;
    });

    const double dT = c.params.T_minus - c.params.T_plus;
    std::vector<double> ext(taus.size());
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << "tau,J_ss";
    for (int n : ns) os << ",n_jbar_" << n;
    os << ",n_jbar_extrapolated,sign,uphill\n";
    for (size_t t = 0; t < taus.size(); ++t) {
        ChainParams p = c.params;
        p.tau_plus = TensionSchedule::constant(taus[t]);
        const double J = stationary_profiles(p).J_ss;
        ext[t] = ns.size() >= 2 ? richardson(ns[ns.size() - 2], njbar[t][ns.size() - 2], ns.back(),
                                             njbar[t].back())
                                : njbar[t].back();
        const int sign = (ext[t] > 0) - (ext[t] < 0);
        const bool uphill = dT != 0.0 && ext[t] * dT < 0.0;
        os << taus[t] << ',' << J;
        for (double v : njbar[t]) os << ',' << v;
        os << ',' << ext[t] << ',' << sign << ',' << (uphill ? 1 : 0) << '\n';
    }
    write_text_file(path_in(c, "sweep.csv"), os.str());

    std::cout << "sweep " << taus.size() << " tensions, n=" << join(ns);
    for (size_t t = 0; t + 1 < taus.size(); ++t) {
        if ((ext[t] > 0) != (ext[t + 1] > 0)) {
            const double cross = taus[t] + (taus[t + 1] - taus[t]) * ext[t] / (ext[t] - ext[t + 1]);
            std::cout << " reversal_tau=" << fmt(cross);
            if (dT > 0.0)
                std::cout << " predicted="
                          << fmt(std::sqrt((1.0 + c.params.gamma * c.params.gamma) * dT));
            break;
        }
    }
    std::cout << '\n';
    return kOk;
}

std::string manifest_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["subcommand"] = c.subcommand;
    j["version"] = version_string();
    j["git_describe"] = build_describe();
    j["seed"] = c.sim.seed;
    j["config"] = c.effective;
    return j.dump(2);
}

}  // namespace

std::vector<double> Range::values() const {
    if (!(step > 0.0) || hi < lo) throw ConfigError("range needs step > 0 and hi >= lo");
    std::vector<double> out;
    const long count = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(lo + static_cast<double>(k) * step);
    return out;
}

Range parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range must be lo:step:hi, got '" + text + "'");
    Range r{to_double("range", parts[0]), to_double("range", parts[1]), to_double("range", parts[2])};
    r.values();
    return r;
}

TensionSchedule parse_schedule(const std::string& text) {
    const std::string t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos) return TensionSchedule::constant(to_double("tau_plus", t));
    if (t.back() != ')') throw ConfigError("tau_plus: unbalanced parentheses in '" + text + "'");
    const std::string name = trim(t.substr(0, open));
    const auto args = split(t.substr(open + 1, t.size() - open - 2), ',');
    if (args.size() != 3) throw ConfigError("tau_plus: " + name + "(...) takes three arguments");
    const double a = to_double("tau_plus", args[0]);
    const double b = to_double("tau_plus", args[1]);
    const double c = to_double("tau_plus", args[2]);
    try {
        if (name == "ramp") return TensionSchedule::ramp(a, b, c);
        if (name == "sin") return TensionSchedule::sinusoid(a, b, c);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("tau_plus: ") + e.what());
    }
    throw ConfigError("tau_plus: unknown schedule '" + name + "' (use ramp or sin)");
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "n",      "gamma",   "gamma_tilde", "tau_plus",    "T_minus", "T_plus", "dt",
        "seed",   "replicas", "t_burnin",   "t_measure",   "n_batches", "sweep_order",
        "lyapunov", "pde_m", "pde_dt",      "times",       "pde_initial", "suite", "n_list",
        "out"};
    return keys;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::map<std::string, std::string> kv;
    const std::set<std::string> known(known_keys().begin(), known_keys().end());
    std::vector<std::string> unknown;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (!known.count(key)) unknown.push_back(key);
        kv[key] = trim(line.substr(eq + 1));
    }
    if (!unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }
    return kv;
}

RunConfig build_config(const std::string& subcommand, const std::map<std::string, std::string>& kv) {
    static const std::set<std::string> subs{"moments", "simulate", "pde", "verify", "sweep"};
    if (!subs.count(subcommand)) throw ConfigError("unknown subcommand '" + subcommand + "'");
    {
        const std::set<std::string> known(known_keys().begin(), known_keys().end());
        std::string unknown;
        for (const auto& [k, v] : kv)
            if (!known.count(k)) unknown += " " + k;
        if (!unknown.empty()) throw ConfigError("unknown config keys:" + unknown);
    }
    auto get = [&](const std::string& k) -> const std::string* {
        const auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };

    RunConfig c;
    c.subcommand = subcommand;
    ChainParams& p = c.params;
    if (auto v = get("n")) p.n = static_cast<int>(to_integer("n", *v));
    if (auto v = get("gamma")) p.gamma = to_double("gamma", *v);
    if (auto v = get("gamma_tilde")) p.gamma_tilde = to_double("gamma_tilde", *v);
    if (auto v = get("T_minus")) p.T_minus = to_double("T_minus", *v);
    if (auto v = get("T_plus")) p.T_plus = to_double("T_plus", *v);
    if (auto v = get("tau_plus")) {
        if (v->find(':') != std::string::npos) {
            if (subcommand != "sweep") throw ConfigError("tau range syntax is only valid for sweep");
            c.tau_range = parse_range(*v);
            p.tau_plus = TensionSchedule::constant(c.tau_range->lo);
        } else {
            p.tau_plus = parse_schedule(*v);
        }
    }
    try {
        p.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    if ((subcommand == "moments" || subcommand == "simulate") && !p.tau_plus.is_constant())
        throw ConfigError(subcommand + " needs a constant tension");

    c.sim = SimConfig::defaults(p);
    if (auto v = get("dt")) c.sim.dt = to_double("dt", *v);
    if (auto v = get("seed")) c.sim.seed = static_cast<std::uint64_t>(to_integer("seed", *v));
    if (auto v = get("replicas")) c.sim.n_replicas = static_cast<int>(to_integer("replicas", *v));
    if (auto v = get("t_burnin")) c.sim.t_burnin = to_double("t_burnin", *v);
    if (auto v = get("t_measure")) c.sim.t_measure = to_double("t_measure", *v);
    if (auto v = get("n_batches")) c.sim.n_batches = static_cast<int>(to_integer("n_batches", *v));
    if (auto v = get("sweep_order")) {
        if (*v == "even_odd")
            c.sim.sweep_order = SweepOrder::EvenOdd;
        else if (*v == "left_to_right")
            c.sim.sweep_order = SweepOrder::LeftToRight;
        else if (*v == "random_permutation")
            c.sim.sweep_order = SweepOrder::RandomPermutation;
        else
            throw ConfigError("sweep_order must be even_odd, left_to_right or random_permutation");
    }
    try {
        c.sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (auto v = get("lyapunov")) {
        if (*v == "direct")
            c.lyapunov = LyapunovMethod::Direct;
        else if (*v == "fixed_point")
            c.lyapunov = LyapunovMethod::FixedPoint;
        else
            throw ConfigError("lyapunov must be direct or fixed_point");
    }
    if (auto v = get("pde_m")) c.pde_m = static_cast<int>(to_integer("pde_m", *v));
    if (c.pde_m < 2) throw ConfigError("pde_m must be at least 2");
    if (auto v = get("pde_dt")) c.pde_dt = to_double("pde_dt", *v);
    if (!(c.pde_dt > 0.0)) throw ConfigError("pde_dt must be positive");
    if (auto v = get("times")) {
        c.times.clear();
        for (const auto& s : split(*v, ',')) c.times.push_back(to_double("times", s));
    }
    if (!std::is_sorted(c.times.begin(), c.times.end()) || c.times.empty() || c.times.front() < 0.0)
        throw ConfigError("times must be a non-empty, sorted list of nonnegative values");
    if (auto v = get("pde_initial")) c.pde_initial = *v;
    if (c.pde_initial != "zero" && c.pde_initial != "linear" && c.pde_initial != "stationary")
        throw ConfigError("pde_initial must be zero, linear or stationary");
    if (c.pde_initial == "stationary" && !p.tau_plus.is_constant())
        throw ConfigError("pde_initial = stationary needs a constant tension");
    if (auto v = get("suite")) c.suite = *v;
    if (c.suite != "quick" && c.suite != "full") throw ConfigError("suite must be quick or full");
    if (auto v = get("n_list")) {
        c.n_list.clear();
        for (const auto& s : split(*v, ',')) c.n_list.push_back(static_cast<int>(to_integer("n_list", s)));
    }
    if (c.n_list.empty() || *std::min_element(c.n_list.begin(), c.n_list.end()) < 2)
        throw ConfigError("n_list entries must be at least 2");
    if (auto v = get("out")) c.out = *v;
    if (c.out.empty()) throw ConfigError("out must not be empty");

    auto& e = c.effective;
    e["n"] = std::to_string(p.n);
    e["gamma"] = fmt(p.gamma);
    e["gamma_tilde"] = fmt(p.gamma_tilde);
    e["tau_plus"] = c.tau_range ? fmt(c.tau_range->lo) + ":" + fmt(c.tau_range->step) + ":" +
                                      fmt(c.tau_range->hi)
                                : p.tau_plus.describe();
    e["T_minus"] = fmt(p.T_minus);
    e["T_plus"] = fmt(p.T_plus);
    e["dt"] = fmt(c.sim.dt);
    e["seed"] = std::to_string(c.sim.seed);
    e["replicas"] = std::to_string(c.sim.n_replicas);
    e["t_burnin"] = fmt(c.sim.t_burnin);
    e["t_measure"] = fmt(c.sim.t_measure);
    e["n_batches"] = std::to_string(c.sim.n_batches);
    e["sweep_order"] = c.sim.sweep_order == SweepOrder::EvenOdd       ? "even_odd"
                       : c.sim.sweep_order == SweepOrder::LeftToRight ? "left_to_right"
                                                                      : "random_permutation";
    e["lyapunov"] = c.lyapunov == LyapunovMethod::Direct ? "direct" : "fixed_point";
    e["pde_m"] = std::to_string(c.pde_m);
    e["pde_dt"] = fmt(c.pde_dt);
    e["times"] = join(c.times);
    e["pde_initial"] = c.pde_initial;
    e["suite"] = c.suite;
    e["n_list"] = join(c.n_list);
    e["out"] = c.out;
    return c;
}

RunConfig parse_config(int argc, const char* const* argv) {
    CLI::App cli{"Harmonic chain with boundary tension: exact moments, simulation and PDE"};
    cli.require_subcommand(1);
    std::string config_path;
    cli.add_option("--config", config_path, "key = value configuration file");

    struct Flag {
        const char* name;
        const char* key;
        const char* help;
        std::string value;
    };
    std::vector<Flag> flags{
        {"--n", "n", "number of sites minus one", {}},
        {"--gamma", "gamma", "exchange noise intensity", {}},
        {"--gamma-tilde", "gamma_tilde", "thermostat coupling", {}},
        {"--tau", "tau_plus", "tension: value, ramp(a,b,T), sin(m,a,P) or lo:step:hi for sweep", {}},
        {"--t-minus", "T_minus", "left bath temperature", {}},
        {"--t-plus", "T_plus", "right bath temperature", {}},
        {"--dt", "dt", "simulation time step", {}},
        {"--seed", "seed", "simulation seed", {}},
        {"--replicas", "replicas", "independent simulation replicas", {}},
        {"--out", "out", "output directory", {}},
        {"--suite", "suite", "verification suite: quick or full", {}},
        {"--times", "times", "comma-separated output times (macroscopic)", {}},
        {"--pde-m", "pde_m", "PDE grid intervals", {}},
        {"--pde-dt", "pde_dt", "PDE time step", {}},
        {"--pde-initial", "pde_initial", "zero, linear or stationary", {}},
        {"--n-list", "n_list", "comma-separated chain sizes for sweeps", {}},
        {"--lyapunov", "lyapunov", "direct or fixed_point", {}},
    };
    std::vector<CLI::Option*> opts;
    for (auto& f : flags) opts.push_back(cli.add_option(f.name, f.value, f.help));

    cli.fallthrough();
    cli.add_subcommand("moments", "exact stationary moments and profiles");
    cli.add_subcommand("simulate", "stochastic simulation of the stationary state");
    cli.add_subcommand("pde", "macroscopic stretch and energy equations");
    cli.add_subcommand("verify", "convergence checks against the limit theorems");
    cli.add_subcommand("sweep", "current against tension, lo:step:hi");
    cli.set_help_flag("-h,--help");
    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << cli.help();
        throw;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    std::map<std::string, std::string> kv;
    if (!config_path.empty()) kv = read_config_file(config_path);
    for (size_t i = 0; i < flags.size(); ++i)
        if (opts[i]->count() > 0) kv[flags[i].key] = flags[i].value;
    return build_config(cli.get_subcommands().front()->get_name(), kv);
}

int run(const RunConfig& c) {
    std::filesystem::create_directories(c.out);
    std::ostringstream echo;
    for (const auto& [k, v] : c.effective) echo << k << " = " << v << '\n';
    write_text_file(path_in(c, "config.txt"), echo.str());
    write_text_file(path_in(c, "manifest.json"), manifest_json(c));

    if (c.subcommand == "moments") return run_moments(c);
    if (c.subcommand == "simulate") return run_simulate(c);
    if (c.subcommand == "pde") return run_pde(c);
    if (c.subcommand == "verify") return run_verify(c);
    return run_sweep(c);
}

int main_entry(int argc, const char* const* argv) {
    RunConfig config;
    try {
        config = parse_config(argc, argv);
    } catch (const CLI::CallForHelp&) {
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    try {
        return run(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kEngineError;
    }
}

}  // namespace ness::app
