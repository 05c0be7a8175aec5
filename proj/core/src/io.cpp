#include "ness/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#ifndef NESS_VERSION
#define NESS_VERSION "0.0.0"
#endif
#ifndef NESS_GIT_DESCRIBE
#define NESS_GIT_DESCRIBE "unknown"
#endif

namespace ness {

namespace {

using nlohmann::ordered_json;

/// Restores the stream state on scope exit.
class CsvGuard {
public:
    explicit CsvGuard(std::ostream& os) : os_(os), old_locale_(os.imbue(std::locale::classic())) {
        old_flags_ = os.flags();
        old_precision_ = os.precision(17);
        os.unsetf(std::ios::floatfield);
    }
    ~CsvGuard() {
        os_.imbue(old_locale_);
        os_.flags(old_flags_);
        os_.precision(old_precision_);
    }

private:
    std::ostream& os_;
    std::locale old_locale_;
    std::ios::fmtflags old_flags_;
    std::streamsize old_precision_;
};

void put(std::ostream& os, double v) {
    if (v == 0.0) v = 0.0;  // no "-0" in output
    if (std::isnan(v))
        os << "nan";
    else
        os << v;
}

void header(std::ostream& os, const std::vector<std::string>& cols) {
    for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
}

double at(const std::vector<double>& v, int x) {
    return x < static_cast<int>(v.size()) ? v[x] : std::nan("");
}

Estimate at(const std::vector<Estimate>& v, int x) {
    return x < static_cast<int>(v.size()) ? v[x] : Estimate{std::nan(""), std::nan("")};
}

/// JSON has no NaN; undefined numbers become null.
ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json nums(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

const char* sweep_name(SweepOrder o) {
    switch (o) {
        case SweepOrder::EvenOdd:
            return "even_odd";
        case SweepOrder::LeftToRight:
            return "left_to_right";
        case SweepOrder::RandomPermutation:
            return "random_permutation";
    }
    return "?";
}

ordered_json params_object(const ChainParams& p) {
    ordered_json j;
    j["n"] = p.n;
    j["gamma"] = p.gamma;
    j["gamma_tilde"] = p.gamma_tilde;
    j["tau_plus"] = p.tau_plus.describe();
    j["T_minus"] = p.T_minus;
    j["T_plus"] = p.T_plus;
    return j;
}

ordered_json build_object() {
    return {{"version", version_string()}, {"git_describe", build_describe()}};
}

}  // namespace

std::string version_string() { return NESS_VERSION; }
std::string build_describe() { return NESS_GIT_DESCRIBE; }

const std::vector<std::string>& profile_columns() {
    static const std::vector<std::string> cols{"x",  "u",      "mean_r", "mean_p", "pp",
                                               "rr", "energy", "phi",    "current"};
    return cols;
}

const std::vector<std::string>& estimate_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c{"x", "u"};
        for (const char* f : {"mean_r", "mean_p", "pp", "rr", "energy", "current"}) {
            c.emplace_back(f);
            c.emplace_back(std::string("est_se_") + f);
        }
        return c;
    }();
    return cols;
}

const std::vector<std::string>& macro_columns() {
    static const std::vector<std::string> cols{"t", "u", "r", "e", "e_mech", "e_th"};
    return cols;
}

void write_profile_csv(std::ostream& os, const ProfileTable& t) {
    CsvGuard guard(os);
    header(os, profile_columns());
    for (int x = 0; x <= t.n; ++x) {
        os << x << ',';
        put(os, static_cast<double>(x) / t.n);
        for (const auto* col : {&t.mean_r, &t.mean_p, &t.pp, &t.rr, &t.energy, &t.phi, &t.current}) {
            os << ',';
            put(os, at(*col, x));
        }
        os << '\n';
    }
}

void write_estimate_csv(std::ostream& os, const EstimateTable& t) {
    CsvGuard guard(os);
    header(os, estimate_columns());
    for (int x = 0; x <= t.n; ++x) {
        os << x << ',';
        put(os, static_cast<double>(x) / t.n);
        for (const auto* col : {&t.mean_r, &t.mean_p, &t.pp, &t.rr, &t.energy, &t.current}) {
            const Estimate e = at(*col, x);
            os << ',';
            put(os, e.value);
            os << ',';
            put(os, e.se);
        }
        os << '\n';
    }
}

void write_macro_csv(std::ostream& os, const std::vector<MacroFields>& slices) {
    CsvGuard guard(os);
    header(os, macro_columns());
    for (const MacroFields& f : slices) {
        const std::vector<double> em = f.e_mech();
        const std::vector<double> et = f.e_th();
        for (int i = 0; i <= f.m; ++i) {
            put(os, f.t);
            for (double v : {f.u(i), f.r[i], f.e[i], em[i], et[i]}) {
                os << ',';
                put(os, v);
            }
            os << '\n';
        }
    }
}

std::string params_json(const ChainParams& params) { return params_object(params).dump(2); }

std::string moments_summary_json(const MomentSolution& sol, const ProfileTable& table) {
    ordered_json j;
    j["jbar"] = num(table.jbar);
    j["jbar_right"] = num(table.jbar_right);
    j["pbar"] = num(table.pbar);
    j["residual"] = num(sol.residual);
    j["iterations"] = sol.iterations;
    j["n"] = sol.n;
    j["build"] = build_object();
    return j.dump(2);
}

std::string simulation_manifest_json(const ChainParams& params, const SimConfig& cfg,
                                     const EstimateTable& table) {
    ordered_json j;
    j["params"] = params_object(params);
    j["seed"] = cfg.seed;
    j["dt"] = cfg.dt;
    j["t_burnin"] = cfg.t_burnin;
    j["t_measure"] = cfg.t_measure;
    j["replicas"] = cfg.n_replicas;
    j["sweep_order"] = sweep_name(cfg.sweep_order);
    j["n_batches"] = cfg.n_batches;
    j["rng"] = "philox4x32-10";
    j["batches_used"] = table.batches;
    j["steps"] = table.steps;
    j["accepted"] = table.accepted;
    j["jbar_left"] = {{"value", num(table.jbar_left.value)}, {"se", num(table.jbar_left.se)}};
    if (!table.note.empty()) j["note"] = table.note;
    j["build"] = build_object();
    return j.dump(2);
}

std::string macro_summary_json(const ChainParams& params, const std::vector<MacroFields>& slices,
                               double dt) {
    ordered_json j;
    j["params"] = params_object(params);
    if (params.tau_plus.is_constant()) {
        const StationaryProfiles sp = stationary_profiles(params);
        j["J_ss"] = sp.J_ss;
        j["u_max"] = sp.u_max;
        j["e_th_max"] = sp.e_th_max;
        j["interior_maximum"] = sp.interior;
    }
    j["dt"] = dt;
    if (!slices.empty()) {
        j["m"] = slices.front().m;
        j["mesh_ratio"] = slices.front().mesh_ratio;
        j["mesh_ratio_warning"] = slices.front().mesh_ratio > kMeshRatioWarning;
    }
    std::vector<double> times;
    for (const auto& s : slices) times.push_back(s.t);
    j["times"] = nums(times);
    j["build"] = build_object();
    return j.dump(2);
}

std::string report_json(const VerificationReport& r) {
    ordered_json j;
    j["check"] = r.name;
    j["verdict"] = to_string(r.verdict);
    j["n_values"] = r.n_values;
    j["metrics"] = nums(r.metrics);
    j["extrapolated"] = num(r.extrapolated);
    j["target"] = num(r.target);
    j["tolerance"] = num(r.tolerance);
    j["engines"] = r.engines;
    j["details"] = r.details;
    ordered_json series = ordered_json::array();
    for (const auto& s : r.series)
        series.push_back({{"label", s.label},
                          {"values", nums(s.values)},
                          {"extrapolated", num(s.extrapolated)},
                          {"target", num(s.target)},
                          {"ok", s.ok}});
    j["series"] = series;
    j["build"] = build_object();
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (content.empty() || content.back() != '\n') out << '\n';
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace ness
