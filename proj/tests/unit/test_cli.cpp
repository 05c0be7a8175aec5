#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"

using namespace ness;
using namespace ness::app;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("ness_cli_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "ness");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return main_entry(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("minimal config file fills defaults") {
    const auto dir = scratch("minimal");
    const auto file = dir / "run.cfg";
    std::ofstream(file) << "# chain\nn = 16\ngamma=1\ngamma_tilde=1\ntau_plus=1\nT_minus=1\nT_plus=2\n";
    const RunConfig c = build_config("moments", read_config_file(file.string()));
    CHECK(c.params.n == 16);
    CHECK(c.params.T_plus == 2.0);
    CHECK(c.params.tau() == 1.0);
    CHECK(c.sim.dt == doctest::Approx(0.02));
    CHECK(c.effective.at("out") == "out");
}

TEST_CASE("config errors") {
    CHECK_THROWS_WITH_AS(build_config("moments", {{"gamma", "0"}}), "gamma must be positive",
                         ConfigError);
    CHECK_THROWS_WITH_AS(build_config("moments", {{"n", "8"}, {"colour", "red"}, {"speed", "1"}}),
                         "unknown config keys: colour speed", ConfigError);
    CHECK_THROWS_AS(build_config("moments", {{"n", "eight"}}), ConfigError);
    CHECK_THROWS_AS(build_config("moments", {{"tau_plus", "0:0.5:2"}}), ConfigError);
    CHECK_THROWS_AS(build_config("moments", {{"tau_plus", "ramp(0,1,0.5)"}}), ConfigError);
    CHECK_THROWS_AS(build_config("verify", {{"suite", "huge"}}), ConfigError);
    CHECK_THROWS_AS(build_config("launch", {}), ConfigError);

    const auto dir = scratch("unknown");
    std::ofstream(dir / "bad.cfg") << "n = 8\nfoo = 1\n";
    CHECK_THROWS_WITH_AS(read_config_file((dir / "bad.cfg").string()), "unknown config keys: foo",
                         ConfigError);
}

TEST_CASE("schedules and ranges") {
    CHECK(parse_schedule("1.5").is_constant());
    CHECK(parse_schedule("ramp(0, 2, 0.5)")(0.25) == doctest::Approx(1.0));
    CHECK(parse_schedule("sin(1,0.5,2)")(0.5) == doctest::Approx(1.5));
    CHECK_THROWS_AS(parse_schedule("step(1,2,3)"), ConfigError);
    CHECK_THROWS_AS(parse_schedule("ramp(1,2)"), ConfigError);
    const auto v = parse_range("0:0.25:3").values();
    CHECK(v.size() == 13);
    CHECK(v.back() == doctest::Approx(3.0));
    CHECK_THROWS_AS(parse_range("0:0:3"), ConfigError);
    CHECK_THROWS_AS(parse_range("0:1"), ConfigError);
}

TEST_CASE("flags override the file and the echo records the effective value") {
    const auto dir = scratch("precedence");
    std::ofstream(dir / "run.cfg") << "n = 16\ngamma = 1\nT_minus = 1\nT_plus = 2\ntau_plus = 1\n";
    const std::string out = (dir / "out").string();
    CHECK(invoke({"moments", "--config", (dir / "run.cfg").string(), "--n", "64", "--out", out}) == kOk);
    const std::string echo = slurp(dir / "out" / "config.txt");
    CHECK(echo.find("n = 64\n") != std::string::npos);
    const auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
    CHECK(manifest["config"]["n"] == "64");
    CHECK(manifest.contains("version"));
    CHECK(manifest.contains("git_describe"));
    CHECK(manifest.contains("seed"));
}

TEST_CASE("moments on an equilibrium chain") {
    const auto dir = scratch("moments");
    CHECK(invoke({"moments", "--n", "16", "--t-minus", "1.5", "--t-plus", "1.5", "--out",
                  dir.string()}) == kOk);
    std::ifstream in(dir / "profile.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,u,mean_r,mean_p,pp,rr,energy,phi,current");
    int rows = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        REQUIRE(cells.size() == 9);
        CHECK(std::stod(cells[4]) == doctest::Approx(1.5));
        if (rows > 0) CHECK(std::stod(cells[5]) == doctest::Approx(1.5));
        ++rows;
    }
    CHECK(rows == 17);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(std::abs(summary["jbar"].get<double>()) < 1e-12);
}

TEST_CASE("sweep writes the uphill table") {
    const auto dir = scratch("sweep");
    CHECK(invoke({"sweep", "--tau", "0:0.5:2", "--t-minus", "2", "--t-plus", "1", "--n-list",
                  "16,32", "--out", dir.string()}) == kOk);
    std::ifstream in(dir / "sweep.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "tau,J_ss,n_jbar_16,n_jbar_32,n_jbar_extrapolated,sign,uphill");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 5);
    CHECK(rows.front().substr(rows.front().size() - 4) == ",1,0");
    CHECK(rows.back().substr(rows.back().size() - 5) == ",-1,1");
}

TEST_CASE("pde subcommand") {
    const auto dir = scratch("pde");
    CHECK(invoke({"pde", "--tau", "2", "--pde-m", "32", "--pde-dt", "0.01", "--times", "0.5,1",
                  "--out", dir.string()}) == kOk);
    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(j["J_ss"].get<double>() == doctest::Approx(-2.0));
    std::ifstream in(dir / "fields.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,u,r,e,e_mech,e_th");
}

TEST_CASE("exit codes") {
    const auto dir = scratch("exit");
    CHECK(invoke({"moments", "--gamma", "0", "--out", dir.string()}) == kConfigError);
    CHECK(invoke({"moments", "--bogus", "1"}) == kConfigError);
    CHECK(invoke({}) == kConfigError);
    CHECK(invoke({"moments", "--lyapunov", "fixed_point", "--n", "32", "--tau", "1", "--t-minus",
                  "2", "--out", dir.string()}) == kEngineError);
}
