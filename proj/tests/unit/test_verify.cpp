#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ness/verify.hpp"

using namespace ness;

TEST_CASE("helpers") {
    CHECK(decreasing_magnitude({3, -2, 1, 0.5}));
    CHECK_FALSE(decreasing_magnitude({1, 2}));
    CHECK(decreasing_magnitude({1, 1.05}, 0.1));
    CHECK(integrate_unit([](double u) { return std::sin(std::numbers::pi * u); }) ==
          doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-13));
    CHECK(integrate_unit([](double u) { return u * u * u * u; }) == doctest::Approx(0.2));
}

TEST_CASE("elongation profile") {
    SUBCASE("zero tension") {
        const auto r = check_elongation_profile(make_params(8, 1, 1, 0, 1, 2), {8, 16});
        CHECK(r.metrics[0] == 0.0);
        CHECK(r.verdict == Verdict::Pass);
    }
    SUBCASE("sup deviation halves with n") {
        const auto r = check_elongation_profile(make_params(8, 1, 1, 1, 1, 1), {50, 100, 200});
        CHECK(r.metrics[1] == doctest::Approx(1.0 / 101.0));
        CHECK(r.metrics[0] / r.metrics[1] == doctest::Approx(2.0).epsilon(0.02));
        CHECK(r.metrics[1] / r.metrics[2] == doctest::Approx(2.0).epsilon(0.02));
        CHECK(r.verdict == Verdict::Pass);
    }
}

TEST_CASE("current limit") {
    SUBCASE("equilibrium") {
        const auto r = check_current_limit(make_params(8, 1, 1, 0, 1.3, 1.3), {8, 16});
        for (double v : r.metrics) CHECK(std::abs(v) < 1e-10);
        CHECK(r.verdict == Verdict::Pass);
    }
    SUBCASE("gamma = 2") {
        const auto r = check_current_limit(make_params(8, 2, 1, 1, 1, 1.5), {64, 128});
        CHECK(r.target == doctest::Approx(-0.875));
        CHECK(r.verdict == Verdict::Pass);
    }
}

TEST_CASE("energy profile") {
    const std::vector<NamedFunction> one{{"1", [](double) { return 1.0; }}};
    SUBCASE("equilibrium is exact for every n") {
        const auto r = check_energy_profile(make_params(8, 1, 1, 0, 1.7, 1.7), {8, 16}, one);
        CHECK(r.series[0].values[0] == doctest::Approx(1.7));
        CHECK(r.series[0].values[1] == doctest::Approx(1.7));
        CHECK(r.verdict == Verdict::Pass);
    }
    SUBCASE("tension-driven bulge integrates to 2") {
        const auto r = check_energy_profile(make_params(8, 1, 1, 2, 1, 1), {32, 64, 128}, one);
        CHECK(r.series[0].target == doctest::Approx(2.0));
        CHECK(r.verdict == Verdict::Pass);
    }
    SUBCASE("gamma != 1 is informational") {
        const auto r = check_energy_profile(make_params(8, 2, 1, 1, 1, 2), {16, 32}, one);
        CHECK(r.verdict == Verdict::Informational);
        CHECK_FALSE(r.failed());
    }
}

TEST_CASE("interior maximum") {
    SUBCASE("endpoint maximum is reported, not judged") {
        const auto r = check_interior_maximum(make_params(32, 1, 1, 0.5, 1, 3));
        CHECK(r.verdict == Verdict::Informational);
        CHECK(r.target == 1.0);
    }
    SUBCASE("symmetric bulge") {
        const auto r = check_interior_maximum(make_params(64, 1, 1, 2, 1, 1));
        CHECK(r.verdict == Verdict::Pass);
        CHECK(std::abs(r.extrapolated - 0.5) <= 2.0 / 64);
    }
}

TEST_CASE("informational probes never fail") {
    const auto e = probe_equipartition(make_params(8, 2, 1, 1, 1, 2), {16, 32},
                                       [](double u) { return std::sin(std::numbers::pi * u); });
    CHECK(e.verdict == Verdict::Informational);
    CHECK(e.metrics.size() == 2);
    const auto h = scan_boundary_heat(make_params(16, 1, 1, 0, 2, 1), {0, 1, 2});
    CHECK(h.verdict == Verdict::Informational);
    REQUIRE(h.series.size() == 4);
    // heat in on the left minus heat out on the right equals minus the work
    for (size_t i = 0; i < 3; ++i)
        CHECK(h.series[1].values[i] - h.series[2].values[i] ==
              doctest::Approx(-h.series[3].values[i]).scale(1.0));
}

TEST_CASE("uphill check requires a hotter left bath") {
    CHECK_THROWS_AS(check_uphill(make_params(8, 1, 1, 0, 1, 2), {0, 1}, {8, 16}), ParameterError);
}
