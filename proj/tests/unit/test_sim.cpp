#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "ness/moments.hpp"
#include "ness/sim.hpp"

using namespace ness;

namespace {

double kinetic(const StateVector& z) {
    double k = 0.0;
    for (int x = 0; x <= z.n(); ++x) k += z.p(x) * z.p(x);
    return k;
}

}  // namespace

TEST_CASE("exchange preserves kinetic energy and leaves stretches alone") {
    StateVector z(6);
    for (int i = 0; i < z.dim(); ++i) z.z()[i] = std::sin(1.0 + i);
    const Eigen::VectorXd before = z.z();
    ReplicaRng rng(1, 0);
    for (auto order : {SweepOrder::EvenOdd, SweepOrder::LeftToRight, SweepOrder::RandomPermutation}) {
        const double k0 = kinetic(z);
        step_exchange(z, 0.3, 1.5, rng, order);
        CHECK(kinetic(z) == doctest::Approx(k0).epsilon(1e-13));
        CHECK((z.z().head(6) - before.head(6)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("exchange on one pair is exact in law") {
    // p_0 is touched only by the first even pair; its law after time h is
    // the exact moment map of the pair: mean decays by exp(-gamma h / 2),
    // second moment relaxes to the pair average at rate 2 gamma.
    const double gamma = 1.2, h = 0.4, a = 1.0, b = -0.5;
    const int samples = 200000;
    double m1 = 0.0, m2 = 0.0;
    ReplicaRng rng(77, 3);
    for (int i = 0; i < samples; ++i) {
        StateVector z(2);
        z.p(0) = a;
        z.p(1) = b;
        step_exchange(z, h, gamma, rng, SweepOrder::EvenOdd);
        m1 += z.p(0);
        m2 += z.p(0) * z.p(0);
    }
    m1 /= samples;
    m2 /= samples;
    const double e1 = std::exp(-0.5 * gamma * h) * a;
    const double decay = std::exp(-2.0 * gamma * h);
    const double e2 = 0.5 * (a * a + b * b) + 0.5 * (a * a - b * b) * decay;
    CHECK(std::abs(m1 - e1) < 5.0 * std::sqrt(1.0 / samples));
    CHECK(std::abs(m2 - e2) < 5.0 * std::sqrt(2.0 / samples));
}

TEST_CASE("thermostat is the exact Ornstein-Uhlenbeck transition") {
    const ChainParams p = make_params(3, 1.0, 2.0, 0.0, 0.5, 3.0);
    const double h = 0.3;
    const int samples = 200000;
    double s0 = 0, s00 = 0, sn = 0, snn = 0;
    ReplicaRng rng(5, 0);
    for (int i = 0; i < samples; ++i) {
        StateVector z(3);
        z.p(0) = 1.0;
        z.p(3) = -2.0;
        z.r(2) = 0.25;
        step_thermostat(z, h, p, rng);
        CHECK(z.r(2) == 0.25);
        s0 += z.p(0);
        s00 += z.p(0) * z.p(0);
        sn += z.p(3);
        snn += z.p(3) * z.p(3);
    }
    const double decay = std::exp(-0.5 * p.gamma_tilde * h);
    const double var0 = p.T_minus * (1 - decay * decay), varn = p.T_plus * (1 - decay * decay);
    CHECK(std::abs(s0 / samples - decay) < 5 * std::sqrt(var0 / samples));
    CHECK(std::abs(sn / samples + 2 * decay) < 5 * std::sqrt(varn / samples));
    CHECK(s00 / samples - std::pow(s0 / samples, 2) == doctest::Approx(var0).epsilon(0.02));
    CHECK(snn / samples - std::pow(sn / samples, 2) == doctest::Approx(varn).epsilon(0.02));
}

TEST_CASE("velocity Verlet conserves energy and resolves the normal-mode period") {
    const int n = 8;
    // Undamped linear flow dz/ds = A z for tau = 0.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n + 1, 2 * n + 1);
    for (int x = 1; x <= n; ++x) {
        A(ir(x), ip(n, x)) = 1.0;
        A(ir(x), ip(n, x - 1)) = -1.0;
    }
    for (int x = 0; x <= n; ++x) {
        if (x < n) A(ip(n, x), ir(x + 1)) += 1.0;
        if (x >= 1) A(ip(n, x), ir(x)) -= 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    int k = 0;
    for (int i = 0; i < A.rows(); ++i)
        if (es.eigenvalues()[i].imag() > es.eigenvalues()[k].imag()) k = i;
    const double omega = es.eigenvalues()[k].imag();
    Eigen::VectorXd mode = es.eigenvectors().col(k).real();
    mode /= mode.norm();

    const double dt = 0.01;
    StateVector z(n, mode);
    const double E0 = total_energy(z);
    double drift = 0.0;
    std::vector<double> crossings;
    double prev = z.z().dot(mode);
    for (int step = 1; step <= 20000; ++step) {
        step_hamiltonian(z, dt, 0.0);
        drift = std::max(drift, std::abs(total_energy(z) - E0));
        const double y = z.z().dot(mode);
        if (prev < 0 && y >= 0) crossings.push_back((step - 1 + prev / (prev - y)) * dt);
        prev = y;
    }
    CHECK(drift < 1e-3 * E0);
    REQUIRE(crossings.size() >= 3);
    const double period = (crossings.back() - crossings.front()) / (crossings.size() - 1);
    CHECK(period == doctest::Approx(2 * std::numbers::pi / omega).epsilon(0.005));
}

TEST_CASE("simulation runs are reproducible and thread-count independent") {
    const ChainParams p = make_params(4, 1, 1, 0.5, 1.5, 1.0);
    SimConfig cfg = SimConfig::defaults(p);
    cfg.t_burnin = 20;
    cfg.t_measure = 200;
    cfg.n_replicas = 3;
    cfg.n_batches = 8;
    setenv("NESS_THREADS", "1", 1);
    const EstimateTable a = run_ness(p, cfg);
    setenv("NESS_THREADS", "3", 1);
    const EstimateTable b = run_ness(p, cfg);
    unsetenv("NESS_THREADS");
    for (int x = 0; x <= 4; ++x) {
        CHECK(a.pp[x].value == b.pp[x].value);
        CHECK(a.pp[x].se == b.pp[x].se);
    }
    cfg.seed += 1;
    const EstimateTable c = run_ness(p, cfg);
    CHECK(c.pp[0].value != a.pp[0].value);
    CHECK(a.batches == 24);
}

TEST_CASE("simulation reproduces the equilibrium and the exact NESS at small n") {
    SUBCASE("equilibrium") {
        const ChainParams p = make_params(4, 1, 1, 0, 1.5, 1.5);
        SimConfig cfg = SimConfig::defaults(p);
        cfg.t_measure = 4000;
        const EstimateTable t = run_ness(p, cfg);
        int within = 0, total = 0;
        for (int x = 0; x <= 4; ++x) {
            ++total;
            within += std::abs(t.pp[x].value - 1.5) <= 3.0 * t.pp[x].se;
        }
        CHECK(within >= total - 1);
        CHECK(std::abs(t.jbar_left.value) <= 4.0 * t.jbar_left.se);
    }
    SUBCASE("boundary-driven") {
        const ChainParams p = make_params(4, 1, 1, 1.0, 2.0, 1.0);
        SimConfig cfg = SimConfig::defaults(p);
        cfg.t_measure = 4000;
        const EstimateTable t = run_ness(p, cfg);
        const MomentSolution s = solve_stationary(p);
        const double jbar = 0.5 * (2.0 - s.pp(0, 0));
        // energy bookkeeping: the bulk currents and both boundary fluxes
        // estimate the same stationary current
        CHECK(std::abs(t.jbar_left.value - jbar) <= 4.0 * t.jbar_left.se);
        CHECK(std::abs(t.current[4].value - jbar) <= 4.0 * t.current[4].se);
        CHECK(std::abs(t.current[2].value - jbar) <= 4.0 * t.current[2].se);
        CHECK(std::abs(t.mean_p[2].value - s.mean_p(2)) <= 4.0 * t.mean_p[2].se);
    }
}

TEST_CASE("halving dt does not move estimates beyond noise") {
    const ChainParams p = make_params(3, 1, 1, 1.0, 2.0, 1.0);
    const MomentSolution s = solve_stationary(p);
    for (double dt : {0.1, 0.05}) {
        SimConfig cfg = SimConfig::defaults(p);
        cfg.dt = dt;
        cfg.t_measure = 6000;
        const EstimateTable t = run_ness(p, cfg);
        CAPTURE(dt);
        CHECK(std::abs(t.pp[0].value - s.pp(0, 0)) <= 4.0 * t.pp[0].se + 0.01);
        CHECK(std::abs(t.rr[3].value - s.rr(3, 3)) <= 4.0 * t.rr[3].se + 0.01);
    }
}

TEST_CASE("simulation config validation") {
    SimConfig cfg;
    cfg.t_measure = 10;
    CHECK_NOTHROW(cfg.validate());
    cfg.dt = 0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg.dt = 0.1;
    cfg.n_replicas = 0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}
