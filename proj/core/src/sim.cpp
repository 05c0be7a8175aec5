#include "ness/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ness/parallel.hpp"
#include "ness/stats.hpp"

namespace ness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Flat sample layout: mean_r[1..n], mean_p[0..n], pp[0..n], rr[1..n],
// energy[0..n], current[0..n], pp_next[0..n-1], rp[1..n], jbar_left.
struct Layout {
    int n;
    int mean_r() const { return 0; }
    int mean_p() const { return n; }
    int pp() const { return 2 * n + 1; }
    int rr() const { return 3 * n + 2; }
    int energy() const { return 4 * n + 2; }
    int current() const { return 5 * n + 3; }
    int pp_next() const { return 6 * n + 4; }
    int rp() const { return 7 * n + 4; }
    int jleft() const { return 8 * n + 4; }
    int width() const { return 8 * n + 5; }
};

void fill_sample(const StateVector& z, const ChainParams& params, double tau, const Layout& L,
                 std::vector<double>& s) {
    const int n = z.n();
    const double g = params.gamma;
    for (int x = 1; x <= n; ++x) {
        const double r = z.r(x);
        s[L.mean_r() + x - 1] = r;
        s[L.rr() + x - 1] = r * r;
        s[L.rp() + x - 1] = r * z.p(x);
    }
    for (int x = 0; x <= n; ++x) {
        const double p = z.p(x);
        s[L.mean_p() + x] = p;
        s[L.pp() + x] = p * p;
        s[L.energy() + x] = site_energy(z, x);
    }
    for (int x = 0; x < n; ++x) {
        s[L.current() + x] = -z.p(x) * z.r(x + 1) + 0.5 * g * (z.p(x) * z.p(x) - z.p(x + 1) * z.p(x + 1));
        s[L.pp_next() + x] = z.p(x) * z.p(x + 1);
    }
    const double pn = z.p(n);
    s[L.current() + n] = -0.5 * params.gamma_tilde * (params.T_plus - pn * pn) - tau * pn;
    const double p0 = z.p(0);
    s[L.jleft()] = 0.5 * params.gamma_tilde * (params.T_minus - p0 * p0);
}

template <class Getter>
EstimateTable make_table(int n, const Layout& L, Getter&& get) {
    EstimateTable t;
    t.n = n;
    const auto rows = static_cast<size_t>(n + 1);
    const Estimate nan{kNaN, kNaN};
    t.mean_r.assign(rows, nan);
    t.mean_p.assign(rows, nan);
    t.pp.assign(rows, nan);
    t.rr.assign(rows, nan);
    t.energy.assign(rows, nan);
    t.current.assign(rows, nan);
    t.pp_next.assign(rows, nan);
    t.rp.assign(rows, nan);
    for (int x = 1; x <= n; ++x) {
        t.mean_r[x] = get(L.mean_r() + x - 1);
        t.rr[x] = get(L.rr() + x - 1);
        t.rp[x] = get(L.rp() + x - 1);
    }
    for (int x = 0; x <= n; ++x) {
        t.mean_p[x] = get(L.mean_p() + x);
        t.pp[x] = get(L.pp() + x);
        t.energy[x] = get(L.energy() + x);
        t.current[x] = get(L.current() + x);
    }
    for (int x = 0; x < n; ++x) t.pp_next[x] = get(L.pp_next() + x);
    t.jbar_left = get(L.jleft());
    return t;
}

long steps_for(double duration, double dt) {
    return static_cast<long>(std::llround(duration / dt));
}

}  // namespace

SimConfig SimConfig::defaults(const ChainParams& params) {
    SimConfig c;
    c.dt = 0.02 / std::max({1.0, params.gamma, params.gamma_tilde});
    const double n2 = static_cast<double>(params.n) * params.n;
    c.t_burnin = 20.0 * n2;
    c.t_measure = 400.0 * n2;
    return c;
}

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    if (!(t_burnin >= 0.0)) throw ParameterError("t_burnin must be nonnegative");
    if (!(t_measure > 0.0)) throw ParameterError("t_measure must be positive");
    if (n_replicas < 1) throw ParameterError("n_replicas must be at least 1");
    if (n_batches < 1) throw ParameterError("n_batches must be at least 1");
}

void step_hamiltonian(StateVector& z, double dt, double tau) {
    const int n = z.n();
    double* r = z.z().data();       // r_x at r[x-1]
    double* p = z.z().data() + n;   // p_x at p[x]
    const double h = 0.5 * dt;
    auto kick = [&] {
        p[0] += h * r[0];
        for (int x = 1; x < n; ++x) p[x] += h * (r[x] - r[x - 1]);
        p[n] += h * (tau - r[n - 1]);
    };
    kick();
    for (int x = 1; x <= n; ++x) r[x - 1] += dt * (p[x] - p[x - 1]);
    kick();
}

void step_exchange(StateVector& z, double dt, double gamma, ReplicaRng& rng, SweepOrder order,
                   bool reverse) {
    const int n = z.n();
    double* p = z.z().data() + n;
    const double sd = std::sqrt(gamma * dt);
    auto rotate = [&](int x) {
        const double theta = sd * rng.normal();
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const double a = p[x];
        const double b = p[x + 1];
        p[x] = a * c - b * s;
        p[x + 1] = a * s + b * c;
    };
    switch (order) {
        case SweepOrder::EvenOdd: {
            const int first = reverse ? 1 : 0;
            for (int parity : {first, 1 - first})
                for (int x = parity; x < n; x += 2) rotate(x);
            break;
        }
        case SweepOrder::LeftToRight:
            if (reverse)
                for (int x = n - 1; x >= 0; --x) rotate(x);
            else
                for (int x = 0; x < n; ++x) rotate(x);
            break;
        case SweepOrder::RandomPermutation: {
            std::vector<int> perm(static_cast<size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng.engine());
            for (int x : perm) rotate(x);
            break;
        }
    }
}

void step_thermostat(StateVector& z, double dt, const ChainParams& params, ReplicaRng& rng) {
    const double decay = std::exp(-0.5 * params.gamma_tilde * dt);
    const double spread = -std::expm1(-params.gamma_tilde * dt);
    const int n = z.n();
    z.p(0) = decay * z.p(0) + std::sqrt(params.T_minus * spread) * rng.normal();
    z.p(n) = decay * z.p(n) + std::sqrt(params.T_plus * spread) * rng.normal();
}

void strang_step(StateVector& z, double dt, double tau, const ChainParams& params,
                 ReplicaRng& rng, SweepOrder order) {
    const double h = 0.5 * dt;
    step_thermostat(z, h, params, rng);
    step_exchange(z, h, params.gamma, rng, order, false);
    step_hamiltonian(z, dt, tau);
    step_exchange(z, h, params.gamma, rng, order, true);
    step_thermostat(z, h, params, rng);
}

InitialEnsemble InitialEnsemble::gibbs(int n, double temperature) {
    const int N = 2 * n + 1;
    return {Eigen::VectorXd::Zero(N), Eigen::VectorXd::Constant(N, temperature)};
}

StateVector InitialEnsemble::sample(int n, ReplicaRng& rng) const {
    StateVector z(n);
    for (int i = 0; i < z.dim(); ++i) z.z()[i] = mean[i] + std::sqrt(variance[i]) * rng.normal();
    return z;
}

EstimateTable run_ness(const ChainParams& params, const SimConfig& cfg) {
    return run_ness(params, cfg, InitialEnsemble::gibbs(params.n, 0.5 * (params.T_minus + params.T_plus)));
}

EstimateTable run_ness(const ChainParams& params, const SimConfig& cfg,
                       const InitialEnsemble& initial) {
    params.validate();
    cfg.validate();
    const double tau = params.tau();
    const int n = params.n;
    const Layout L{n};
    const long burn = steps_for(cfg.t_burnin, cfg.dt);
    const long measure = steps_for(cfg.t_measure, cfg.dt);
    const long batch_len = std::max(1L, measure / cfg.n_batches);

    std::vector<BatchMeans> acc(static_cast<size_t>(cfg.n_replicas),
                                BatchMeans(static_cast<size_t>(L.width()), static_cast<size_t>(batch_len)));
    parallel_for(cfg.n_replicas, [&](int rep) {
        ReplicaRng rng(cfg.seed, static_cast<std::uint64_t>(rep));
        StateVector z = initial.sample(n, rng);
        std::vector<double> sample(static_cast<size_t>(L.width()));
        const long total = burn + measure;
        for (long step = 0; step < total; ++step) {
            strang_step(z, cfg.dt, tau, params, rng, cfg.sweep_order);
            if ((step & 1023) == 0 && !z.finite())
                throw SimulationError("non-finite state in replica " + std::to_string(rep), step);
            if (step >= burn) {
                fill_sample(z, params, tau, L, sample);
                acc[rep].add(sample);
            }
        }
        if (!z.finite())
            throw SimulationError("non-finite state in replica " + std::to_string(rep), total);
    });

    BatchMeans merged = acc.front();
    for (size_t r = 1; r < acc.size(); ++r) merged.merge(acc[r]);

    EstimateTable t = make_table(n, L, [&](int i) {
        return Estimate{merged.mean(static_cast<size_t>(i)), merged.standard_error(static_cast<size_t>(i))};
    });
    t.batches = static_cast<int>(merged.batch_count());
    t.steps = (burn + measure) * cfg.n_replicas;
    if (t.batches < cfg.min_batches) {
        t.accepted = false;
        t.note = "only " + std::to_string(t.batches) + " batches (minimum " +
                 std::to_string(cfg.min_batches) + ")";
    }
    return t;
}

std::vector<EstimateTable> run_transient(const ChainParams& params, const SimConfig& cfg,
                                         const InitialEnsemble& initial,
                                         const std::vector<double>& output_times) {
    params.validate();
    cfg.validate();
    if (!std::is_sorted(output_times.begin(), output_times.end()) ||
        (!output_times.empty() && output_times.front() < 0.0))
        throw std::invalid_argument("output times must be sorted and nonnegative");
    const int n = params.n;
    const double n2 = static_cast<double>(n) * n;
    const Layout L{n};
    const size_t W = static_cast<size_t>(L.width());
    const size_t K = output_times.size();

    // samples[rep][k*W + i]
    std::vector<std::vector<double>> samples(static_cast<size_t>(cfg.n_replicas),
                                             std::vector<double>(K * W));
    parallel_for(cfg.n_replicas, [&](int rep) {
        ReplicaRng rng(cfg.seed, static_cast<std::uint64_t>(rep));
        StateVector z = initial.sample(n, rng);
        std::vector<double> s(W);
        long step = 0;
        double micro = 0.0;
        for (size_t k = 0; k < K; ++k) {
            const double target = output_times[k] * n2;
            const long steps = steps_for(target - micro, cfg.dt);
            for (long i = 0; i < steps; ++i, ++step) {
                const double tau = params.tau_plus((micro + 0.5 * cfg.dt) / n2);
                strang_step(z, cfg.dt, tau, params, rng, cfg.sweep_order);
                micro += cfg.dt;
            }
            if (!z.finite())
                throw SimulationError("non-finite state in replica " + std::to_string(rep), step);
            fill_sample(z, params, params.tau_plus(output_times[k]), L, s);
            std::copy(s.begin(), s.end(), samples[rep].begin() + static_cast<long>(k * W));
        }
    });

    std::vector<EstimateTable> out;
    out.reserve(K);
    std::vector<double> column(static_cast<size_t>(cfg.n_replicas));
    for (size_t k = 0; k < K; ++k) {
        EstimateTable t = make_table(n, L, [&](int i) {
            for (int r = 0; r < cfg.n_replicas; ++r) column[r] = samples[r][k * W + static_cast<size_t>(i)];
            const SampleStats st = sample_stats(column);
            return Estimate{st.mean, st.se};
        });
        t.t = output_times[k];
        t.batches = cfg.n_replicas;
        t.steps = steps_for(output_times[k] * n2, cfg.dt);
        if (t.batches < cfg.min_batches) {
            t.accepted = false;
            t.note = "only " + std::to_string(t.batches) + " replicas (minimum " +
                     std::to_string(cfg.min_batches) + ")";
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace ness
