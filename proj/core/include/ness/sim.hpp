#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ness/chain.hpp"
#include "ness/params.hpp"
#include "ness/rng.hpp"

namespace ness {

class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, long step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

enum class SweepOrder { EvenOdd, LeftToRight, RandomPermutation };

/// Simulation controls. Durations are in microscopic time units.
struct SimConfig {
    double dt = 0.02;
    double t_burnin = 0.0;
    double t_measure = 0.0;
    int n_replicas = 1;
    std::uint64_t seed = 20190613;
    SweepOrder sweep_order = SweepOrder::EvenOdd;
    int n_batches = 32;
    int min_batches = 8;

    /// dt = 0.02 / max(1, gamma, gamma~), burn-in 20 n^2, measurement 400 n^2.
    static SimConfig defaults(const ChainParams& params);
    void validate() const;
};

/// Random source for one replica: an independent Philox stream plus a
/// standard normal transform.
class ReplicaRng {
public:
    ReplicaRng(std::uint64_t seed, std::uint64_t stream) : engine_(seed, stream) {}
    double normal() { return normal_(engine_); }
    Philox4x32& engine() { return engine_; }

private:
    Philox4x32 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// One velocity-Verlet step of the undamped linear flow with boundary
/// tension `tau` acting on p_n.
void step_hamiltonian(StateVector& z, double dt, double tau);

/// Exact-in-law exchange noise over time dt: each pair (x, x+1) in sweep
/// order is rotated by theta ~ N(0, gamma dt). `reverse` runs the sweep
/// backwards (used for the second half of a symmetric splitting).
void step_exchange(StateVector& z, double dt, double gamma, ReplicaRng& rng,
                   SweepOrder order = SweepOrder::EvenOdd, bool reverse = false);

/// Exact Ornstein-Uhlenbeck update of p_0 and p_n over time dt.
void step_thermostat(StateVector& z, double dt, const ChainParams& params, ReplicaRng& rng);

/// Thermostat(dt/2), exchange(dt/2), Hamiltonian(dt), exchange(dt/2),
/// thermostat(dt/2).
void strang_step(StateVector& z, double dt, double tau, const ChainParams& params,
                 ReplicaRng& rng, SweepOrder order);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

/// Simulation counterpart of ProfileTable with standard errors. Rows are
/// sites 0..n; entries that do not exist at a site are NaN.
struct EstimateTable {
    int n = 0;
    double t = 0.0;
    std::vector<Estimate> mean_r, mean_p, pp, rr, energy, current;
    /// <p_x p_{x+1}> for x < n.
    std::vector<Estimate> pp_next;
    /// <r_x p_x> for x >= 1.
    std::vector<Estimate> rp;
    /// (gamma~/2)(T_- - p_0^2) averaged.
    Estimate jbar_left;
    int batches = 0;
    long steps = 0;
    bool accepted = true;
    std::string note;
};

/// Product-Gaussian initial law over the shared index layout.
struct InitialEnsemble {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;

    static InitialEnsemble gibbs(int n, double temperature);
    StateVector sample(int n, ReplicaRng& rng) const;
};

/// Time-averaged NESS estimates with batch-means standard errors.
EstimateTable run_ness(const ChainParams& params, const SimConfig& cfg);
EstimateTable run_ness(const ChainParams& params, const SimConfig& cfg,
                       const InitialEnsemble& initial);

/// Ensemble averages over replicas at the given macroscopic times. The
/// microscopic duration of macroscopic time t is n^2 t; the tension schedule
/// is read in macroscopic time.
std::vector<EstimateTable> run_transient(const ChainParams& params, const SimConfig& cfg,
                                         const InitialEnsemble& initial,
                                         const std::vector<double>& output_times);

}  // namespace ness
