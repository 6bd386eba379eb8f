#pragma once

#include <cstdint>
#include <vector>

#include "nklab/enumeration.hpp"
#include "nklab/landscape.hpp"

namespace nklab {

struct ChainConfig {
    double beta = 1.0;           // single-chain runs
    std::vector<double> ladder;  // tempering runs; strictly increasing
    std::int64_t steps = 100000;
    std::int64_t burn_in = -1;  // negative means steps/4
    std::uint64_t rng_seed = 1;
    std::int64_t swap_interval = 10;

    std::int64_t effective_burn_in() const { return burn_in < 0 ? steps / 4 : burn_in; }
    void validate(bool tempering) const;
};

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
};

struct ChainSummary {
    Genome final_state;
    double final_fitness = 0.0;    // total H of the final state
    double mean_energy = 0.0;      // time average of H/n past burn-in
    double energy_variance = 0.0;  // sample variance of H/n past burn-in
    double tau_int = 0.5;          // integrated autocorrelation, batch means
    double acceptance_rate = 0.0;
    double best_fitness = 0.0;  // max H/n seen anywhere in the run
    Genome best_state;
    std::int64_t n_samples = 0;
    std::vector<double> energy_trace;  // post-burn-in H/n when recorded

    /// Standard error of mean_energy with the autocorrelation factored in.
    double se_mean() const;
};

/// Single-spin-flip Metropolis on the Gibbs measure with weight e^{beta H}.
/// The chain RNG stream is a pure function of (rng_seed, chain_id), disjoint
/// from the disorder stream by construction.
ChainSummary metropolis_chain(const Landscape& land, const ChainConfig& cfg,
                              std::uint64_t chain_id = 0, bool record_trace = true);

struct TemperingSummary {
    std::vector<double> betas;
    std::vector<ChainSummary> per_beta;   // the sample stream at each rung
    std::vector<double> swap_acceptance;  // per adjacent rung pair
    double best_value = 0.0;              // best polished H/n over the run
    Genome best_state;                    // the polished genome attaining it
    double best_raw = 0.0;                // best H/n actually visited
};

/// Replica exchange over cfg.ladder. Swap between adjacent rungs accepts
/// with min(1, e^{(b_i - b_j)(H_j - H_i)}). Every new record of the visited
/// maximum is greedily polished to its local maximum, so best_value is
/// nondecreasing in steps for a fixed stream.
TemperingSummary parallel_tempering(const Landscape& land, const ChainConfig& cfg,
                                    std::uint64_t chain_id_base = 0);

struct TiConfig {
    double grid_step = 0.05;  // must be <= 0.1
    std::int64_t steps_per_point = 20000;
    std::uint64_t chain_seed = 1;
};

/// Free energy by thermodynamic integration of the sampled mean energy from
/// 0 to beta, trapezoid rule, disorder-averaged over seeds
/// spec.seed, spec.seed + 1, ...  Requires n_seeds >= 8.
EstimateWithError estimate_free_energy(const LandscapeSpec& spec, double beta, int n_seeds,
                                       const TiConfig& ti = {});

struct MaxEffort {
    int chains = 4;  // independent tempering runs
    std::int64_t steps = 20000;
    std::uint64_t rng_seed = 1;
    std::vector<double> ladder = {0.5, 0.8, 1.2, 1.8, 2.7, 4.0};
};

struct MaxSearchResult {
    double value = 0.0;  // best polished H/n; a valid lower bound on M
    Genome state;
};

/// Best fitness density found by tempering plus greedy polishing. Monotone
/// in both effort dimensions: more chains add streams, more steps extend
/// them, and neither changes what an existing prefix visited.
MaxSearchResult estimate_max(const Landscape& land, const MaxEffort& effort);

struct OverlapStats {
    std::int64_t n_pairs = 0;
    double p_q0 = 0.0, p_q0_se = 0.0;
    double p_q1 = 0.0, p_q1_se = 0.0;
    double mean_q = 0.0, mean_q_se = 0.0;
    double mean_r = 0.0, mean_r_se = 0.0;
    std::vector<double> q_hist;  // index n*Q
    std::vector<double> r_hist;  // index (n + n*R)/2
};

/// Empirical overlap law across independent equilibrated chains: thinned
/// post-burn-in samples paired across chains, errors by delete-one-chain
/// jackknife.
OverlapStats replica_overlap_stats(const Landscape& land, double beta, int n_chains,
                                   const ChainConfig& cfg, int samples_per_chain = 64);

struct ChaosEffort {
    int n_replicas = 200;
    MaxEffort search;  // used only above the exact-scan range
};

/// Mean overlap Q between the fittest genomes of two landscapes correlated
/// at level s, averaged over disorder replicas seeded spec.seed + r. Exact
/// ground states when n <= 20, search otherwise.
EstimateWithError chaos_probe(const LandscapeSpec& spec, double s, const ChaosEffort& effort);

struct ConcentrationRow {
    double t = 0.0;
    double f_tail_freq = 0.0;
    double f_envelope = 0.0;
    double m_tail_freq = 0.0;
    double m_envelope = 0.0;
    bool below = false;
};

struct ConcentrationReport {
    int n_seeds = 0;
    double beta = 0.0;
    double f_mean = 0.0, f_std = 0.0;
    double m_mean = 0.0, m_std = 0.0;
    std::vector<ConcentrationRow> rows;
    bool all_below = false;
};

/// Tail frequencies of |F - mean F| and |M - mean M| over exact per-seed
/// values, against the Gaussian-concentration envelopes. n_seeds >= 500.
ConcentrationReport concentration_probe(const LandscapeSpec& spec, double beta, int n_seeds,
                                        const std::vector<double>& t_grid = {0.1, 0.2, 0.3,
                                                                             0.5, 0.8});

struct MonotonicityRow {
    int k = 0;
    double mean_m = 0.0;
    double std_error = 0.0;
};

struct MonotonicityReport {
    int n = 0;
    int n_seeds = 0;
    std::vector<MonotonicityRow> rows;
    bool nondecreasing = false;  // consecutive means within 3 combined SE
};

/// Disorder means of the exact maximum fitness density for each k in k_list.
MonotonicityReport monotonicity_probe(int n, const std::vector<int>& k_list, int n_seeds,
                                      std::uint64_t base_seed);

}  // namespace nklab
