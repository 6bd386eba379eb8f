#include "nklab/sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "nklab/theory.hpp"

namespace nklab {

namespace {

// Welford moments plus 64-way batch means; the batch variance carries the
// autocorrelation correction without storing the trace.
struct RunningStats {
    std::int64_t n = 0;
    double mean = 0.0, m2 = 0.0;
    std::int64_t batch_size = 1, in_batch = 0, nb = 0;
    double batch_sum = 0.0, bmean = 0.0, bm2 = 0.0;

    void init(std::int64_t total) { batch_size = std::max<std::int64_t>(1, total / 64); }

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
        batch_sum += x;
        if (++in_batch == batch_size) {
            const double bm = batch_sum / batch_size;
            ++nb;
            const double bd = bm - bmean;
            bmean += bd / nb;
            bm2 += bd * (bm - bmean);
            in_batch = 0;
            batch_sum = 0.0;
        }
    }

    double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }

    double tau() const {
        if (nb < 2) return 0.5;
        const double vx = variance();
        if (vx <= 0.0) return 0.5;
        const double vb = bm2 / (nb - 1);
        return std::max(0.5, batch_size * vb / (2.0 * vx));
    }
};

bool metro_step(const Landscape& land, Genome& g, double& h, double beta, CounterRng& rng) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(g.n)));
    const double d = land.delta_fitness(g, j);
    bool accept = d >= 0.0;
    if (!accept) accept = rng.next_unit() < std::exp(beta * d);
    if (accept) {
        g.flip(j);
        h += d;
    }
    return accept;
}

std::pair<Genome, double> polish_local(const Landscape& land, Genome g, double h) {
    for (;;) {
        int bj = -1;
        double bd = 0.0;
        for (int j = 0; j < g.n; ++j) {
            const double d = land.delta_fitness(g, j);
            if (d > bd) {
                bd = d;
                bj = j;
            }
        }
        if (bj < 0) break;
        g.flip(bj);
        h += bd;
    }
    // Recompute from scratch: the value must be a function of the state
    // alone, not of the drift accumulated along the route that found it.
    return {g, land.fitness(g)};
}

CacheMode auto_cache(int n, int k) {
    const double bytes = static_cast<double>(n) * std::exp2(k + 1) * 8.0;
    return (k + 1 <= 20 && bytes <= 8.0 * 1024 * 1024) ? CacheMode::table : CacheMode::hashed;
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace

void ChainConfig::validate(bool tempering) const {
    if (steps <= 0) throw std::invalid_argument("steps must be positive");
    const std::int64_t burn = effective_burn_in();
    if (burn < 0 || burn >= steps) throw std::invalid_argument("burn_in must be in [0, steps)");
    if (tempering) {
        if (ladder.size() < 2) throw std::invalid_argument("ladder needs at least two rungs");
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            if (!(ladder[i] > 0.0)) throw std::invalid_argument("ladder betas must be positive");
            if (i > 0 && !(ladder[i] > ladder[i - 1]))
                throw std::invalid_argument("ladder must be strictly increasing");
        }
        if (swap_interval < 1) throw std::invalid_argument("swap_interval must be positive");
    } else {
        if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    }
}

double ChainSummary::se_mean() const {
    if (n_samples < 1) return 0.0;
    return std::sqrt(std::max(0.0, 2.0 * tau_int * energy_variance / n_samples));
}

ChainSummary metropolis_chain(const Landscape& land, const ChainConfig& cfg,
                              std::uint64_t chain_id, bool record_trace) {
    cfg.validate(false);
    const int n = land.n();
    CounterRng rng(cfg.rng_seed, chain_id);
    Genome g = land.random_genome(rng);
    double h = land.fitness(g);
    const std::int64_t burn = cfg.effective_burn_in();

    ChainSummary out;
    double best_h = h;
    Genome best_g = g;
    RunningStats st;
    st.init(cfg.steps - burn);
    std::int64_t accepted = 0;
    if (record_trace) out.energy_trace.reserve(static_cast<std::size_t>(cfg.steps - burn));

    for (std::int64_t t = 0; t < cfg.steps; ++t) {
        accepted += metro_step(land, g, h, cfg.beta, rng) ? 1 : 0;
        if (h > best_h) {
            best_h = h;
            best_g = g;
        }
        if (t >= burn) {
            const double e = h / n;
            st.add(e);
            if (record_trace) out.energy_trace.push_back(e);
        }
        // periodic from-scratch refresh caps incremental drift
        if ((t & ((std::int64_t{1} << 20) - 1)) == (std::int64_t{1} << 20) - 1)
            h = land.fitness(g);
    }

    out.final_state = g;
    out.final_fitness = h;
    out.mean_energy = st.mean;
    out.energy_variance = st.variance();
    out.tau_int = st.tau();
    out.acceptance_rate = static_cast<double>(accepted) / cfg.steps;
    out.best_fitness = land.fitness(best_g) / n;
    out.best_state = best_g;
    out.n_samples = cfg.steps - burn;
    return out;
}

TemperingSummary parallel_tempering(const Landscape& land, const ChainConfig& cfg,
                                    std::uint64_t chain_id_base) {
    cfg.validate(true);
    const int n = land.n();
    const int rungs = static_cast<int>(cfg.ladder.size());
    const std::int64_t burn = cfg.effective_burn_in();

    std::vector<CounterRng> rngs;
    rngs.reserve(rungs);
    for (int r = 0; r < rungs; ++r) rngs.emplace_back(cfg.rng_seed, chain_id_base + r);
    CounterRng swap_rng(cfg.rng_seed, chain_id_base + rungs);

    std::vector<Genome> states;
    std::vector<double> h(rungs);
    for (int r = 0; r < rungs; ++r) {
        states.push_back(land.random_genome(rngs[r]));
        h[r] = land.fitness(states[r]);
    }

    double best_raw = -std::numeric_limits<double>::infinity();
    double best_pol = best_raw;
    Genome best_pol_g;
    const auto consider = [&](const Genome& g, double ht) {
        if (ht <= best_raw) return;
        best_raw = ht;
        auto [pg, ph] = polish_local(land, g, ht);
        if (ph > best_pol) {
            best_pol = ph;
            best_pol_g = pg;
        }
    };
    for (int r = 0; r < rungs; ++r) consider(states[r], h[r]);

    std::vector<RunningStats> st(rungs);
    for (auto& s : st) s.init(cfg.steps - burn);
    std::vector<std::int64_t> accepted(rungs, 0);
    std::vector<double> rung_best(rungs, -std::numeric_limits<double>::infinity());
    std::vector<Genome> rung_best_g(rungs);
    std::vector<std::int64_t> swap_att(std::max(0, rungs - 1), 0);
    std::vector<std::int64_t> swap_acc(std::max(0, rungs - 1), 0);
    std::int64_t swap_round = 0;

    for (std::int64_t t = 0; t < cfg.steps; ++t) {
        for (int r = 0; r < rungs; ++r) {
            const bool acc = metro_step(land, states[r], h[r], cfg.ladder[r], rngs[r]);
            accepted[r] += acc ? 1 : 0;
            if (acc) consider(states[r], h[r]);
            if (h[r] > rung_best[r]) {
                rung_best[r] = h[r];
                rung_best_g[r] = states[r];
            }
            if (t >= burn) st[r].add(h[r] / n);
        }
        if ((t + 1) % cfg.swap_interval == 0) {
            const int parity = static_cast<int>(swap_round++ % 2);
            for (int i = parity; i + 1 < rungs; i += 2) {
                ++swap_att[i];
                const double num = (cfg.ladder[i] - cfg.ladder[i + 1]) * (h[i + 1] - h[i]);
                bool acc = num >= 0.0;
                if (!acc) acc = swap_rng.next_unit() < std::exp(num);
                if (acc) {
                    std::swap(states[i], states[i + 1]);
                    std::swap(h[i], h[i + 1]);
                    ++swap_acc[i];
                }
            }
        }
    }

    TemperingSummary out;
    out.betas = cfg.ladder;
    out.per_beta.resize(rungs);
    for (int r = 0; r < rungs; ++r) {
        ChainSummary& c = out.per_beta[r];
        c.final_state = states[r];
        c.final_fitness = h[r];
        c.mean_energy = st[r].mean;
        c.energy_variance = st[r].variance();
        c.tau_int = st[r].tau();
        c.acceptance_rate = static_cast<double>(accepted[r]) / cfg.steps;
        c.best_fitness = rung_best[r] / n;
        c.best_state = rung_best_g[r];
        c.n_samples = cfg.steps - burn;
    }
    out.swap_acceptance.resize(swap_att.size());
    for (std::size_t i = 0; i < swap_att.size(); ++i)
        out.swap_acceptance[i] =
            swap_att[i] ? static_cast<double>(swap_acc[i]) / swap_att[i] : 0.0;
    out.best_value = best_pol / n;
    out.best_state = best_pol_g;
    out.best_raw = best_raw / n;
    return out;
}

EstimateWithError estimate_free_energy(const LandscapeSpec& spec, double beta, int n_seeds,
                                       const TiConfig& ti) {
    spec.validate();
    if (!(beta >= 0.0)) throw std::domain_error("beta must be nonnegative");
    if (n_seeds < 8) throw std::invalid_argument("need at least 8 disorder seeds");
    if (!(ti.grid_step > 0.0) || ti.grid_step > 0.1)
        throw std::invalid_argument("grid step must be in (0, 0.1]");
    if (ti.steps_per_point < 8) throw std::invalid_argument("steps_per_point too small");
    if (beta == 0.0) return {std::log(2.0), 0.0, n_seeds};

    const int m = std::max(1, static_cast<int>(std::ceil(beta / ti.grid_step - 1e-9)));
    const double db = beta / m;
    std::vector<double> f_r(static_cast<std::size_t>(n_seeds));

    for (int r = 0; r < n_seeds; ++r) {
        LandscapeSpec s = spec;
        s.seed = spec.seed + static_cast<std::uint64_t>(r);
        const Landscape land(s);
        CounterRng rng(derive_seed(ti.chain_seed, static_cast<std::uint64_t>(r)), 0);
        Genome g = land.random_genome(rng);
        double h = land.fitness(g);
        const std::int64_t burn = ti.steps_per_point / 4;

        // warm start: each grid point continues from the previous state
        std::vector<double> me(static_cast<std::size_t>(m) + 1);
        for (int i = 0; i <= m; ++i) {
            const double b = db * i;
            RunningStats st;
            st.init(ti.steps_per_point - burn);
            for (std::int64_t t = 0; t < ti.steps_per_point; ++t) {
                metro_step(land, g, h, b, rng);
                if (t >= burn) st.add(h / land.n());
            }
            me[static_cast<std::size_t>(i)] = st.mean;
            h = land.fitness(g);
        }
        double f = std::log(2.0);
        for (int i = 0; i < m; ++i)
            f += 0.5 * (me[static_cast<std::size_t>(i)] + me[static_cast<std::size_t>(i) + 1]) * db;
        f_r[static_cast<std::size_t>(r)] = f;
    }

    EstimateWithError out;
    double mean = 0.0;
    for (double f : f_r) mean += f;
    out.value = mean / n_seeds;
    out.std_error = sample_sd(f_r) / std::sqrt(static_cast<double>(n_seeds));
    out.n_samples = n_seeds;
    return out;
}

MaxSearchResult estimate_max(const Landscape& land, const MaxEffort& effort) {
    if (effort.chains < 1) throw std::invalid_argument("need at least one chain");
    ChainConfig cfg;
    cfg.ladder = effort.ladder;
    cfg.steps = effort.steps;
    cfg.burn_in = 0;
    cfg.rng_seed = effort.rng_seed;
    cfg.swap_interval = 10;
    MaxSearchResult out;
    out.value = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < effort.chains; ++c) {
        const TemperingSummary ts =
            parallel_tempering(land, cfg, static_cast<std::uint64_t>(c) * 64);
        if (ts.best_value > out.value) {
            out.value = ts.best_value;
            out.state = ts.best_state;
        }
    }
    return out;
}

OverlapStats replica_overlap_stats(const Landscape& land, double beta, int n_chains,
                                   const ChainConfig& cfg, int samples_per_chain) {
    if (n_chains < 2) throw std::invalid_argument("need at least two chains");
    if (samples_per_chain < 1) throw std::invalid_argument("need at least one sample per chain");
    ChainConfig c = cfg;
    c.beta = beta;
    c.validate(false);
    const std::int64_t burn = c.effective_burn_in();
    if (c.steps - burn < samples_per_chain)
        throw std::invalid_argument("not enough post-burn-in steps for the sample count");
    const std::int64_t interval = (c.steps - burn) / samples_per_chain;
    const int n = land.n();
    const int k = land.k();

    // Each replica equilibrates through its own tempering ladder (replicas
    // stay independent); the target-rung marginal is the Gibbs law at beta.
    // Below the threshold the ladder is the single target rung.
    std::vector<double> ladder{beta};
    while (ladder.back() > 0.7 && ladder.size() < 48) ladder.push_back(ladder.back() / 1.35);
    std::reverse(ladder.begin(), ladder.end());
    const int rungs = static_cast<int>(ladder.size());
    const std::int64_t swap_every = std::max<std::int64_t>(1, c.swap_interval);

    std::vector<std::vector<Genome>> samples(static_cast<std::size_t>(n_chains));
    for (int i = 0; i < n_chains; ++i) {
        std::vector<CounterRng> rngs;
        for (int r = 0; r < rungs; ++r)
            rngs.emplace_back(c.rng_seed, static_cast<std::uint64_t>(i) * 64 + r);
        CounterRng swap_rng(c.rng_seed, static_cast<std::uint64_t>(i) * 64 + 63);
        std::vector<Genome> g;
        std::vector<double> h(static_cast<std::size_t>(rungs));
        for (int r = 0; r < rungs; ++r) {
            g.push_back(land.random_genome(rngs[static_cast<std::size_t>(r)]));
            h[static_cast<std::size_t>(r)] = land.fitness(g.back());
        }
        std::int64_t next_sample = burn + interval - 1;
        std::int64_t swap_round = 0;
        auto& mine = samples[static_cast<std::size_t>(i)];
        mine.reserve(static_cast<std::size_t>(samples_per_chain));
        for (std::int64_t t = 0; t < c.steps; ++t) {
            for (int r = 0; r < rungs; ++r)
                metro_step(land, g[static_cast<std::size_t>(r)], h[static_cast<std::size_t>(r)],
                           ladder[static_cast<std::size_t>(r)], rngs[static_cast<std::size_t>(r)]);
            if ((t + 1) % swap_every == 0) {
                const int parity = static_cast<int>(swap_round++ % 2);
                for (int r = parity; r + 1 < rungs; r += 2) {
                    const double num = (ladder[static_cast<std::size_t>(r)] -
                                        ladder[static_cast<std::size_t>(r) + 1]) *
                                       (h[static_cast<std::size_t>(r) + 1] -
                                        h[static_cast<std::size_t>(r)]);
                    bool acc = num >= 0.0;
                    if (!acc) acc = swap_rng.next_unit() < std::exp(num);
                    if (acc) {
                        std::swap(g[static_cast<std::size_t>(r)],
                                  g[static_cast<std::size_t>(r) + 1]);
                        std::swap(h[static_cast<std::size_t>(r)],
                                  h[static_cast<std::size_t>(r) + 1]);
                    }
                }
            }
            if (t == next_sample && static_cast<int>(mine.size()) < samples_per_chain) {
                mine.push_back(g.back());
                next_sample += interval;
            }
        }
    }

    OverlapStats out;
    out.q_hist.assign(static_cast<std::size_t>(n) + 1, 0.0);
    out.r_hist.assign(static_cast<std::size_t>(n) + 1, 0.0);

    // per-statistic totals plus per-chain involvement sums for the jackknife
    const int kStats = 4;  // q0, q1, mean q, mean r
    double tot[4] = {0, 0, 0, 0};
    std::vector<std::array<double, 4>> chain_sum(static_cast<std::size_t>(n_chains),
                                                 {0, 0, 0, 0});
    std::int64_t tot_cnt = 0;
    std::vector<std::int64_t> chain_cnt(static_cast<std::size_t>(n_chains), 0);

    for (int i = 0; i < n_chains; ++i)
        for (int j = i + 1; j < n_chains; ++j)
            for (int t = 0; t < samples_per_chain; ++t) {
                const Genome& a = samples[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
                const Genome& b = samples[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
                const int nq = nq_scalar(a, b, k);
                const int nr = nr_scalar(a, b);
                const double v[4] = {nq == 0 ? 1.0 : 0.0, nq == n ? 1.0 : 0.0,
                                     static_cast<double>(nq) / n, static_cast<double>(nr) / n};
                for (int s = 0; s < kStats; ++s) {
                    tot[s] += v[s];
                    chain_sum[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] += v[s];
                    chain_sum[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] += v[s];
                }
                ++tot_cnt;
                ++chain_cnt[static_cast<std::size_t>(i)];
                ++chain_cnt[static_cast<std::size_t>(j)];
                out.q_hist[static_cast<std::size_t>(nq)] += 1.0;
                out.r_hist[static_cast<std::size_t>((n + nr) / 2)] += 1.0;
            }

    for (double& v : out.q_hist) v /= static_cast<double>(tot_cnt);
    for (double& v : out.r_hist) v /= static_cast<double>(tot_cnt);
    out.n_pairs = tot_cnt;

    double est[4], se[4];
    for (int s = 0; s < kStats; ++s) {
        est[s] = tot[s] / static_cast<double>(tot_cnt);
        std::vector<double> loo(static_cast<std::size_t>(n_chains));
        double loo_mean = 0.0;
        for (int cix = 0; cix < n_chains; ++cix) {
            const double num = tot[s] - chain_sum[static_cast<std::size_t>(cix)][static_cast<std::size_t>(s)];
            const double den = static_cast<double>(tot_cnt - chain_cnt[static_cast<std::size_t>(cix)]);
            loo[static_cast<std::size_t>(cix)] = num / den;
            loo_mean += loo[static_cast<std::size_t>(cix)];
        }
        loo_mean /= n_chains;
        double ss = 0.0;
        for (double x : loo) ss += (x - loo_mean) * (x - loo_mean);
        se[s] = std::sqrt(ss * (n_chains - 1.0) / n_chains);
    }
    out.p_q0 = est[0];
    out.p_q0_se = se[0];
    out.p_q1 = est[1];
    out.p_q1_se = se[1];
    out.mean_q = est[2];
    out.mean_q_se = se[2];
    out.mean_r = est[3];
    out.mean_r_se = se[3];
    return out;
}

EstimateWithError chaos_probe(const LandscapeSpec& spec, double s, const ChaosEffort& effort) {
    spec.validate();
    if (!(s >= 0.0) || s > 1.0) throw std::domain_error("s must be in [0,1]");
    if (effort.n_replicas < 8) throw std::invalid_argument("need at least 8 disorder replicas");

    std::vector<double> phi(static_cast<std::size_t>(effort.n_replicas));
    for (int r = 0; r < effort.n_replicas; ++r) {
        LandscapeSpec base = spec;
        base.seed = spec.seed + static_cast<std::uint64_t>(r);
        const CorrelatedPair pair = make_correlated_pair(base, s);
        Genome g1, g2;
        if (spec.n <= 20) {
            g1 = ground_state(pair.first).sigma_star;
            g2 = ground_state(pair.second).sigma_star;
        } else {
            MaxEffort e = effort.search;
            e.rng_seed = derive_seed(effort.search.rng_seed, 2 * static_cast<std::uint64_t>(r));
            g1 = estimate_max(pair.first, e).state;
            e.rng_seed = derive_seed(effort.search.rng_seed, 2 * static_cast<std::uint64_t>(r) + 1);
            g2 = estimate_max(pair.second, e).state;
        }
        phi[static_cast<std::size_t>(r)] = overlap_q(g1, g2, spec.k);
    }

    EstimateWithError out;
    double mean = 0.0;
    for (double x : phi) mean += x;
    out.value = mean / effort.n_replicas;
    out.std_error = sample_sd(phi) / std::sqrt(static_cast<double>(effort.n_replicas));
    out.n_samples = effort.n_replicas;
    return out;
}

ConcentrationReport concentration_probe(const LandscapeSpec& spec, double beta, int n_seeds,
                                        const std::vector<double>& t_grid) {
    spec.validate();
    if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
    if (n_seeds < 500) throw std::invalid_argument("need at least 500 seeds");
    if (spec.n > kSingleScanLimit) throw std::invalid_argument("n too large to enumerate");

    std::vector<double> fs(static_cast<std::size_t>(n_seeds));
    std::vector<double> ms(static_cast<std::size_t>(n_seeds));
    for (int r = 0; r < n_seeds; ++r) {
        LandscapeSpec sp = spec;
        sp.seed = spec.seed + static_cast<std::uint64_t>(r);
        const Landscape land(sp);
        fs[static_cast<std::size_t>(r)] = exact_free_energy(land, beta).free_energy;
        ms[static_cast<std::size_t>(r)] = ground_state(land).m;
    }

    ConcentrationReport rep;
    rep.n_seeds = n_seeds;
    rep.beta = beta;
    double fm = 0.0, mm = 0.0;
    for (int r = 0; r < n_seeds; ++r) {
        fm += fs[static_cast<std::size_t>(r)];
        mm += ms[static_cast<std::size_t>(r)];
    }
    fm /= n_seeds;
    mm /= n_seeds;
    rep.f_mean = fm;
    rep.m_mean = mm;
    rep.f_std = sample_sd(fs);
    rep.m_std = sample_sd(ms);

    rep.all_below = true;
    for (double t : t_grid) {
        ConcentrationRow row;
        row.t = t;
        std::int64_t fc = 0, mc = 0;
        for (int r = 0; r < n_seeds; ++r) {
            if (std::abs(fs[static_cast<std::size_t>(r)] - fm) >= t) ++fc;
            if (std::abs(ms[static_cast<std::size_t>(r)] - mm) >= t) ++mc;
        }
        row.f_tail_freq = static_cast<double>(fc) / n_seeds;
        row.m_tail_freq = static_cast<double>(mc) / n_seeds;
        row.f_envelope = free_energy_tail_envelope(spec.n, beta, t);
        row.m_envelope = max_tail_envelope(spec.n, t);
        row.below = row.f_tail_freq <= row.f_envelope && row.m_tail_freq <= row.m_envelope;
        rep.all_below = rep.all_below && row.below;
        rep.rows.push_back(row);
    }
    return rep;
}

MonotonicityReport monotonicity_probe(int n, const std::vector<int>& k_list, int n_seeds,
                                      std::uint64_t base_seed) {
    if (n < 2 || n > kSingleScanLimit) throw std::invalid_argument("n out of enumerable range");
    if (k_list.empty()) throw std::invalid_argument("k_list must be nonempty");
    if (n_seeds < 2) throw std::invalid_argument("need at least 2 seeds");

    MonotonicityReport rep;
    rep.n = n;
    rep.n_seeds = n_seeds;
    for (int k : k_list) {
        if (k < 0 || k >= n) throw std::invalid_argument("k out of range");
        std::vector<double> ms(static_cast<std::size_t>(n_seeds));
        for (int r = 0; r < n_seeds; ++r) {
            LandscapeSpec sp;
            sp.n = n;
            sp.k = k;
            sp.seed = base_seed + static_cast<std::uint64_t>(r);
            sp.cache = auto_cache(n, k);
            const Landscape land(sp);
            ms[static_cast<std::size_t>(r)] = ground_state(land).m;
        }
        MonotonicityRow row;
        row.k = k;
        double mean = 0.0;
        for (double x : ms) mean += x;
        row.mean_m = mean / n_seeds;
        row.std_error = sample_sd(ms) / std::sqrt(static_cast<double>(n_seeds));
        rep.rows.push_back(row);
    }
    rep.nondecreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const double lo = rep.rows[i - 1].mean_m;
        const double hi = rep.rows[i].mean_m;
        const double combined = std::sqrt(rep.rows[i - 1].std_error * rep.rows[i - 1].std_error +
                                          rep.rows[i].std_error * rep.rows[i].std_error);
        if (hi < lo - 3.0 * combined) rep.nondecreasing = false;
    }
    return rep;
}

}  // namespace nklab
