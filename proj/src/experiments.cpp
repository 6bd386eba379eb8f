#include "nklab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>

#include <json.hpp>

#include "nklab/combinatorics.hpp"
#include "nklab/enumeration.hpp"
#include "nklab/landscape.hpp"
#include "nklab/paths.hpp"
#include "nklab/sampler.hpp"
#include "nklab/theory.hpp"

#ifndef NKLAB_BUILD_ID
#define NKLAB_BUILD_ID "unknown"
#endif

namespace nklab {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

int thread_count() {
    if (const char* env = std::getenv("THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Work items are claimed from a shared counter but results land in
// index-addressed slots, so output order is independent of scheduling.
void parallel_for_ordered(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

using Rows = std::vector<std::vector<std::string>>;

// fn(i) returns the rows for point i plus its hard-assertion verdict.
void run_points(std::size_t count, Table& table, bool& ok,
                const std::function<std::pair<Rows, bool>(std::size_t)>& fn) {
    std::vector<Rows> blocks(count);
    std::vector<char> oks(count, 1);
    parallel_for_ordered(count, [&](std::size_t i) {
        auto [rows, point_ok] = fn(i);
        blocks[i] = std::move(rows);
        oks[i] = point_ok ? 1 : 0;
    });
    for (std::size_t i = 0; i < count; ++i) {
        for (auto& r : blocks[i]) table.rows.push_back(std::move(r));
        ok = ok && oks[i];
    }
}

std::string fmt_int(std::int64_t v) { return std::to_string(v); }
std::string fmt_bool(bool b) { return b ? "true" : "false"; }

CacheMode auto_cache(int n, int k) {
    const double bytes = static_cast<double>(n) * std::exp2(k + 1) * 8.0;
    return (k + 1 <= 20 && bytes <= 8.0 * 1024 * 1024) ? CacheMode::table : CacheMode::hashed;
}

LandscapeSpec point_spec(int n, int k, std::uint64_t seed) {
    LandscapeSpec sp;
    sp.n = n;
    sp.k = k;
    sp.seed = seed;
    sp.cache = auto_cache(n, k);
    return sp;
}

// (k, alpha label) pairs for one n, from whichever list the config filled.
// Explicit k values outside [0, n-1] are skipped so one list can serve a
// sweep over several ring lengths.
std::vector<std::pair<int, double>> k_points(const ExperimentConfig& c, int n) {
    std::vector<std::pair<int, double>> out;
    if (!c.k_list.empty()) {
        for (int k : c.k_list)
            if (k >= 0 && k < n)
                out.emplace_back(k, n > 1 ? static_cast<double>(k) / (n - 1) : 0.0);
    } else {
        for (double a : c.alpha_list) out.emplace_back(LandscapeSpec::k_from_alpha(a, n), a);
    }
    if (out.empty()) throw std::invalid_argument("experiment needs k or alpha values");
    return out;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
    MeanSe out;
    if (v.empty()) return out;
    for (double x : v) out.mean += x;
    out.mean /= static_cast<double>(v.size());
    if (v.size() < 2) return out;
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) / static_cast<double>(v.size()));
    return out;
}

// ---- experiments ----------------------------------------------------------

void exp_free_energy(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n",        "k",       "alpha", "beta",      "mean_f", "std_error",
                "n_seeds",  "seed_base", "exact", "theory_f", "abs_dev"};
    struct Point {
        int n, k;
        double alpha, beta;
    };
    std::vector<Point> pts;
    for (int n : c.n_list)
        for (auto [k, a] : k_points(c, n))
            for (double b : c.beta_list) pts.push_back({n, k, a, b});
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [n, k, alpha, beta] = pts[i];
        const bool exact = n <= 20;
        MeanSe ms;
        if (exact) {
            std::vector<double> fs(static_cast<std::size_t>(c.seeds.count));
            for (int r = 0; r < c.seeds.count; ++r) {
                const Landscape land(point_spec(n, k, c.seeds.base + static_cast<std::uint64_t>(r)));
                fs[static_cast<std::size_t>(r)] = exact_free_energy(land, beta).free_energy;
            }
            ms = mean_se(fs);
        } else {
            TiConfig ti;
            ti.grid_step = c.grid_step;
            ti.steps_per_point = c.steps;
            const EstimateWithError est =
                estimate_free_energy(point_spec(n, k, c.seeds.base), beta, c.seeds.count, ti);
            ms = {est.value, est.std_error};
        }
        const double ref = beta > 0.0 ? limiting_free_energy(beta) : std::log(2.0);
        Rows rows{{fmt_int(n), fmt_int(k), format_value(alpha), format_value(beta),
                   format_value(ms.mean), format_value(ms.se), fmt_int(c.seeds.count),
                   fmt_int(static_cast<std::int64_t>(c.seeds.base)), fmt_bool(exact),
                   format_value(ref), format_value(std::abs(ms.mean - ref))}};
        return {std::move(rows), true};
    });
}

void exp_max_fitness(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n",       "k",         "alpha", "mean_m", "std_error",
                "n_seeds", "seed_base", "exact", "beta_c"};
    struct Point {
        int n, k;
        double alpha;
    };
    std::vector<Point> pts;
    for (int n : c.n_list)
        for (auto [k, a] : k_points(c, n)) pts.push_back({n, k, a});
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [n, k, alpha] = pts[i];
        const bool exact = n <= 20;
        std::vector<double> ms(static_cast<std::size_t>(c.seeds.count));
        for (int r = 0; r < c.seeds.count; ++r) {
            const Landscape land(point_spec(n, k, c.seeds.base + static_cast<std::uint64_t>(r)));
            if (exact) {
                ms[static_cast<std::size_t>(r)] = ground_state(land).m;
            } else {
                MaxEffort e;
                e.chains = c.chains;
                e.steps = c.steps;
                e.rng_seed = derive_seed(c.seeds.base, static_cast<std::uint64_t>(r));
                ms[static_cast<std::size_t>(r)] = estimate_max(land, e).value;
            }
        }
        const MeanSe agg = mean_se(ms);
        Rows rows{{fmt_int(n), fmt_int(k), format_value(alpha), format_value(agg.mean),
                   format_value(agg.se), fmt_int(c.seeds.count),
                   fmt_int(static_cast<std::int64_t>(c.seeds.base)), fmt_bool(exact),
                   format_value(beta_c())}};
        return {std::move(rows), true};
    });
}

void exp_overlap_law(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n",       "k",        "alpha",    "beta",      "p_q0",      "p_q0_se",
                "p_q1",    "p_q1_se",  "mean_q",   "mean_q_se", "theory_q0", "theory_q1",
                "n_seeds", "seed_base"};
    struct Point {
        int n, k;
        double alpha, beta;
    };
    std::vector<Point> pts;
    for (int n : c.n_list)
        for (auto [k, a] : k_points(c, n))
            for (double b : c.beta_list) pts.push_back({n, k, a, b});
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [n, k, alpha, beta] = pts[i];
        std::vector<double> q0(static_cast<std::size_t>(c.seeds.count));
        std::vector<double> q1(static_cast<std::size_t>(c.seeds.count));
        std::vector<double> mq(static_cast<std::size_t>(c.seeds.count));
        bool point_ok = true;
        for (int r = 0; r < c.seeds.count; ++r) {
            const Landscape land(point_spec(n, k, c.seeds.base + static_cast<std::uint64_t>(r)));
            const GibbsSummary g = exact_overlap_law(land, beta);
            const OverlapLaw& law = *g.overlap_law;
            point_ok = point_ok && std::abs(law.total() - 1.0) <= 1e-9;
            double p0 = 0.0;
            for (int nr = -n; nr <= n; nr += 2) p0 += law.at(0, nr);
            q0[static_cast<std::size_t>(r)] = p0;
            q1[static_cast<std::size_t>(r)] = g.p_q1;
            mq[static_cast<std::size_t>(r)] = law.mean_q();
        }
        const MeanSe a0 = mean_se(q0), a1 = mean_se(q1), amq = mean_se(mq);
        const double th_q0 = beta <= beta_c() ? 1.0 : beta_c() / beta;
        const double th_q1 = beta <= beta_c() ? 0.0 : 1.0 - beta_c() / beta;
        Rows rows{{fmt_int(n), fmt_int(k), format_value(alpha), format_value(beta),
                   format_value(a0.mean), format_value(a0.se), format_value(a1.mean),
                   format_value(a1.se), format_value(amq.mean), format_value(amq.se),
                   format_value(th_q0), format_value(th_q1), fmt_int(c.seeds.count),
                   fmt_int(static_cast<std::int64_t>(c.seeds.base))}};
        return {std::move(rows), point_ok};
    });
}

void exp_gap_check(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n",          "k",     "alpha",      "delta",  "mean_gap_q", "se_gap_q",
                "rhs_q",      "mean_gap_r", "se_gap_r", "rhs_r", "n_seeds",  "seed_base"};
    struct Point {
        int n, k;
        double alpha, delta;
    };
    std::vector<Point> pts;
    for (int n : c.n_list)
        for (auto [k, a] : k_points(c, n))
            for (double d : c.delta_list) pts.push_back({n, k, a, d});
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [n, k, alpha, delta] = pts[i];
        std::vector<double> gq, gr;
        for (int r = 0; r < c.seeds.count; ++r) {
            const Landscape land(point_spec(n, k, c.seeds.base + static_cast<std::uint64_t>(r)));
            const double m2 = 2.0 * ground_state(land).m;
            try {
                gq.push_back(m2 - coupled_max(land, constraint_overlap_interior()).value);
            } catch (const std::domain_error&) {
            }
            try {
                gr.push_back(m2 - coupled_max(land, constraint_r_band(delta)).value);
            } catch (const std::domain_error&) {
            }
        }
        const MeanSe aq = mean_se(gq), ar = mean_se(gr);
        const GapBounds gb = gap_bounds(alpha, delta);
        Rows rows{{fmt_int(n), fmt_int(k), format_value(alpha), format_value(delta),
                   format_value(gq.empty() ? kNan : aq.mean), format_value(aq.se),
                   format_value(gb.rhs_q()), format_value(gr.empty() ? kNan : ar.mean),
                   format_value(ar.se), format_value(gb.rhs_r()), fmt_int(c.seeds.count),
                   fmt_int(static_cast<std::int64_t>(c.seeds.base))}};
        return {std::move(rows), true};
    });
}

void exp_count_check(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n", "k", "l", "count", "upper_bound", "bound_holds", "tight_lower"};
    struct Point {
        int n, k;
    };
    std::vector<Point> pts;
    for (int n : c.n_list)
        for (auto [k, a] : k_points(c, n)) {
            (void)a;
            pts.push_back({n, k});
        }
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [n, k] = pts[i];
        const CountTable table = count_by_overlap(n, k);
        bool point_ok = table.total() == (BigInt(1) << n);
        if (n <= 16) point_ok = point_ok && table.counts == count_by_overlap_bruteforce(n, k).counts;
        const CountBoundReport rep = count_bound_check(table);
        if (rep.applicable) point_ok = point_ok && rep.all_hold;
        Rows rows;
        for (int l = 0; l <= n; ++l) {
            const BigInt& cnt = table.counts[static_cast<std::size_t>(l)];
            if (cnt == 0) continue;
            std::string bound, holds, tight;
            if (l >= 1 && l <= n - k - 1) {
                bound = (BigInt(n) << (n - (k + l))).str();
                holds = fmt_bool(cnt <= (BigInt(n) << (n - (k + l))));
                tight = tightness_lower_bound(n, k, l).str();
            }
            rows.push_back({fmt_int(n), fmt_int(k), fmt_int(l), cnt.str(), bound, holds, tight});
        }
        return {std::move(rows), point_ok};
    });
}

void exp_second_moment(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n",         "k",          "s",       "exact_ratio", "analytic_bound",
                "ratio_le_bound", "bound_applicable", "mills_lower", "gauss_sf_x"};
    struct Point {
        int n, k;
        double s;
    };
    std::vector<Point> pts;
    for (int n : c.n_list)
        for (auto [k, a] : k_points(c, n)) {
            (void)a;
            for (double s : c.s_list) pts.push_back({n, k, s});
        }
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [n, k, s] = pts[i];
        const CountTable table = count_by_overlap(n, k);
        const SecondMomentResult smr = second_moment_ratio(table, s);
        const CountBoundReport rep = count_bound_check(table);
        const bool le = smr.exact_ratio <= smr.analytic_bound + 1e-9;
        bool point_ok = smr.exact_ratio >= 1.0 - 1e-9;
        if (rep.applicable && rep.all_hold) point_ok = point_ok && le;
        Rows rows{{fmt_int(n), fmt_int(k), format_value(s), format_value(smr.exact_ratio),
                   format_value(smr.analytic_bound), fmt_bool(le),
                   fmt_bool(rep.applicable && rep.all_hold), format_value(mills_lower(s, n)),
                   format_value(gauss_sf(s * std::sqrt(static_cast<double>(n))))}};
        return {std::move(rows), point_ok};
    });
}

void exp_theory_curves(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"alpha",  "delta",      "entropy_h", "rhs_q",     "rhs_r",
                "energy_gap", "has_low", "c1",        "c2",        "delta_star",
                "rhs_q_low",  "rhs_r_low", "energy_gap_low"};
    std::vector<double> deltas = c.delta_list;
    if (deltas.empty())
        for (int j = 1; j <= c.grid_points; ++j)
            deltas.push_back(static_cast<double>(j) / (c.grid_points + 1));
    std::vector<double> alphas = c.alpha_list;
    if (alphas.empty()) throw std::invalid_argument("theory_curves needs alpha values");
    struct Point {
        double alpha, delta;
    };
    std::vector<Point> pts;
    for (double a : alphas)
        for (double d : deltas) pts.push_back({a, d});
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [a, d] = pts[i];
        const GapBounds gb = gap_bounds(a, d);
        std::string c1s, c2s, dss, qls, rls, els;
        if (gb.has_low_fields()) {
            c1s = format_value(gb.c1());
            c2s = format_value(gb.c2());
            dss = format_value(gb.delta_star());
            if (gb.has_rhs_q_low()) qls = format_value(gb.rhs_q_low());
            if (gb.has_rhs_r_low()) {
                rls = format_value(gb.rhs_r_low());
                els = format_value(gb.energy_gap_low());
            }
        }
        Rows rows{{format_value(a), format_value(d), format_value(entropy_h(d)),
                   format_value(gb.rhs_q()), format_value(gb.rhs_r()),
                   format_value(gb.energy_gap()), fmt_bool(gb.has_low_fields()), c1s, c2s, dss,
                   qls, rls, els}};
        return {std::move(rows), true};
    });
}

void exp_path_check(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n",     "k",     "alpha", "steps", "rem",   "seed",
                "min_q", "min_r", "min_fitness", "min_interior_fitness",
                "exact_bounds", "concrete_q", "concrete_r"};
    struct Point {
        int n, k;
        double alpha;
    };
    std::vector<Point> pts;
    for (int n : c.n_list)
        for (auto [k, a] : k_points(c, n)) pts.push_back({n, k, a});
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [n, k, alpha] = pts[i];
        const int steps = c.path_steps;
        Rows rows;
        bool point_ok = true;
        for (int r = 0; r < c.seeds.count; ++r) {
            const std::uint64_t seed = c.seeds.base + static_cast<std::uint64_t>(r);
            const Landscape land(point_spec(n, k, seed));
            CounterRng rng(derive_seed(seed, i), 0);
            const Genome a{rng.next_u64() & low_mask(n), n};
            const Genome b{rng.next_u64() & low_mask(n), n};
            const BridgePath path = build_bridge(a, b, steps);
            const PathReport rep = path_report(land, path);
            const int bk = path.block_size;
            const int rem = n - (steps + 1) * bk;
            bool exact_ok = true;
            for (int l = 0; l < steps; ++l) {
                const auto [lo, hi] = path.blocks[static_cast<std::size_t>(path.order[static_cast<std::size_t>(l)])];
                const int sz = hi - lo;
                exact_ok = exact_ok && rep.nq[static_cast<std::size_t>(l)] >= std::max(0, n - sz - k);
                exact_ok = exact_ok && rep.nr[static_cast<std::size_t>(l)] >= n - 2 * sz;
            }
            const PathFlags flags = verify_path_bounds(rep, alpha > 0 ? alpha : 1e-9, c.eta, 0.0);
            point_ok = point_ok && exact_ok;
            if (rem == 0) point_ok = point_ok && flags.q_bound && flags.r_bound;
            rows.push_back({fmt_int(n), fmt_int(k), format_value(alpha), fmt_int(steps),
                            fmt_int(rem), fmt_int(static_cast<std::int64_t>(seed)),
                            format_value(rep.min_q), format_value(rep.min_r),
                            format_value(rep.min_fitness), format_value(rep.min_interior_fitness),
                            fmt_bool(exact_ok), fmt_bool(flags.q_bound), fmt_bool(flags.r_bound)});
        }
        return {std::move(rows), point_ok};
    });
}

void exp_chaos(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n", "k", "alpha", "s", "phi", "std_error", "n_replicas", "seed_base"};
    struct Point {
        int n, k;
        double alpha, s;
    };
    std::vector<Point> pts;
    for (int n : c.n_list)
        for (auto [k, a] : k_points(c, n))
            for (double s : c.s_list) pts.push_back({n, k, a, s});
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [n, k, alpha, s] = pts[i];
        ChaosEffort eff;
        eff.n_replicas = c.seeds.count;
        eff.search.chains = c.chains;
        eff.search.steps = c.steps;
        const EstimateWithError est = chaos_probe(point_spec(n, k, c.seeds.base), s, eff);
        const bool point_ok = s < 1.0 || est.value >= 1.0 - 1e-12;
        Rows rows{{fmt_int(n), fmt_int(k), format_value(alpha), format_value(s),
                   format_value(est.value), format_value(est.std_error),
                   fmt_int(est.n_samples), fmt_int(static_cast<std::int64_t>(c.seeds.base))}};
        return {std::move(rows), point_ok};
    });
}

void exp_concentration(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n",      "k",      "alpha",  "beta",  "t",      "f_tail",
                "f_envelope", "m_tail", "m_envelope", "below", "n_seeds"};
    struct Point {
        int n, k;
        double alpha, beta;
    };
    std::vector<Point> pts;
    for (int n : c.n_list)
        for (auto [k, a] : k_points(c, n))
            for (double b : c.beta_list) pts.push_back({n, k, a, b});
    run_points(pts.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const auto [n, k, alpha, beta] = pts[i];
        const ConcentrationReport rep =
            concentration_probe(point_spec(n, k, c.seeds.base), beta, c.seeds.count);
        Rows rows;
        for (const ConcentrationRow& row : rep.rows)
            rows.push_back({fmt_int(n), fmt_int(k), format_value(alpha), format_value(beta),
                            format_value(row.t), format_value(row.f_tail_freq),
                            format_value(row.f_envelope), format_value(row.m_tail_freq),
                            format_value(row.m_envelope), fmt_bool(row.below),
                            fmt_int(rep.n_seeds)});
        return {std::move(rows), rep.all_below};
    });
}

void exp_monotonicity(const ExperimentConfig& c, Table& t, bool& ok) {
    t.header = {"n", "k", "mean_m", "std_error", "n_seeds", "nondecreasing"};
    run_points(c.n_list.size(), t, ok, [&](std::size_t i) -> std::pair<Rows, bool> {
        const int n = c.n_list[i];
        std::vector<int> ks = c.k_list;
        if (ks.empty()) {
            ks = {0, 1, (n - 1) / 2, n - 1};
            std::sort(ks.begin(), ks.end());
            ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
        }
        const MonotonicityReport rep = monotonicity_probe(n, ks, c.seeds.count, c.seeds.base);
        Rows rows;
        for (const MonotonicityRow& row : rep.rows)
            rows.push_back({fmt_int(n), fmt_int(row.k), format_value(row.mean_m),
                            format_value(row.std_error), fmt_int(rep.n_seeds),
                            fmt_bool(rep.nondecreasing)});
        return {std::move(rows), rep.nondecreasing};
    });
}

struct Registered {
    const char* name;
    void (*fn)(const ExperimentConfig&, Table&, bool&);
};

const Registered kRegistry[] = {
    {"free_energy_convergence", exp_free_energy},
    {"max_fitness_convergence", exp_max_fitness},
    {"overlap_law", exp_overlap_law},
    {"gap_check", exp_gap_check},
    {"count_check", exp_count_check},
    {"second_moment", exp_second_moment},
    {"theory_curves", exp_theory_curves},
    {"path_check", exp_path_check},
    {"chaos", exp_chaos},
    {"concentration", exp_concentration},
    {"monotonicity", exp_monotonicity},
};

bool looks_numeric(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(v);
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out.push_back('\\');
        out.push_back(ch);
    }
    return out;
}

std::string render_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out.push_back(',');
        out += t.header[i];
    }
    out.push_back('\n');
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            out += row[i];
        }
        out.push_back('\n');
    }
    return out;
}

std::string render_jsonl(const Table& t) {
    std::string out;
    for (const auto& row : t.rows) {
        out.push_back('{');
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            out.push_back('"');
            out += json_escape(t.header[i]);
            out += "\":";
            const std::string& v = row[i];
            if (v == "true" || v == "false" || looks_numeric(v)) {
                out += v.empty() ? "null" : v;
            } else if (v.empty()) {
                out += "null";
            } else {
                out.push_back('"');
                out += json_escape(v);
                out.push_back('"');
            }
        }
        out += "}\n";
    }
    return out;
}

}  // namespace

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const Registered& r : kRegistry) out.emplace_back(r.name);
        return out;
    }();
    return names;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ExperimentConfig c;
    c.experiment = j.value("experiment", std::string{});
    const auto ints = [&](const char* key) {
        return j.contains(key) ? j.at(key).get<std::vector<int>>() : std::vector<int>{};
    };
    const auto reals = [&](const char* key) {
        return j.contains(key) ? j.at(key).get<std::vector<double>>() : std::vector<double>{};
    };
    c.n_list = ints("n");
    c.k_list = ints("k");
    c.alpha_list = reals("alpha");
    c.beta_list = reals("beta");
    c.s_list = reals("s");
    c.delta_list = reals("delta");
    c.p_list = ints("p");
    if (j.contains("seeds")) {
        c.seeds.base = j.at("seeds").value("base", std::uint64_t{1});
        c.seeds.count = j.at("seeds").value("count", 1);
    }
    c.steps = j.value("steps", c.steps);
    c.chains = j.value("chains", c.chains);
    c.grid_step = j.value("grid_step", c.grid_step);
    c.grid_points = j.value("grid_points", c.grid_points);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.eta = j.value("eta", c.eta);
    c.path_steps = j.value("path_steps", c.path_steps);
    if (j.contains("output")) {
        c.out_dir = j.at("output").value("dir", c.out_dir);
        c.format = j.at("output").value("format", c.format);
    }
    return c;
}

std::string ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["n"] = n_list;
    j["k"] = k_list;
    j["alpha"] = alpha_list;
    j["beta"] = beta_list;
    j["s"] = s_list;
    j["delta"] = delta_list;
    j["p"] = p_list;
    j["seeds"] = {{"base", seeds.base}, {"count", seeds.count}};
    j["steps"] = steps;
    j["chains"] = chains;
    j["grid_step"] = grid_step;
    j["grid_points"] = grid_points;
    j["epsilon"] = epsilon;
    j["eta"] = eta;
    j["path_steps"] = path_steps;
    j["output"] = {{"dir", out_dir}, {"format", format}};
    return j.dump(2);
}

void ExperimentConfig::validate() const {
    bool known = false;
    for (const std::string& name : experiment_names()) known = known || name == experiment;
    if (!known) throw std::invalid_argument("unknown experiment: " + experiment);
    if (seeds.count < 1) throw std::invalid_argument("seed count must be >= 1");
    if (format != "csv" && format != "jsonl")
        throw std::invalid_argument("format must be csv or jsonl");
    if (grid_points < 1) throw std::invalid_argument("grid_points must be >= 1");
    if (steps < 8) throw std::invalid_argument("steps too small");
    if (chains < 1) throw std::invalid_argument("chains must be >= 1");
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    Table table;
    bool ok = true;
    for (const Registered& r : kRegistry)
        if (cfg.experiment == r.name) r.fn(cfg, table, ok);

    std::filesystem::create_directories(cfg.out_dir);
    const std::string ext = cfg.format == "csv" ? ".csv" : ".jsonl";
    const std::string data_name = cfg.experiment + ext;
    const std::filesystem::path data_path = std::filesystem::path(cfg.out_dir) / data_name;
    const std::string body = cfg.format == "csv" ? render_csv(table) : render_jsonl(table);
    {
        std::ofstream f(data_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + data_path.string());
        f << body;
    }

    const auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

    nlohmann::ordered_json manifest;
    manifest["experiment"] = cfg.experiment;
    manifest["build_id"] = NKLAB_BUILD_ID;
    manifest["timestamp"] = stamp;
    manifest["wall_time_ms"] = wall;
    manifest["ok"] = ok;
    manifest["config"] = nlohmann::ordered_json::parse(cfg.to_json());
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(body)));
    manifest["files"] = nlohmann::ordered_json::array(
        {{{"path", data_name}, {"bytes", body.size()}, {"fnv1a64", hash}}});

    const std::filesystem::path man_path = std::filesystem::path(cfg.out_dir) / "MANIFEST.json";
    {
        std::ofstream f(man_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + man_path.string());
        f << manifest.dump(2) << "\n";
    }

    RunResult out;
    out.ok = ok;
    out.files = {data_path.string()};
    out.manifest_path = man_path.string();
    return out;
}

}  // namespace nklab
