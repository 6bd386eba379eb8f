#include "nklab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>
#include "nklab/theory.hpp"

namespace nklab {

BridgePath build_bridge(const Genome& from, const Genome& to, int n_steps,
                        std::vector<int> order) {
    const int n = from.n;
    if (n != to.n) throw std::invalid_argument("endpoint genomes differ in length");
    if (n_steps < 1) throw std::invalid_argument("need at least one step");
    if (n < n_steps + 1) throw std::invalid_argument("block size would be zero: need n >= steps+1");
    if (order.empty()) {
        order.resize(static_cast<std::size_t>(n_steps));
        for (int l = 0; l < n_steps; ++l) order[static_cast<std::size_t>(l)] = l;
    } else {
        if (static_cast<int>(order.size()) != n_steps)
            throw std::invalid_argument("order must have one entry per step");
        std::vector<bool> seen(static_cast<std::size_t>(n_steps), false);
        for (int l : order) {
            if (l < 0 || l >= n_steps || seen[static_cast<std::size_t>(l)])
                throw std::invalid_argument("order must be a permutation of the blocks");
            seen[static_cast<std::size_t>(l)] = true;
        }
    }

    BridgePath path;
    path.steps = n_steps;
    path.block_size = n / (n_steps + 1);
    const int k = path.block_size;
    for (int l = 0; l < n_steps; ++l) {
        const int begin = l * k;
        const int end = l == n_steps - 1 ? n : (l + 1) * k;
        path.blocks.emplace_back(begin, end);
    }
    path.order = std::move(order);

    path.nodes.reserve(static_cast<std::size_t>(n_steps) + 1);
    path.nodes.push_back(from);
    Genome cur = from;
    for (int t = 0; t < n_steps; ++t) {
        const auto [begin, end] = path.blocks[static_cast<std::size_t>(path.order[static_cast<std::size_t>(t)])];
        const std::uint64_t block_mask = low_mask(end) ^ low_mask(begin);
        cur.bits = (cur.bits & ~block_mask) | (to.bits & block_mask);
        path.nodes.push_back(cur);
    }
    return path;
}

PathReport path_report(const Landscape& land, const BridgePath& path) {
    if (path.nodes.empty() || path.nodes.front().n != land.n())
        throw std::invalid_argument("path does not match this landscape");
    const int n = land.n();
    const int k = land.k();

    PathReport rep;
    rep.n_sites = n;
    rep.steps = path.steps;
    rep.min_q = 1.0;
    rep.min_r = 1.0;
    rep.min_fitness = std::numeric_limits<double>::infinity();
    rep.min_interior_fitness = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < path.nodes.size(); ++i) {
        const double f = land.fitness_density(path.nodes[i]);
        rep.fitness.push_back(f);
        rep.min_fitness = std::min(rep.min_fitness, f);
        if (i > 0 && i + 1 < path.nodes.size())
            rep.min_interior_fitness = std::min(rep.min_interior_fitness, f);
    }
    for (int l = 0; l < path.steps; ++l) {
        const Genome& a = path.nodes[static_cast<std::size_t>(l)];
        const Genome& b = path.nodes[static_cast<std::size_t>(l) + 1];
        const int nq = nq_scalar(a, b, k);
        const int nr = nr_scalar(a, b);
        rep.nq.push_back(nq);
        rep.nr.push_back(nr);
        rep.flips.push_back(hamming(a, b));
        rep.min_q = std::min(rep.min_q, static_cast<double>(nq) / n);
        rep.min_r = std::min(rep.min_r, static_cast<double>(nr) / n);
    }
    return rep;
}

std::string PathReport::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n_sites;
    j["steps"] = steps;
    j["nq"] = nq;
    j["nr"] = nr;
    j["flips"] = flips;
    j["fitness"] = fitness;
    j["min_q"] = min_q;
    j["min_r"] = min_r;
    j["min_fitness"] = min_fitness;
    j["min_interior_fitness"] = min_interior_fitness;
    return j.dump();
}

PathFlags verify_path_bounds(const PathReport& report, double alpha, double eta, double m) {
    if (!(alpha > 0.0) || alpha > 1.0) throw std::domain_error("alpha must be in (0,1]");
    if (!(eta > 0.0)) throw std::domain_error("eta must be positive");
    const int n = report.steps;
    const int sites = report.n_sites;

    PathFlags flags;
    flags.regime = n >= 10 && alpha < eta / (5.0 * beta_c());

    // exact integer forms where possible; Q's floor carries the real alpha
    std::int64_t min_nq = sites, min_nr = sites;
    for (int v : report.nq) min_nq = std::min<std::int64_t>(min_nq, v);
    for (int v : report.nr) min_nr = std::min<std::int64_t>(min_nr, v);
    const double q_rhs = static_cast<double>(sites) * (n - 1) - 2.0 * alpha * (n + 1) * sites;
    flags.q_bound = static_cast<double>(min_nq) * (n + 1) >= q_rhs - 1e-9;
    flags.r_bound = min_nr * static_cast<std::int64_t>(n + 1) >=
                    static_cast<std::int64_t>(sites) * (n - 3);
    flags.fitness_floor = report.min_interior_fitness >= m - (8.0 * n + 10.0) * eta;
    return flags;
}

WalkTrace adaptive_walk(const Landscape& land, const Genome& start, WalkRule rule,
                        std::uint64_t rng_seed) {
    if (start.n != land.n()) throw std::invalid_argument("start genome does not match landscape");
    CounterRng rng(rng_seed, 0);
    WalkTrace trace;
    Genome g = start;
    double h = land.fitness(g);
    trace.nodes.push_back(g);
    trace.fitness.push_back(h / land.n());

    std::vector<int> improving;
    for (;;) {
        int pick = -1;
        double pick_d = 0.0;
        if (rule == WalkRule::steepest) {
            for (int j = 0; j < land.n(); ++j) {
                const double d = land.delta_fitness(g, j);
                if (d > pick_d) {
                    pick_d = d;
                    pick = j;
                }
            }
        } else {
            improving.clear();
            for (int j = 0; j < land.n(); ++j)
                if (land.delta_fitness(g, j) > 0.0) improving.push_back(j);
            if (!improving.empty()) {
                pick = improving[rng.next_below(static_cast<std::uint32_t>(improving.size()))];
                pick_d = land.delta_fitness(g, pick);
            }
        }
        if (pick < 0) break;
        g.flip(pick);
        h += pick_d;
        trace.nodes.push_back(g);
        trace.fitness.push_back(h / land.n());
    }
    return trace;
}

std::pair<Genome, Genome> distant_near_fittest(const Landscape& land, double eta,
                                               int scan_limit) {
    if (!(eta >= 0.0)) throw std::domain_error("eta must be nonnegative");
    const GroundStateResult gs = ground_state(land, scan_limit);
    const std::vector<LevelSetEntry> lvl =
        collect_level_set(land, gs.m - eta - 1e-12, std::size_t{1} << 21, scan_limit);
    const Genome& star = gs.sigma_star;
    bool found = false;
    Genome far;
    int best_nr = land.n() + 1;
    for (const LevelSetEntry& e : lvl) {
        if (e.g == star) continue;
        const int nr = nr_scalar(star, e.g);
        if (!found || nr < best_nr || (nr == best_nr && e.g.bits < far.bits)) {
            found = true;
            best_nr = nr;
            far = e.g;
        }
    }
    return {star, found ? far : star};
}

}  // namespace nklab
