#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nklab/combinatorics.hpp"
#include "nklab/enumeration.hpp"
#include "nklab/experiments.hpp"
#include "nklab/landscape.hpp"
#include "nklab/paths.hpp"
#include "nklab/sampler.hpp"
#include "nklab/theory.hpp"

namespace {

using nklab::format_value;

// Shared per-subcommand plumbing: seed, JSON toggle, output redirection.
struct Common {
    std::uint64_t seed = 1;
    bool as_json = false;
    std::string out;

    void attach(CLI::App* sub) {
        sub->add_option("--seed", seed, "base RNG / disorder seed");
        sub->add_flag("--json", as_json, "emit JSON instead of plain text");
        sub->add_option("--out", out, "write output to this file instead of stdout");
    }

    void emit(const std::string& text) const {
        if (out.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << text;
    }
};

int resolve_k(int n, int k, double alpha, bool has_k, bool has_alpha) {
    if (has_k == has_alpha)
        throw CLI::ValidationError("exactly one of --k and --alpha is required");
    return has_k ? k : nklab::LandscapeSpec::k_from_alpha(alpha, n);
}

std::string kv_lines(const std::vector<std::pair<std::string, std::string>>& kv, bool as_json) {
    if (as_json) {
        nlohmann::ordered_json j;
        for (const auto& [k, v] : kv) j[k] = nlohmann::json::parse(v, nullptr, false).is_discarded()
                                                 ? nlohmann::json(v)
                                                 : nlohmann::json::parse(v);
        return j.dump(2) + "\n";
    }
    if (kv.size() == 1) return kv.front().second + "\n";
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::string brace_counts(const std::vector<std::pair<int, std::string>>& entries) {
    std::string out = "{";
    bool first = true;
    for (const auto& [l, c] : entries) {
        if (!first) out.push_back(',');
        first = false;
        out += std::to_string(l) + ":" + c;
    }
    out.push_back('}');
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nklab: laboratory for NK fitness landscapes on a ring"};
    app.require_subcommand(1);
    int rc = 0;

    // ---- theory ----
    auto* theory = app.add_subcommand("theory", "closed-form constants, curves and bounds");
    Common tc;
    tc.attach(theory);
    bool t_beta_c = false, t_alpha_star = false, t_gap = false, t_min_f = false;
    double t_beta = -1.0, t_alpha = -1.0, t_delta = -1.0, t_s = -1.0, t_entropy = -1.0;
    int t_p = 0;
    theory->add_flag("--beta-c", t_beta_c, "free-energy transition point");
    theory->add_flag("--alpha-star", t_alpha_star, "third-band threshold");
    auto* t_fe = theory->add_option("--free-energy", t_beta, "limiting free energy at this beta");
    auto* t_h = theory->add_option("--entropy", t_entropy, "entropy function h at this argument");
    theory->add_flag("--gap", t_gap, "gap thresholds (needs --alpha and --delta)");
    theory->add_flag("--min-f", t_min_f, "minimum of the moment exponent (needs --alpha and --s)");
    auto* t_bp = theory->add_option("--beta-p", t_p, "p-spin proxy threshold for even p");
    theory->add_option("--alpha", t_alpha, "window ratio");
    theory->add_option("--delta", t_delta, "overlap band edge");
    theory->add_option("--s", t_s, "level threshold");
    theory->callback([&] {
        std::vector<std::pair<std::string, std::string>> kv;
        // Plain text shows the headline constants at six decimals; JSON is the
        // machine-readable path and keeps full precision like every other field.
        if (t_beta_c) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", nklab::beta_c());
            kv.emplace_back("beta_c", tc.as_json ? format_value(nklab::beta_c()) : buf);
        }
        if (t_alpha_star) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f", nklab::alpha_star());
            kv.emplace_back("alpha_star", tc.as_json ? format_value(nklab::alpha_star()) : buf);
        }
        if (t_fe->count()) kv.emplace_back("free_energy", format_value(nklab::limiting_free_energy(t_beta)));
        if (t_h->count()) kv.emplace_back("entropy_h", format_value(nklab::entropy_h(t_entropy)));
        if (t_gap) {
            if (t_alpha < 0 || t_delta < 0)
                throw CLI::ValidationError("--gap needs --alpha and --delta");
            const nklab::GapBounds gb = nklab::gap_bounds(t_alpha, t_delta);
            kv.emplace_back("rhs_q", format_value(gb.rhs_q()));
            kv.emplace_back("rhs_r", format_value(gb.rhs_r()));
            kv.emplace_back("energy_gap", format_value(gb.energy_gap()));
            if (gb.has_rhs_q_low()) kv.emplace_back("rhs_q_low", format_value(gb.rhs_q_low()));
            if (gb.has_rhs_r_low()) {
                kv.emplace_back("rhs_r_low", format_value(gb.rhs_r_low()));
                kv.emplace_back("energy_gap_low", format_value(gb.energy_gap_low()));
            }
        }
        if (t_min_f) {
            if (t_alpha < 0 || t_s < 0) throw CLI::ValidationError("--min-f needs --alpha and --s");
            const nklab::MinF mf = nklab::min_f(t_alpha, t_s);
            kv.emplace_back("t_min", format_value(mf.t_min));
            kv.emplace_back("min_f", format_value(mf.value));
        }
        if (t_bp->count()) kv.emplace_back("beta_p", format_value(nklab::beta_p(t_p)));
        if (kv.empty()) throw CLI::ValidationError("pick at least one quantity");
        tc.emit(kv_lines(kv, tc.as_json));
    });

    // ---- count ----
    auto* count = app.add_subcommand("count", "exact pair counts by overlap level");
    Common cc;
    cc.attach(count);
    int c_n = 0, c_k = -1;
    double c_alpha = -1.0;
    bool c_by_r = false;
    count->add_option("--n", c_n, "ring length")->required();
    auto* c_kopt = count->add_option("--k", c_k, "window reach");
    auto* c_aopt = count->add_option("--alpha", c_alpha, "window ratio, k = floor(alpha(n-1))");
    count->add_flag("--by-r", c_by_r, "site-overlap census instead of window overlap");
    count->callback([&] {
        if (c_by_r) {
            std::vector<std::pair<int, std::string>> entries;
            for (int r = -c_n; r <= c_n; r += 2)
                entries.emplace_back(r, nklab::count_by_r(c_n, r).count.str());
            cc.emit(brace_counts(entries) + "\n");
            return;
        }
        const int k = resolve_k(c_n, c_k, c_alpha, c_kopt->count() > 0, c_aopt->count() > 0);
        const nklab::CountTable table = nklab::count_by_overlap(c_n, k);
        if (cc.as_json) {
            cc.emit(table.to_json().dump(2) + "\n");
            return;
        }
        std::vector<std::pair<int, std::string>> entries;
        for (int l = 0; l <= c_n; ++l)
            if (table.counts[static_cast<std::size_t>(l)] != 0)
                entries.emplace_back(l, table.counts[static_cast<std::size_t>(l)].str());
        cc.emit(brace_counts(entries) + "\n");
    });

    // ---- exact ----
    auto* exact = app.add_subcommand("exact", "full enumeration of one instance");
    Common ec;
    ec.attach(exact);
    int e_n = 0, e_k = -1;
    double e_alpha = -1.0, e_beta = 1.0;
    bool e_law = false;
    exact->add_option("--n", e_n, "ring length")->required();
    auto* e_kopt = exact->add_option("--k", e_k, "window reach");
    auto* e_aopt = exact->add_option("--alpha", e_alpha, "window ratio");
    exact->add_option("--beta", e_beta, "inverse temperature");
    exact->add_flag("--law", e_law, "emit the two-replica overlap law instead of the summary");
    exact->callback([&] {
        const int k = resolve_k(e_n, e_k, e_alpha, e_kopt->count() > 0, e_aopt->count() > 0);
        nklab::LandscapeSpec sp;
        sp.n = e_n;
        sp.k = k;
        sp.seed = ec.seed;
        const nklab::Landscape land(sp);
        if (e_law) {
            const nklab::GibbsSummary g = nklab::exact_overlap_law(land, e_beta);
            const nklab::OverlapLaw& law = *g.overlap_law;
            std::string body = "nq,nr,p\n";
            for (int nq = 0; nq <= e_n; ++nq)
                for (int nr = -e_n; nr <= e_n; nr += 2) {
                    const double p = law.at(nq, nr);
                    if (p > 0.0)
                        body += std::to_string(nq) + "," + std::to_string(nr) + "," +
                                format_value(p) + "\n";
                }
            ec.emit(body);
            return;
        }
        const nklab::GibbsSummary g = nklab::exact_free_energy(land, e_beta);
        const nklab::GroundStateResult gs = nklab::ground_state(land);
        std::vector<std::pair<std::string, std::string>> kv{
            {"n", std::to_string(e_n)},
            {"k", std::to_string(k)},
            {"beta", format_value(e_beta)},
            {"seed", std::to_string(ec.seed)},
            {"free_energy", format_value(g.free_energy)},
            {"mean_energy", format_value(g.mean_energy)},
            {"p_q1", format_value(g.p_q1)},
            {"max_fitness", format_value(gs.m)},
            {"argmax", std::to_string(gs.sigma_star.bits)},
        };
        if (ec.as_json) {
            ec.emit(kv_lines(kv, true));
        } else {
            std::string head, row;
            for (std::size_t i = 0; i < kv.size(); ++i) {
                if (i) head.push_back(','), row.push_back(',');
                head += kv[i].first;
                row += kv[i].second;
            }
            ec.emit(head + "\n" + row + "\n");
        }
    });

    // ---- sample ----
    auto* sample = app.add_subcommand("sample", "Markov-chain estimates on one instance");
    Common mc;
    mc.attach(sample);
    int m_n = 0, m_k = -1, m_chains = 4;
    double m_alpha = -1.0, m_beta = 1.0;
    std::int64_t m_steps = 100000;
    bool m_max = false;
    sample->add_option("--n", m_n, "ring length")->required();
    auto* m_kopt = sample->add_option("--k", m_k, "window reach");
    auto* m_aopt = sample->add_option("--alpha", m_alpha, "window ratio");
    sample->add_option("--beta", m_beta, "inverse temperature");
    sample->add_option("--steps", m_steps, "chain length");
    sample->add_option("--chains", m_chains, "tempering runs for --max");
    sample->add_flag("--max", m_max, "search for the maximum instead of sampling");
    sample->callback([&] {
        const int k = resolve_k(m_n, m_k, m_alpha, m_kopt->count() > 0, m_aopt->count() > 0);
        nklab::LandscapeSpec sp;
        sp.n = m_n;
        sp.k = k;
        sp.seed = mc.seed;
        const nklab::Landscape land(sp);
        std::vector<std::pair<std::string, std::string>> kv;
        if (m_max) {
            nklab::MaxEffort eff;
            eff.chains = m_chains;
            eff.steps = m_steps;
            eff.rng_seed = mc.seed;
            const nklab::MaxSearchResult res = nklab::estimate_max(land, eff);
            kv = {{"max_estimate", format_value(res.value)},
                  {"argmax", std::to_string(res.state.bits)}};
        } else {
            nklab::ChainConfig cfg;
            cfg.beta = m_beta;
            cfg.steps = m_steps;
            cfg.rng_seed = mc.seed;
            const nklab::ChainSummary sum = nklab::metropolis_chain(land, cfg);
            kv = {{"mean_energy", format_value(sum.mean_energy)},
                  {"std_error", format_value(sum.se_mean())},
                  {"acceptance_rate", format_value(sum.acceptance_rate)},
                  {"tau_int", format_value(sum.tau_int)},
                  {"best_fitness", format_value(sum.best_fitness)}};
        }
        mc.emit(kv_lines(kv, mc.as_json));
    });

    // ---- path ----
    auto* path = app.add_subcommand("path", "block-interpolation bridge audit");
    Common pc;
    pc.attach(path);
    int p_n = 0, p_k = -1, p_steps = 10;
    double p_alpha = -1.0;
    path->add_option("--n", p_n, "ring length")->required();
    path->add_option("--steps", p_steps, "number of rewrite steps");
    auto* p_kopt = path->add_option("--k", p_k, "window reach");
    auto* p_aopt = path->add_option("--alpha", p_alpha, "window ratio");
    path->callback([&] {
        const int k = resolve_k(p_n, p_k, p_alpha, p_kopt->count() > 0, p_aopt->count() > 0);
        nklab::LandscapeSpec sp;
        sp.n = p_n;
        sp.k = k;
        sp.seed = pc.seed;
        const nklab::Landscape land(sp);
        nklab::CounterRng rng(pc.seed, 0);
        const nklab::Genome from{rng.next_u64() & nklab::low_mask(p_n), p_n};
        const nklab::Genome to{rng.next_u64() & nklab::low_mask(p_n), p_n};
        const nklab::BridgePath bridge = nklab::build_bridge(from, to, p_steps);
        const nklab::PathReport rep = nklab::path_report(land, bridge);
        if (pc.as_json) {
            pc.emit(rep.to_json() + "\n");
            return;
        }
        std::string body = "l,Q,R,fitness\n";
        body += "0,1,1," + format_value(rep.fitness[0]) + "\n";
        for (int l = 1; l <= p_steps; ++l)
            body += std::to_string(l) + "," +
                    format_value(static_cast<double>(rep.nq[static_cast<std::size_t>(l - 1)]) / p_n) +
                    "," +
                    format_value(static_cast<double>(rep.nr[static_cast<std::size_t>(l - 1)]) / p_n) +
                    "," + format_value(rep.fitness[static_cast<std::size_t>(l)]) + "\n";
        pc.emit(body);
    });

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "run a registered experiment from a JSON config");
    Common sc;
    sc.attach(sweep);
    std::string s_config;
    bool s_dry = false;
    sweep->add_option("config", s_config, "config JSON file")->required()->check(CLI::ExistingFile);
    sweep->add_flag("--dry", s_dry, "validate and echo the resolved config only");
    sweep->callback([&] {
        std::ifstream f(s_config);
        std::stringstream buf;
        buf << f.rdbuf();
        nklab::ExperimentConfig cfg = nklab::ExperimentConfig::from_json(buf.str());
        if (!sc.out.empty()) cfg.out_dir = sc.out;
        if (sweep->count("--seed")) cfg.seeds.base = sc.seed;
        cfg.validate();
        if (s_dry) {
            std::cout << cfg.to_json() << "\n";
            return;
        }
        const nklab::RunResult res = nklab::run_experiment(cfg);
        for (const std::string& file : res.files) std::cout << file << "\n";
        std::cout << res.manifest_path << "\n";
        std::cout << (res.ok ? "ok" : "FAILED") << "\n";
        if (!res.ok) rc = 1;
    });

    // ---- orthant ----
    auto* orthant = app.add_subcommand("orthant", "bivariate normal joint tail");
    Common oc;
    oc.attach(orthant);
    double o_t = 0.0, o_x = 0.0, o_s = -1.0;
    int o_n = 0;
    bool o_bound = false;
    orthant->add_option("--t", o_t, "correlation")->required();
    auto* o_xopt = orthant->add_option("--x", o_x, "threshold");
    auto* o_sopt = orthant->add_option("--s", o_s, "level, threshold = s sqrt(n)");
    auto* o_nopt = orthant->add_option("--n", o_n, "ring length for --s");
    orthant->add_flag("--bound", o_bound, "include the analytic upper bound (needs --s/--n)");
    orthant->callback([&] {
        double x = o_x;
        if (o_sopt->count()) {
            if (!o_nopt->count()) throw CLI::ValidationError("--s needs --n");
            x = o_s * std::sqrt(static_cast<double>(o_n));
        } else if (!o_xopt->count()) {
            throw CLI::ValidationError("give --x, or --s with --n");
        }
        std::vector<std::pair<std::string, std::string>> kv{
            {"orthant_prob", format_value(nklab::orthant_prob(o_t, x))}};
        if (o_bound) {
            if (!o_sopt->count() || !o_nopt->count())
                throw CLI::ValidationError("--bound needs --s and --n");
            kv.emplace_back("upper_bound", format_value(nklab::orthant_upper_bound(o_t, o_s, o_n)));
        }
        oc.emit(kv_lines(kv, oc.as_json));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
