#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nklab/combinatorics.hpp"
#include "nklab/enumeration.hpp"
#include "nklab/experiments.hpp"
#include "nklab/landscape.hpp"
#include "nklab/paths.hpp"
#include "nklab/sampler.hpp"
#include "nklab/theory.hpp"

namespace py = pybind11;
using namespace nklab;

namespace {

py::object big_to_pyint(const BigInt& v) {
    return py::module_::import("builtins").attr("int")(v.str());
}

Genome as_genome(std::uint64_t bits, int n) { return Genome{bits & low_mask(n), n}; }

py::dict law_dict(const OverlapLaw& law) {
    py::dict cells;
    for (int nq = 0; nq <= law.n; ++nq)
        for (int nr = -law.n; nr <= law.n; nr += 2) {
            const double p = law.at(nq, nr);
            if (p > 0.0) cells[py::make_tuple(nq, nr)] = p;
        }
    py::dict d;
    d["n"] = law.n;
    d["cells"] = cells;
    d["mean_q"] = law.mean_q();
    d["total"] = law.total();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "NK fitness-landscape laboratory";

    py::enum_<CacheMode>(m, "CacheMode")
        .value("hashed", CacheMode::hashed)
        .value("table", CacheMode::table);

    py::class_<LandscapeSpec>(m, "LandscapeSpec")
        .def(py::init([](int n, int k, std::uint64_t seed) {
                 LandscapeSpec sp;
                 sp.n = n;
                 sp.k = k;
                 sp.seed = seed;
                 sp.validate();
                 return sp;
             }),
             py::arg("n"), py::arg("k"), py::arg("seed") = 1)
        .def_readwrite("n", &LandscapeSpec::n)
        .def_readwrite("k", &LandscapeSpec::k)
        .def_readwrite("seed", &LandscapeSpec::seed)
        .def_static("from_alpha", [](int n, double alpha, std::uint64_t seed) {
                return LandscapeSpec::from_alpha(n, alpha, seed);
            }, py::arg("n"), py::arg("alpha"), py::arg("seed") = 1)
        .def_static("k_from_alpha", &LandscapeSpec::k_from_alpha, py::arg("alpha"), py::arg("n"))
        .def("to_json", &LandscapeSpec::to_json)
        .def_static("from_json", &LandscapeSpec::from_json);

    py::class_<Landscape>(m, "Landscape")
        .def(py::init<const LandscapeSpec&>())
        .def_property_readonly("n", &Landscape::n)
        .def_property_readonly("k", &Landscape::k)
        .def("fitness",
             [](const Landscape& l, std::uint64_t bits) { return l.fitness(as_genome(bits, l.n())); })
        .def("fitness_density", [](const Landscape& l, std::uint64_t bits) {
            return l.fitness_density(as_genome(bits, l.n()));
        });

    m.def("overlap_q", [](std::uint64_t a, std::uint64_t b, int n, int k) {
        return overlap_q(as_genome(a, n), as_genome(b, n), k);
    });
    m.def("overlap_r", [](std::uint64_t a, std::uint64_t b, int n) {
        return overlap_r(as_genome(a, n), as_genome(b, n));
    });

    m.def("ground_state", [](const Landscape& land) {
        const GroundStateResult gs = ground_state(land);
        py::dict d;
        d["bits"] = gs.sigma_star.bits;
        d["max_fitness"] = gs.m;
        d["ties"] = gs.argmax_ties;
        return d;
    });

    m.def("exact_free_energy", [](const Landscape& land, double beta) {
        const GibbsSummary g = exact_free_energy(land, beta);
        py::dict d;
        d["beta"] = g.beta;
        d["free_energy"] = g.free_energy;
        d["mean_energy"] = g.mean_energy;
        d["p_q1"] = g.p_q1;
        return d;
    });

    m.def("exact_overlap_law", [](const Landscape& land, double beta) {
        const GibbsSummary g = exact_overlap_law(land, beta);
        py::dict d;
        d["beta"] = g.beta;
        d["free_energy"] = g.free_energy;
        d["p_q1"] = g.p_q1;
        d["law"] = law_dict(*g.overlap_law);
        return d;
    });

    m.def("count_by_overlap", [](int n, int k) {
        const CountTable t = count_by_overlap(n, k);
        py::dict d;
        for (int l = 0; l <= n; ++l)
            if (t.counts[static_cast<std::size_t>(l)] != 0)
                d[py::int_(l)] = big_to_pyint(t.counts[static_cast<std::size_t>(l)]);
        return d;
    });

    m.def("count_by_r", [](int n, int r) {
        const RLevelCount c = count_by_r(n, r);
        return py::make_tuple(big_to_pyint(c.count), c.entropy_bound_log2);
    });

    m.def("beta_c", &beta_c);
    m.def("alpha_star", &alpha_star);
    m.def("limiting_free_energy", &limiting_free_energy);
    m.def("entropy_h", &entropy_h);
    m.def("h_inverse", &h_inverse);
    m.def("rate_I", &rate_I);
    m.def("beta_p", &beta_p);
    m.def("mills_lower", &mills_lower);
    m.def("orthant_prob", &orthant_prob);
    m.def("orthant_upper_bound", &orthant_upper_bound);
    m.def("normal_quantile", &normal_quantile);
    m.def("gauss_sf", &gauss_sf);
    m.def("min_f", [](double alpha, double s) {
        const MinF r = min_f(alpha, s);
        return py::make_tuple(r.t_min, r.value);
    });
    m.def("gap_bounds", [](double alpha, double delta) {
        const GapBounds gb = gap_bounds(alpha, delta);
        py::dict d;
        d["alpha"] = gb.alpha();
        d["delta"] = gb.delta();
        d["rhs_q"] = gb.rhs_q();
        d["rhs_r"] = gb.rhs_r();
        d["energy_gap"] = gb.energy_gap();
        d["has_low_fields"] = gb.has_low_fields();
        if (gb.has_low_fields()) {
            d["c1"] = gb.c1();
            d["c2"] = gb.c2();
            d["delta_star"] = gb.delta_star();
        }
        if (gb.has_rhs_q_low()) d["rhs_q_low"] = gb.rhs_q_low();
        if (gb.has_rhs_r_low()) {
            d["rhs_r_low"] = gb.rhs_r_low();
            d["energy_gap_low"] = gb.energy_gap_low();
        }
        return d;
    });

    m.def("metropolis_chain",
          [](const Landscape& land, double beta, std::int64_t steps, std::uint64_t rng_seed) {
              ChainConfig cfg;
              cfg.beta = beta;
              cfg.steps = steps;
              cfg.rng_seed = rng_seed;
              const ChainSummary s = metropolis_chain(land, cfg, 0, false);
              py::dict d;
              d["mean_energy"] = s.mean_energy;
              d["std_error"] = s.se_mean();
              d["acceptance_rate"] = s.acceptance_rate;
              d["tau_int"] = s.tau_int;
              d["best_fitness"] = s.best_fitness;
              d["best_bits"] = s.best_state.bits;
              return d;
          },
          py::arg("land"), py::arg("beta"), py::arg("steps") = 100000, py::arg("rng_seed") = 1);

    m.def("estimate_free_energy",
          [](const LandscapeSpec& spec, double beta, int n_seeds, double grid_step,
             std::int64_t steps_per_point) {
              TiConfig ti;
              ti.grid_step = grid_step;
              ti.steps_per_point = steps_per_point;
              const EstimateWithError e = estimate_free_energy(spec, beta, n_seeds, ti);
              return py::make_tuple(e.value, e.std_error, e.n_samples);
          },
          py::arg("spec"), py::arg("beta"), py::arg("n_seeds") = 8, py::arg("grid_step") = 0.05,
          py::arg("steps_per_point") = 20000);

    m.def("estimate_max",
          [](const Landscape& land, int chains, std::int64_t steps, std::uint64_t rng_seed) {
              MaxEffort eff;
              eff.chains = chains;
              eff.steps = steps;
              eff.rng_seed = rng_seed;
              const MaxSearchResult r = estimate_max(land, eff);
              return py::make_tuple(r.value, r.state.bits);
          },
          py::arg("land"), py::arg("chains") = 4, py::arg("steps") = 20000, py::arg("rng_seed") = 1);

    m.def("build_bridge", [](std::uint64_t from, std::uint64_t to, int n, int n_steps) {
        const BridgePath p = build_bridge(as_genome(from, n), as_genome(to, n), n_steps);
        std::vector<std::uint64_t> nodes;
        for (const Genome& g : p.nodes) nodes.push_back(g.bits);
        return nodes;
    });

    m.def("path_report", [](const Landscape& land, std::uint64_t from, std::uint64_t to, int n_steps) {
        const BridgePath p = build_bridge(as_genome(from, land.n()), as_genome(to, land.n()), n_steps);
        const PathReport r = path_report(land, p);
        py::dict d;
        d["nq"] = r.nq;
        d["nr"] = r.nr;
        d["flips"] = r.flips;
        d["fitness"] = r.fitness;
        d["min_q"] = r.min_q;
        d["min_r"] = r.min_r;
        d["min_fitness"] = r.min_fitness;
        d["min_interior_fitness"] = r.min_interior_fitness;
        return d;
    });

    m.def("chaos_probe",
          [](const LandscapeSpec& spec, double s, int n_replicas) {
              ChaosEffort eff;
              eff.n_replicas = n_replicas;
              const EstimateWithError e = chaos_probe(spec, s, eff);
              return py::make_tuple(e.value, e.std_error, e.n_samples);
          },
          py::arg("spec"), py::arg("s"), py::arg("n_replicas") = 64);

    m.def("experiment_names", [] { return experiment_names(); });
    m.def("run_experiment", [](const std::string& config_json) {
        const RunResult r = run_experiment(ExperimentConfig::from_json(config_json));
        py::dict d;
        d["ok"] = r.ok;
        d["files"] = r.files;
        d["manifest"] = r.manifest_path;
        return d;
    });
}
