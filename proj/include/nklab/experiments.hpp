#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nklab {

struct SeedRange {
    std::uint64_t base = 1;
    int count = 1;
};

/// One experiment run: a registered experiment name, the parameter ranges it
/// sweeps (Cartesian product of whichever lists it reads), seed management,
/// effort knobs, and output placement. Parsed from a single JSON document.
struct ExperimentConfig {
    std::string experiment;
    std::vector<int> n_list;
    std::vector<int> k_list;         // either k_list or alpha_list selects k
    std::vector<double> alpha_list;  // k = floor(alpha * (n-1))
    std::vector<double> beta_list;
    std::vector<double> s_list;
    std::vector<double> delta_list;
    std::vector<int> p_list;
    SeedRange seeds;

    std::int64_t steps = 20000;  // chain length for sampled points
    int chains = 4;
    double grid_step = 0.05;   // thermodynamic integration
    int grid_points = 99;      // resolution of theory curves
    double epsilon = 0.5;      // peak packing level
    double eta = 0.2;          // path fitness slack
    int path_steps = 10;

    std::string out_dir = "out";
    std::string format = "csv";  // csv | jsonl

    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;
    void validate() const;
};

struct RunResult {
    bool ok = false;  // every hard assertion in the experiment passed
    std::vector<std::string> files;
    std::string manifest_path;
};

const std::vector<std::string>& experiment_names();

/// Executes the experiment, writes <experiment>.<format> and MANIFEST.json
/// under cfg.out_dir. Output bytes depend only on config and seeds; the
/// THREADS environment variable sets worker count and never changes them.
RunResult run_experiment(const ExperimentConfig& cfg);

/// 17-significant-digit, locale-independent float format used everywhere
/// results are serialized.
std::string format_value(double v);

}  // namespace nklab
