#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nklab/landscape.hpp"

namespace nklab {

/// Hard default caps on exhaustive scans. Single-genome scans walk 2^n
/// states, pair scans 4^n; exceeding a cap throws instead of truncating.
inline constexpr int kSingleScanLimit = 26;
inline constexpr int kPairScanLimit = 14;

/// Calls visit(bits, h) exactly once per genome, in a fixed order that
/// depends only on n. h is the incrementally maintained total fitness.
void scan_landscape(const Landscape& land,
                    const std::function<void(std::uint64_t, double)>& visit,
                    int scan_limit = kSingleScanLimit);

struct GroundStateResult {
    Genome sigma_star;
    double m = 0.0;  // max fitness density H/n
    std::uint64_t argmax_ties = 0;
};

GroundStateResult ground_state(const Landscape& land, int scan_limit = kSingleScanLimit);

/// |{g : H(g) >= s * n}|.
std::uint64_t level_set_count(const Landscape& land, double s,
                              int scan_limit = kSingleScanLimit);

struct LevelSetEntry {
    Genome g;
    double h = 0.0;  // total fitness
};

/// Level-set members sorted by descending fitness, ties by packed bits.
/// Throws when the set exceeds max_size entries.
std::vector<LevelSetEntry> collect_level_set(const Landscape& land, double s,
                                             std::size_t max_size = std::size_t{1} << 21,
                                             int scan_limit = kSingleScanLimit);

/// Exact joint law of (n*Q, n*R) for two independent Gibbs replicas.
struct OverlapLaw {
    int n = 0;
    std::vector<double> mass;  // (n+1) x (n+1), row nq, column (n + nr)/2

    double at(int nq, int nr) const;
    double total() const;
    double mean_q() const;
    /// Marginal P(n*R = nr).
    double r_marginal(int nr) const;
};

struct GibbsSummary {
    double beta = 0.0;
    double free_energy = 0.0;  // (1/n) ln sum e^{beta H}
    double mean_energy = 0.0;  // <H>_beta / n
    double p_q1 = 0.0;         // sum p(g)^2
    std::optional<OverlapLaw> overlap_law;
};

GibbsSummary exact_free_energy(const Landscape& land, double beta,
                               int scan_limit = kSingleScanLimit);

GibbsSummary exact_overlap_law(const Landscape& land, double beta,
                               int scan_limit = kPairScanLimit);

/// Pure predicate on the exact overlap pair of a genome pair.
struct ConstraintSet {
    std::string label;
    std::function<bool(int n, int nq, int nr)> admits;
};

ConstraintSet constraint_overlap_interior();              // 0 < Q < 1
ConstraintSet constraint_overlap_full();                  // Q = 1
ConstraintSet constraint_zero_overlap_far_r(double delta);  // Q = 0, |R| > delta
ConstraintSet constraint_r_band(double delta);            // delta < |R| < 1
ConstraintSet constraint_q_gap(double c1, double c2, double delta);
// Q in (0, c1 - delta] union [c2 + delta, 1)

struct CoupledMax {
    double value = 0.0;  // max of H(g1)/n + H(g2)/n over admissible pairs
    Genome first;
    Genome second;
};

/// Throws std::domain_error when the constraint admits no pair at this n.
CoupledMax coupled_max(const Landscape& land, const ConstraintSet& s,
                       int scan_limit = kPairScanLimit);

/// (1/n) ln sum over admissible pairs of e^{beta (H1 + H2)}. beta > 0.
double coupled_free_energy(const Landscape& land, const ConstraintSet& s, double beta,
                           int scan_limit = kPairScanLimit);

/// Count of genomes whose every single-site flip does not increase fitness.
std::uint64_t local_maxima_census(const Landscape& land, int scan_limit = kSingleScanLimit);

/// Greedy packing of the level set {H/n >= M - epsilon}, scanned in
/// descending fitness order; accepted members are pairwise at Q = 0 and
/// |R| < delta.
std::vector<Genome> peak_packing(const Landscape& land, double epsilon, double delta,
                                 int scan_limit = kSingleScanLimit);

}  // namespace nklab
