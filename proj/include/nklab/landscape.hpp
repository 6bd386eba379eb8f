#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nklab/bits.hpp"
#include "nklab/rng.hpp"

namespace nklab {

/// How a landscape evaluates its interaction components.
///  - hashed: every component is recomputed from the seed on demand. O(1)
///    memory, works for any k.
///  - table: all n * 2^(k+1) components are materialized once at
///    construction. Only permitted for k + 1 <= 24.
enum class CacheMode { hashed, table };

std::string to_string(CacheMode m);
CacheMode cache_mode_from_string(const std::string& s);

/// Immutable description of one landscape instance.
///
/// n sites on a ring, each site i interacting with its k clockwise
/// neighbours; component values are standard normal, derived
/// deterministically from (seed, site, window state). When alpha is given,
/// k = floor(alpha * (n - 1)) and the stored k must match.
struct LandscapeSpec {
    int n = 0;
    int k = 0;
    std::optional<double> alpha;
    std::uint64_t seed = 0;
    CacheMode cache = CacheMode::hashed;

    static int k_from_alpha(double alpha, int n);

    /// Spec with k computed from alpha.
    static LandscapeSpec from_alpha(int n, double alpha, std::uint64_t seed,
                                    CacheMode cache = CacheMode::hashed);

    /// Throws std::invalid_argument when any field is out of range.
    void validate() const;

    std::string to_json() const;
    static LandscapeSpec from_json(const std::string& text);

    bool operator==(const LandscapeSpec&) const = default;
};

/// A realized fitness landscape: H(g) = sum_i X_i(window_i(g)).
///
/// A landscape is in general a weighted sum of independent disorder fields
/// sharing (n, k); the single-field case has weight 1. Weighted sums are what
/// correlated ensembles interpolate through, and every operation (fitness,
/// deltas, exhaustive scans, chains) works on them transparently.
class Landscape {
  public:
    struct Field {
        double weight = 1.0;
        std::uint64_t seed = 0;
    };

    explicit Landscape(const LandscapeSpec& spec);
    Landscape(int n, int k, std::vector<Field> fields, CacheMode cache);

    int n() const { return n_; }
    int k() const { return k_; }
    const LandscapeSpec& spec() const { return spec_; }
    const std::vector<Field>& fields() const { return fields_; }
    CacheMode cache_mode() const { return cache_; }

    /// The k+1 consecutive site bits starting at site i, packed low-first.
    std::uint64_t window_word(std::uint64_t bits, int i) const {
        return rotr_n(bits, i, n_) & word_mask_;
    }

    /// Interaction component X_i evaluated at a packed window state.
    double component(int i, std::uint64_t word) const;

    /// Total fitness H(g).
    double fitness(const Genome& g) const;

    /// Fitness per site, H(g)/n.
    double fitness_density(const Genome& g) const { return fitness(g) / n_; }

    /// H(g with site j flipped) - H(g). Touches exactly the k+1 windows
    /// containing site j.
    double delta_fitness(const Genome& g, int j) const;

    /// Fitness of the two halves of a cut ring: the first value sums the
    /// windows fully inside sites [0, n1), the second those fully inside
    /// [n1, n). Windows straddling either cut belong to neither half; a half
    /// shorter than k+1 sites contributes zero.
    std::pair<double, double> split_fitness(const Genome& g, int n1) const;

    Genome random_genome(CounterRng& rng) const;

  private:
    void build_table();
    double component_hashed(int i, std::uint64_t word) const;

    int n_;
    int k_;
    std::uint64_t word_mask_;
    std::vector<Field> fields_;
    CacheMode cache_;
    LandscapeSpec spec_;
    std::vector<double> table_;  // cache == table: [i * 2^(k+1) + word]
};

/// Two landscapes with correlation s in every component:
/// H_j = sqrt(s) * base + sqrt(1-s) * copy_j, with independent copies.
/// s = 1 gives two identical landscapes, s = 0 two independent ones.
struct CorrelatedPair {
    Landscape first;
    Landscape second;
    double s = 1.0;
};

/// Copy seeds derived deterministically from the base seed.
CorrelatedPair make_correlated_pair(const LandscapeSpec& base, double s);
CorrelatedPair make_correlated_pair(const LandscapeSpec& base, double s,
                                    std::uint64_t copy1_seed, std::uint64_t copy2_seed);

/// n * Q(a, b): the number of ring windows on which a and b agree at every
/// site. A window of k+1 sites counts iff it lies inside a common agreement
/// run; a maximal agreement run of length L contributes max(L - k, 0), and
/// full agreement contributes n.
int nq_scalar(const Genome& a, const Genome& b, int k);

/// n * Q(a, 1): agreement windows against the all-plus genome.
int nq_one_scalar(const Genome& a, int k);

/// Same window count evaluated on a packed agreement mask.
int nq_from_agreement(std::uint64_t mask, int n, int k);

/// n * R(a, b) = sum_i a_i b_i as an exact integer.
int nr_scalar(const Genome& a, const Genome& b);

inline double overlap_q(const Genome& a, const Genome& b, int k) {
    return static_cast<double>(nq_scalar(a, b, k)) / a.n;
}
inline double overlap_r(const Genome& a, const Genome& b) {
    return static_cast<double>(nr_scalar(a, b)) / a.n;
}

/// Window-resolved site overlap (1/(k+1)) * sum_{j=0..k} a_{i+j} b_{i+j}.
double windowed_overlap(const Genome& a, const Genome& b, int i, int k);

}  // namespace nklab
