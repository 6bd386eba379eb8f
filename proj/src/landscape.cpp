#include "nklab/landscape.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace nklab {

std::string to_string(CacheMode m) {
    return m == CacheMode::hashed ? "hashed" : "table";
}

CacheMode cache_mode_from_string(const std::string& s) {
    if (s == "hashed") return CacheMode::hashed;
    if (s == "table") return CacheMode::table;
    throw std::invalid_argument("unknown cache mode: " + s);
}

int LandscapeSpec::k_from_alpha(double alpha, int n) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha outside [0,1]");
    // The 1e-9 nudge keeps products like 0.3 * 10 from flooring one short.
    return static_cast<int>(std::floor(alpha * (n - 1) + 1e-9));
}

LandscapeSpec LandscapeSpec::from_alpha(int n, double alpha, std::uint64_t seed, CacheMode cache) {
    LandscapeSpec s;
    s.n = n;
    s.k = k_from_alpha(alpha, n);
    s.alpha = alpha;
    s.seed = seed;
    s.cache = cache;
    s.validate();
    return s;
}

void LandscapeSpec::validate() const {
    if (n < 1 || n > kMaxSites) throw std::invalid_argument("n outside [1,64]");
    if (k < 0 || k > n - 1) throw std::invalid_argument("k outside [0,n-1]");
    if (alpha) {
        if (*alpha < 0.0 || *alpha > 1.0) throw std::invalid_argument("alpha outside [0,1]");
        if (k != k_from_alpha(*alpha, n))
            throw std::invalid_argument("k inconsistent with alpha");
    }
    if (cache == CacheMode::table && k + 1 > 24)
        throw std::invalid_argument("table cache requires k+1 <= 24");
}

std::string LandscapeSpec::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["k"] = k;
    if (alpha) j["alpha"] = *alpha;
    j["seed"] = seed;
    j["cache_mode"] = to_string(cache);
    return j.dump();
}

LandscapeSpec LandscapeSpec::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    LandscapeSpec s;
    s.n = j.at("n").get<int>();
    s.k = j.at("k").get<int>();
    if (j.contains("alpha") && !j["alpha"].is_null()) s.alpha = j["alpha"].get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("cache_mode")) s.cache = cache_mode_from_string(j["cache_mode"].get<std::string>());
    s.validate();
    return s;
}

Landscape::Landscape(const LandscapeSpec& spec)
    : Landscape(spec.n, spec.k, {{1.0, spec.seed}}, spec.cache) {
    spec_ = spec;
    spec_.validate();
}

Landscape::Landscape(int n, int k, std::vector<Field> fields, CacheMode cache)
    : n_(n), k_(k), word_mask_(low_mask(k + 1)), fields_(std::move(fields)), cache_(cache) {
    if (fields_.empty()) throw std::invalid_argument("landscape needs at least one field");
    spec_.n = n;
    spec_.k = k;
    spec_.seed = fields_.front().seed;
    spec_.cache = cache;
    spec_.validate();
    if (cache_ == CacheMode::table) build_table();
}

void Landscape::build_table() {
    if (k_ + 1 > 24) throw std::invalid_argument("table cache requires k+1 <= 24");
    const std::size_t words = 1ULL << (k_ + 1);
    table_.assign(static_cast<std::size_t>(n_) * words, 0.0);
    for (int i = 0; i < n_; ++i)
        for (std::uint64_t w = 0; w < words; ++w)
            table_[static_cast<std::size_t>(i) * words + w] = component_hashed(i, w);
}

double Landscape::component_hashed(int i, std::uint64_t word) const {
    double v = 0.0;
    for (const Field& f : fields_)
        v += f.weight * gaussian_from_hash(hash3(f.seed ^ kDisorderStream,
                                                 static_cast<std::uint64_t>(i), word));
    return v;
}

double Landscape::component(int i, std::uint64_t word) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("component: site out of range");
    if (word & ~word_mask_) throw std::invalid_argument("component: word wider than k+1 bits");
    if (cache_ == CacheMode::table)
        return table_[(static_cast<std::size_t>(i) << (k_ + 1)) + word];
    return component_hashed(i, word);
}

double Landscape::fitness(const Genome& g) const {
    double h = 0.0;
    if (cache_ == CacheMode::table) {
        for (int i = 0; i < n_; ++i)
            h += table_[(static_cast<std::size_t>(i) << (k_ + 1)) + window_word(g.bits, i)];
    } else {
        for (int i = 0; i < n_; ++i) h += component_hashed(i, window_word(g.bits, i));
    }
    return h;
}

double Landscape::delta_fitness(const Genome& g, int j) const {
    if (j < 0 || j >= n_) throw std::invalid_argument("delta_fitness: site out of range");
    double d = 0.0;
    if (cache_ == CacheMode::table) {
        for (int m = 0; m <= k_; ++m) {
            const int i = j - m >= 0 ? j - m : j - m + n_;
            const std::uint64_t w = window_word(g.bits, i);
            const std::size_t base = static_cast<std::size_t>(i) << (k_ + 1);
            d += table_[base + (w ^ (1ULL << m))] - table_[base + w];
        }
    } else {
        for (int m = 0; m <= k_; ++m) {
            const int i = j - m >= 0 ? j - m : j - m + n_;
            const std::uint64_t w = window_word(g.bits, i);
            d += component_hashed(i, w ^ (1ULL << m)) - component_hashed(i, w);
        }
    }
    return d;
}

std::pair<double, double> Landscape::split_fitness(const Genome& g, int n1) const {
    if (n1 < 0 || n1 > n_) throw std::invalid_argument("split_fitness: cut out of range");
    double v1 = 0.0, v2 = 0.0;
    for (int i = 0; i + k_ <= n1 - 1; ++i)
        v1 += component(i, (g.bits >> i) & word_mask_);
    for (int i = n1; i + k_ <= n_ - 1; ++i)
        v2 += component(i, (g.bits >> i) & word_mask_);
    return {v1, v2};
}

Genome Landscape::random_genome(CounterRng& rng) const {
    return {rng.next_u64() & low_mask(n_), n_};
}

CorrelatedPair make_correlated_pair(const LandscapeSpec& base, double s) {
    return make_correlated_pair(base, s, derive_seed(base.seed, 1), derive_seed(base.seed, 2));
}

CorrelatedPair make_correlated_pair(const LandscapeSpec& base, double s,
                                    std::uint64_t copy1_seed, std::uint64_t copy2_seed) {
    base.validate();
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("correlation s outside [0,1]");
    const double w_base = std::sqrt(s);
    const double w_copy = std::sqrt(1.0 - s);
    std::vector<Landscape::Field> f1{{w_base, base.seed}, {w_copy, copy1_seed}};
    std::vector<Landscape::Field> f2{{w_base, base.seed}, {w_copy, copy2_seed}};
    return {Landscape(base.n, base.k, std::move(f1), base.cache),
            Landscape(base.n, base.k, std::move(f2), base.cache), s};
}

int nq_from_agreement(std::uint64_t mask, int n, int k) {
    std::uint64_t acc = mask;
    for (int j = 1; j <= k; ++j) acc &= rotr_n(mask, j % n, n);
    return std::popcount(acc);
}

int nq_scalar(const Genome& a, const Genome& b, int k) {
    if (a.n != b.n) throw std::invalid_argument("overlap: genome lengths differ");
    if (k < 0 || k > a.n - 1) throw std::invalid_argument("overlap: k outside [0,n-1]");
    return nq_from_agreement(agreement_mask(a, b), a.n, k);
}

int nq_one_scalar(const Genome& a, int k) {
    if (k < 0 || k > a.n - 1) throw std::invalid_argument("overlap: k outside [0,n-1]");
    return nq_from_agreement(a.bits & low_mask(a.n), a.n, k);
}

int nr_scalar(const Genome& a, const Genome& b) {
    if (a.n != b.n) throw std::invalid_argument("overlap: genome lengths differ");
    return a.n - 2 * hamming(a, b);
}

double windowed_overlap(const Genome& a, const Genome& b, int i, int k) {
    if (a.n != b.n) throw std::invalid_argument("overlap: genome lengths differ");
    if (k < 0 || k > a.n - 1) throw std::invalid_argument("overlap: k outside [0,n-1]");
    if (i < 0 || i >= a.n) throw std::invalid_argument("overlap: window start out of range");
    const std::uint64_t win = rotr_n(agreement_mask(a, b), i, a.n) & low_mask(k + 1);
    const int agree = std::popcount(win);
    return static_cast<double>(2 * agree - (k + 1)) / (k + 1);
}

}  // namespace nklab
