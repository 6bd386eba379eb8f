#include "nklab/enumeration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_scan(const Landscape& land, int limit) {
    if (land.n() > limit)
        throw std::invalid_argument("scan limit exceeded: n=" + std::to_string(land.n()) +
                                    " > " + std::to_string(limit));
}

// Scans one contiguous block of reflected-Gray indices. The walk re-derives
// its starting fitness from scratch, so incremental error never crosses a
// block boundary.
template <class V>
void scan_block(const Landscape& land, std::uint64_t begin, std::uint64_t end, V&& visit) {
    const int n = land.n();
    Genome g{(begin ^ (begin >> 1)) & low_mask(n), n};
    double h = land.fitness(g);
    visit(g.bits, h);
    for (std::uint64_t idx = begin + 1; idx < end; ++idx) {
        const int j = std::countr_zero(idx);
        h += land.delta_fitness(g, j);
        g.flip(j);
        visit(g.bits, h);
    }
}

// Block count is fixed by n alone, never by worker count, so merged results
// are byte-identical however the blocks are scheduled.
template <class V>
void scan_all(const Landscape& land, V&& visit) {
    const int n = land.n();
    const std::uint64_t total = std::uint64_t{1} << n;
    const int shift = std::clamp(n - 18, 0, 6);
    const std::uint64_t blocks = std::uint64_t{1} << shift;
    const std::uint64_t size = total >> shift;
    for (std::uint64_t b = 0; b < blocks; ++b)
        scan_block(land, b * size, (b + 1) * size, visit);
}

// Streaming log-sum-exp triple: partition sum, squared-weight sum (for the
// replica-coincidence mass), and energy-weighted sum, all relative to the
// running max so nothing overflows at large beta.
struct GibbsAcc {
    double beta = 0.0;
    double max_h = -kInf;
    double s1 = 0.0, s2 = 0.0, sh = 0.0;
    std::uint64_t count = 0;

    explicit GibbsAcc(double b) : beta(b) {}

    void add(double h) {
        if (count == 0) {
            max_h = h;
        } else if (h > max_h) {
            const double sc = std::exp(beta * (max_h - h));
            s1 *= sc;
            s2 *= sc * sc;
            sh *= sc;
            max_h = h;
        }
        const double e = std::exp(beta * (h - max_h));
        s1 += e;
        s2 += e * e;
        sh += h * e;
        ++count;
    }

    void merge(const GibbsAcc& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double m = std::max(max_h, o.max_h);
        const double sa = std::exp(beta * (max_h - m));
        const double sb = std::exp(beta * (o.max_h - m));
        s1 = s1 * sa + o.s1 * sb;
        s2 = s2 * sa * sa + o.s2 * sb * sb;
        sh = sh * sa + o.sh * sb;
        max_h = m;
        count += o.count;
    }
};

GibbsAcc gibbs_scan(const Landscape& land, double beta) {
    const int n = land.n();
    const std::uint64_t total = std::uint64_t{1} << n;
    const int shift = std::clamp(n - 18, 0, 6);
    const std::uint64_t blocks = std::uint64_t{1} << shift;
    const std::uint64_t size = total >> shift;
    GibbsAcc merged(beta);
    for (std::uint64_t b = 0; b < blocks; ++b) {
        GibbsAcc local(beta);
        scan_block(land, b * size, (b + 1) * size,
                   [&](std::uint64_t, double h) { local.add(h); });
        merged.merge(local);
    }
    return merged;
}

std::vector<double> fitness_table(const Landscape& land) {
    std::vector<double> t(std::size_t{1} << land.n());
    scan_all(land, [&](std::uint64_t bits, double h) { t[bits] = h; });
    return t;
}

// In-place Walsh transform; applied twice it scales by 2^n.
void walsh(std::vector<double>& a) {
    const std::size_t size = a.size();
    for (std::size_t len = 1; len < size; len <<= 1)
        for (std::size_t i = 0; i < size; i += len << 1)
            for (std::size_t j = i; j < i + len; ++j) {
                const double u = a[j];
                const double v = a[j + len];
                a[j] = u + v;
                a[j + len] = u - v;
            }
}

std::vector<std::uint64_t> admissible_patterns(const Landscape& land, const ConstraintSet& s) {
    const int n = land.n();
    const int k = land.k();
    const std::uint64_t mask = low_mask(n);
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 0; d <= mask; ++d) {
        const int nq = nq_from_agreement(~d & mask, n, k);
        const int nr = n - 2 * std::popcount(d);
        if (s.admits(n, nq, nr)) out.push_back(d);
    }
    return out;
}

}  // namespace

void scan_landscape(const Landscape& land,
                    const std::function<void(std::uint64_t, double)>& visit,
                    int scan_limit) {
    check_scan(land, scan_limit);
    scan_all(land, [&](std::uint64_t bits, double h) { visit(bits, h); });
}

GroundStateResult ground_state(const Landscape& land, int scan_limit) {
    check_scan(land, scan_limit);
    double best = -kInf;
    std::uint64_t best_bits = 0;
    std::uint64_t ties = 0;
    scan_all(land, [&](std::uint64_t bits, double h) {
        if (h > best) {
            best = h;
            best_bits = bits;
            ties = 1;
        } else if (h == best) {
            ++ties;
            best_bits = std::min(best_bits, bits);
        }
    });
    return {Genome{best_bits, land.n()}, best / land.n(), ties};
}

std::uint64_t level_set_count(const Landscape& land, double s, int scan_limit) {
    check_scan(land, scan_limit);
    if (std::isnan(s)) throw std::invalid_argument("threshold must not be NaN");
    const double thr = s * land.n();
    std::uint64_t count = 0;
    scan_all(land, [&](std::uint64_t, double h) {
        if (h >= thr) ++count;
    });
    return count;
}

std::vector<LevelSetEntry> collect_level_set(const Landscape& land, double s,
                                             std::size_t max_size, int scan_limit) {
    check_scan(land, scan_limit);
    if (std::isnan(s)) throw std::invalid_argument("threshold must not be NaN");
    const double thr = s * land.n();
    const int n = land.n();
    std::vector<LevelSetEntry> out;
    scan_all(land, [&](std::uint64_t bits, double h) {
        if (h < thr) return;
        if (out.size() >= max_size) throw std::length_error("level set too large to collect");
        out.push_back({Genome{bits, n}, h});
    });
    std::sort(out.begin(), out.end(), [](const LevelSetEntry& a, const LevelSetEntry& b) {
        return a.h > b.h || (a.h == b.h && a.g.bits < b.g.bits);
    });
    return out;
}

double OverlapLaw::at(int nq, int nr) const {
    if (nq < 0 || nq > n || nr < -n || nr > n || (n + nr) % 2 != 0)
        throw std::invalid_argument("overlap cell out of range");
    return mass[static_cast<std::size_t>(nq) * (n + 1) + (n + nr) / 2];
}

double OverlapLaw::total() const {
    double t = 0.0;
    for (double v : mass) t += v;
    return t;
}

double OverlapLaw::mean_q() const {
    double t = 0.0;
    for (int nq = 0; nq <= n; ++nq)
        for (int ri = 0; ri <= n; ++ri)
            t += mass[static_cast<std::size_t>(nq) * (n + 1) + ri] * nq;
    return t / n;
}

double OverlapLaw::r_marginal(int nr) const {
    if (nr < -n || nr > n || (n + nr) % 2 != 0)
        throw std::invalid_argument("overlap cell out of range");
    const int ri = (n + nr) / 2;
    double t = 0.0;
    for (int nq = 0; nq <= n; ++nq) t += mass[static_cast<std::size_t>(nq) * (n + 1) + ri];
    return t;
}

GibbsSummary exact_free_energy(const Landscape& land, double beta, int scan_limit) {
    check_scan(land, scan_limit);
    if (!(beta >= 0.0)) throw std::domain_error("beta must be nonnegative");
    const GibbsAcc acc = gibbs_scan(land, beta);
    GibbsSummary out;
    out.beta = beta;
    out.free_energy = (beta * acc.max_h + std::log(acc.s1)) / land.n();
    out.mean_energy = acc.sh / acc.s1 / land.n();
    out.p_q1 = acc.s2 / (acc.s1 * acc.s1);
    return out;
}

GibbsSummary exact_overlap_law(const Landscape& land, double beta, int scan_limit) {
    check_scan(land, scan_limit);
    if (!(beta >= 0.0)) throw std::domain_error("beta must be nonnegative");
    const int n = land.n();
    const int k = land.k();
    const std::uint64_t mask = low_mask(n);

    std::vector<double> htab = fitness_table(land);
    const double hmax = *std::max_element(htab.begin(), htab.end());
    std::vector<double> p(htab.size());
    double z = 0.0;
    for (std::size_t g = 0; g < htab.size(); ++g) {
        p[g] = std::exp(beta * (htab[g] - hmax));
        z += p[g];
    }
    GibbsSummary out;
    out.beta = beta;
    out.free_energy = (beta * hmax + std::log(z)) / n;
    double mean = 0.0, pq1 = 0.0;
    for (std::size_t g = 0; g < htab.size(); ++g) {
        p[g] /= z;
        mean += htab[g] * p[g];
        pq1 += p[g] * p[g];
    }
    out.mean_energy = mean / n;
    out.p_q1 = pq1;

    // XOR self-convolution: w[d] = sum_g p(g) p(g^d), the pair mass carried
    // by each difference pattern.
    std::vector<double> w = p;
    walsh(w);
    for (double& v : w) v *= v;
    walsh(w);
    const double scale = 1.0 / static_cast<double>(std::uint64_t{1} << n);
    OverlapLaw law;
    law.n = n;
    law.mass.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    for (std::uint64_t d = 0; d <= mask; ++d) {
        const int nq = nq_from_agreement(~d & mask, n, k);
        const int ri = n - std::popcount(d);
        law.mass[static_cast<std::size_t>(nq) * (n + 1) + ri] += w[d] * scale;
    }
    for (double& v : law.mass) v = std::max(v, 0.0);
    out.overlap_law = std::move(law);
    return out;
}

ConstraintSet constraint_overlap_interior() {
    return {"0<Q<1", [](int n, int nq, int) { return nq > 0 && nq < n; }};
}

ConstraintSet constraint_overlap_full() {
    return {"Q=1", [](int n, int nq, int) { return nq == n; }};
}

ConstraintSet constraint_zero_overlap_far_r(double delta) {
    return {"Q=0,|R|>d", [delta](int n, int nq, int nr) {
                return nq == 0 && std::abs(nr) > delta * n;
            }};
}

ConstraintSet constraint_r_band(double delta) {
    return {"d<|R|<1", [delta](int n, int, int nr) {
                const int a = std::abs(nr);
                return a > delta * n && a < n;
            }};
}

ConstraintSet constraint_q_gap(double c1, double c2, double delta) {
    return {"Q gap", [c1, c2, delta](int n, int nq, int) {
                if (nq <= 0 || nq >= n) return false;
                const double q = static_cast<double>(nq) / n;
                return q <= c1 - delta || q >= c2 + delta;
            }};
}

CoupledMax coupled_max(const Landscape& land, const ConstraintSet& s, int scan_limit) {
    check_scan(land, scan_limit);
    const int n = land.n();
    const std::vector<std::uint64_t> adm = admissible_patterns(land, s);
    if (adm.empty()) throw std::domain_error("constraint set admits no pair at this n");
    const std::vector<double> htab = fitness_table(land);
    CoupledMax out;
    double best = -kInf;
    for (const std::uint64_t d : adm) {
        for (std::uint64_t g = 0; g < htab.size(); ++g) {
            const double v = htab[g] + htab[g ^ d];
            if (v > best) {
                best = v;
                out.first = {g, n};
                out.second = {g ^ d, n};
            }
        }
    }
    out.value = best / n;
    return out;
}

double coupled_free_energy(const Landscape& land, const ConstraintSet& s, double beta,
                           int scan_limit) {
    check_scan(land, scan_limit);
    if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
    const int n = land.n();
    const std::vector<std::uint64_t> adm = admissible_patterns(land, s);
    if (adm.empty()) throw std::domain_error("constraint set admits no pair at this n");
    const std::vector<double> htab = fitness_table(land);
    double vmax = -kInf;
    for (const std::uint64_t d : adm)
        for (std::uint64_t g = 0; g < htab.size(); ++g)
            vmax = std::max(vmax, htab[g] + htab[g ^ d]);
    double sum = 0.0;
    for (const std::uint64_t d : adm)
        for (std::uint64_t g = 0; g < htab.size(); ++g)
            sum += std::exp(beta * (htab[g] + htab[g ^ d] - vmax));
    return (beta * vmax + std::log(sum)) / n;
}

std::uint64_t local_maxima_census(const Landscape& land, int scan_limit) {
    check_scan(land, scan_limit);
    const int n = land.n();
    std::uint64_t count = 0;
    if (n <= 20) {
        const std::vector<double> htab = fitness_table(land);
        for (std::uint64_t g = 0; g < htab.size(); ++g) {
            bool is_max = true;
            for (int j = 0; j < n && is_max; ++j)
                is_max = htab[g ^ (std::uint64_t{1} << j)] <= htab[g];
            if (is_max) ++count;
        }
    } else {
        scan_all(land, [&](std::uint64_t bits, double) {
            const Genome g{bits, n};
            for (int j = 0; j < n; ++j)
                if (land.delta_fitness(g, j) > 0.0) return;
            ++count;
        });
    }
    return count;
}

std::vector<Genome> peak_packing(const Landscape& land, double epsilon, double delta,
                                 int scan_limit) {
    check_scan(land, scan_limit);
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    const int n = land.n();
    const int k = land.k();
    const GroundStateResult gs = ground_state(land, scan_limit);
    // small slack keeps the maximizer itself in the set despite incremental
    // rounding between the two scans
    const std::vector<LevelSetEntry> lvl =
        collect_level_set(land, gs.m - epsilon - 1e-9, std::size_t{1} << 21, scan_limit);
    std::vector<Genome> out;
    for (const LevelSetEntry& e : lvl) {
        bool ok = true;
        for (const Genome& g : out) {
            if (nq_scalar(e.g, g, k) != 0 || std::abs(nr_scalar(e.g, g)) >= delta * n) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(e.g);
    }
    return out;
}

}  // namespace nklab
