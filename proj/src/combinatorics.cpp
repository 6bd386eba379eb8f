#include "nklab/combinatorics.hpp"

#include <stdexcept>

#include "nklab/landscape.hpp"
#include "nklab/theory.hpp"

namespace nklab {

BigInt CountTable::total() const {
    BigInt t = 0;
    for (const BigInt& c : counts) t += c;
    return t;
}

nlohmann::ordered_json CountTable::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["k"] = k;
    nlohmann::ordered_json cj = nlohmann::ordered_json::object();
    for (int l = 0; l <= n; ++l) {
        if (counts[static_cast<std::size_t>(l)] != 0)
            cj[std::to_string(l)] = counts[static_cast<std::size_t>(l)].str();
    }
    j["counts"] = cj;
    return j;
}

CountTable CountTable::from_json(const nlohmann::json& j) {
    CountTable t;
    t.n = j.at("n").get<int>();
    t.k = j.at("k").get<int>();
    t.counts.assign(static_cast<std::size_t>(t.n) + 1, BigInt(0));
    for (const auto& [key, val] : j.at("counts").items()) {
        int l = std::stoi(key);
        if (l < 0 || l > t.n) throw std::invalid_argument("count index out of range");
        t.counts[static_cast<std::size_t>(l)] = BigInt(val.get<std::string>());
    }
    return t;
}

static void check_table_params(int n, int k, int n_max) {
    if (n < 2 || n > n_max) throw std::invalid_argument("n out of range");
    if (k < 1 || k > n - 1) throw std::invalid_argument("k out of range");
}

// A maximal circular run of L agreeing sites covers L-k full windows when
// L >= k+1 and none otherwise; the all-agree genome is the one exception
// (n windows, not n-k). The DP walks the n-1 sites after an anchored prefix:
// condition on f = length of the run of 1s starting at site 0, which forces
// site f to 0, then scan sites f+1..n-1 left to right.
//
// State: (t, s) where t is the trailing run length capped at k+1 and s the
// score paid so far. Runs pay 1 on reaching length k+1 plus 1 per site beyond
// the cap; paying the base at close time and the excess immediately keeps
// t bounded while s stays exact. The wrap joins the trailing run to the
// anchored prefix: with both lengths capped and excesses prepaid, the joined
// run pays max(t + min(f,k+1) - k, 0) more, in every case.
CountTable count_by_overlap(int n, int k) {
    check_table_params(n, k, 64);
    const int cap = k + 1;  // cap <= n since k <= n-1

    CountTable table;
    table.n = n;
    table.k = k;
    table.counts.assign(static_cast<std::size_t>(n) + 1, BigInt(0));
    table.counts[static_cast<std::size_t>(n)] = 1;  // all-agree

    // ways[t][s]
    std::vector<std::vector<BigInt>> ways, next;
    const auto zero_grid = [&] {
        return std::vector<std::vector<BigInt>>(
            static_cast<std::size_t>(cap) + 1,
            std::vector<BigInt>(static_cast<std::size_t>(n) + 1, BigInt(0)));
    };

    for (int f = 0; f <= n - 1; ++f) {
        const int f_obs = f < cap ? f : cap;
        const int f_excess = f - f_obs;  // prepaid prefix score
        const int free_sites = n - 1 - f;

        ways = zero_grid();
        ways[0][static_cast<std::size_t>(f_excess)] = 1;

        for (int site = 0; site < free_sites; ++site) {
            next = zero_grid();
            for (int t = 0; t <= cap; ++t) {
                for (int s = 0; s <= n; ++s) {
                    const BigInt& w = ways[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
                    if (w == 0) continue;
                    // site disagrees: close the trailing run
                    const int s_closed = s + (t == cap ? 1 : 0);
                    next[0][static_cast<std::size_t>(s_closed)] += w;
                    // site agrees: extend, paying excess at the cap
                    if (t < cap)
                        next[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(s)] += w;
                    else
                        next[static_cast<std::size_t>(cap)][static_cast<std::size_t>(s + 1)] += w;
                }
            }
            ways.swap(next);
        }

        for (int t = 0; t <= cap; ++t) {
            for (int s = 0; s <= n; ++s) {
                const BigInt& w = ways[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
                if (w == 0) continue;
                int wrap = t + f_obs - k;
                if (wrap < 0) wrap = 0;
                table.counts[static_cast<std::size_t>(s + wrap)] += w;
            }
        }
    }
    return table;
}

CountTable count_by_overlap_bruteforce(int n, int k) {
    check_table_params(n, k, 20);
    CountTable table;
    table.n = n;
    table.k = k;
    table.counts.assign(static_cast<std::size_t>(n) + 1, BigInt(0));
    for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
        Genome g{bits, n};
        table.counts[static_cast<std::size_t>(nq_one_scalar(g, k))] += 1;
    }
    return table;
}

CountBoundReport count_bound_check(const CountTable& table) {
    const int n = table.n;
    const int k = table.k;
    if (static_cast<int>(table.counts.size()) != n + 1)
        throw std::invalid_argument("count table incomplete");

    CountBoundReport report;
    report.n = n;
    report.k = k;
    // n^2 <= 2^(k-1), in integers
    report.applicable = (BigInt(n) * n * 2) <= (BigInt(1) << k);
    report.all_hold = true;
    for (int l = 1; l <= n - k - 1; ++l) {
        CountBoundRow row;
        row.l = l;
        row.count = table.counts[static_cast<std::size_t>(l)];
        row.bound = BigInt(n) << (n - (k + l));
        row.holds = row.count <= row.bound;
        if (!row.holds) report.all_hold = false;
        report.rows.push_back(std::move(row));
    }
    return report;
}

BigInt tightness_lower_bound(int n, int k, int l) {
    check_table_params(n, k, 64);
    if (l < 1 || l > n - k - 1) throw std::invalid_argument("l out of range");
    const int base = n - k - l - 1;  // >= 0 by the range check
    const int exponent = base - base / (k + 1);
    return BigInt(n) << exponent;
}

RLevelCount count_by_r(int n, int r_numerator) {
    if (n < 1 || n > 64) throw std::invalid_argument("n out of range");
    const int r = r_numerator;
    if (r < -n || r > n) throw std::invalid_argument("r out of range");
    if ((n + r) % 2 != 0) throw std::invalid_argument("r must have the parity of n");

    const int m = (n + r) / 2;
    BigInt c = 1;
    for (int i = 0; i < m; ++i) {
        c *= n - i;
        c /= i + 1;  // exact at every step: c is a binomial prefix
    }
    RLevelCount out;
    out.count = c;
    out.entropy_bound_log2 =
        static_cast<double>(n) * entropy_h(std::abs(static_cast<double>(r)) / n);
    return out;
}

}  // namespace nklab
