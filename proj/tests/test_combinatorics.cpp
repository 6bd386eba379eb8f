#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include <nklab/combinatorics.hpp>
#include <nklab/theory.hpp>

using namespace nklab;

namespace {

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

}  // namespace

TEST_CASE("transfer counts match brute enumeration for every small ring") {
    for (int n = 2; n <= 16; ++n)
        for (int k = 1; k <= n - 1; ++k) {
            const CountTable dp = count_by_overlap(n, k);
            const CountTable brute = count_by_overlap_bruteforce(n, k);
            REQUIRE(dp.counts.size() == brute.counts.size());
            for (std::size_t l = 0; l < dp.counts.size(); ++l)
                CHECK_MESSAGE(dp.counts[l] == brute.counts[l],
                              "n=", n, " k=", k, " l=", l);
        }
}

TEST_CASE("census rows sum to the full configuration count") {
    for (auto [n, k] : {std::pair{4, 1}, {20, 12}, {40, 7}, {64, 1}, {64, 63}, {33, 16}}) {
        const CountTable t = count_by_overlap(n, k);
        CHECK(t.total() == BigInt(1) << n);
    }
}

TEST_CASE("known small censuses come out exactly") {
    const CountTable t41 = count_by_overlap(4, 1);
    CHECK(t41.counts[0] == 7);
    CHECK(t41.counts[1] == 4);
    CHECK(t41.counts[2] == 4);
    CHECK(t41.counts[3] == 0);
    CHECK(t41.counts[4] == 1);

    // k = n-1 leaves only the two extremes: full agreement or none.
    const CountTable t54 = count_by_overlap(5, 4);
    CHECK(t54.counts[0] == 31);
    CHECK(t54.counts[5] == 1);
    for (int l = 1; l <= 4; ++l) CHECK(t54.counts[l] == 0);
}

TEST_CASE("the census at n=20 k=12 is pinned") {
    const CountTable t = count_by_overlap(20, 12);
    const std::vector<std::pair<int, long>> expect{
        {0, 1047295}, {1, 640}, {2, 320}, {3, 160}, {4, 80},
        {5, 40},      {6, 20},  {7, 20},  {20, 1}};
    BigInt sum = 0;
    for (auto [l, c] : expect) {
        CHECK(t.counts[static_cast<std::size_t>(l)] == c);
        sum += c;
    }
    CHECK(sum == BigInt(1) << 20);  // the pinned levels are all of them
}

TEST_CASE("levels just below full agreement are impossible") {
    // One window short of everywhere means a disagreement run shorter than a
    // site, so l in [n-k, n-1] is empty and l = n has the single twin.
    for (auto [n, k] : {std::pair{12, 5}, {20, 12}, {31, 8}, {64, 20}}) {
        const CountTable t = count_by_overlap(n, k);
        for (int l = n - k; l <= n - 1; ++l)
            CHECK(t.counts[static_cast<std::size_t>(l)] == 0);
        CHECK(t.counts[static_cast<std::size_t>(n)] == 1);
    }
}

TEST_CASE("census preconditions are enforced") {
    CHECK_THROWS_AS(count_by_overlap(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(count_by_overlap(10, 0), std::invalid_argument);
    CHECK_THROWS_AS(count_by_overlap(10, 10), std::invalid_argument);
    CHECK_THROWS_AS(count_by_overlap(65, 3), std::invalid_argument);
    CHECK_THROWS_AS(count_by_overlap_bruteforce(21, 3), std::invalid_argument);
}

TEST_CASE("census json round trips and omits empty levels") {
    const CountTable t = count_by_overlap(20, 12);
    const auto j = t.to_json();
    CHECK(j["counts"].size() == 9);
    CHECK(!j["counts"].contains("8"));
    CHECK(j["counts"]["0"] == "1047295");
    const CountTable back = CountTable::from_json(j);
    CHECK(back.n == t.n);
    CHECK(back.k == t.k);
    CHECK(back.counts == t.counts);
}

TEST_CASE("level upper bound holds throughout its provable regime") {
    // n^2 2^-k <= 1/2 is the regime; (20,12) sits inside it.
    const CountTable t = count_by_overlap(20, 12);
    const CountBoundReport rep = count_bound_check(t);
    CHECK(rep.applicable);
    CHECK(rep.all_hold);
    REQUIRE(rep.rows.size() == 7);  // l = 1..n-k-1
    for (const auto& row : rep.rows) {
        CHECK(row.bound == BigInt(20) << (20 - (12 + row.l)));
        CHECK(row.holds);
        CHECK(row.count <= row.bound);
    }

    const CountBoundReport wide = count_bound_check(count_by_overlap(16, 2));
    CHECK(!wide.applicable);

    // Sweep the provable regime: never a violation inside it.
    for (int n = 8; n <= 24; ++n)
        for (int k = 1; k <= n - 1; ++k) {
            const CountBoundReport r = count_bound_check(count_by_overlap(n, k));
            if (r.applicable) CHECK(r.all_hold);
        }
}

TEST_CASE("the literal run construction overcounts the census") {
    // The candidate lower bound n * 2^(n-k-l-1 - floor((n-k-l-1)/(k+1)))
    // leaves the site before the run unconstrained, so it also counts
    // configurations whose agreement run is longer than intended. The census
    // shows the overshoot concretely: at n=20, k=12 the candidate exceeds the
    // exact count at every interior level and only the top level survives.
    const CountTable t = count_by_overlap(20, 12);
    for (int l = 1; l <= 6; ++l) {
        int e = 20 - 12 - l - 1;
        e -= e / 13;
        CHECK(tightness_lower_bound(20, 12, l) == BigInt(20) << e);
        CHECK(tightness_lower_bound(20, 12, l) > t.counts[static_cast<std::size_t>(l)]);
    }
    CHECK(tightness_lower_bound(20, 12, 7) == 20);
    CHECK(t.counts[7] == 20);  // at l = n-k-1 the candidate is exact
}

TEST_CASE("fixing the run's leading boundary gives a true lower bound") {
    // Requiring a disagreement on both sides of the run costs one more free
    // site; the repaired count n * 2^(n-k-l-2 - floor((n-k-l-2)/(k+1)))
    // really is a floor for the census wherever it is defined.
    int equalities = 0;
    for (int n = 6; n <= 18; ++n)
        for (int k = 1; k <= n - 1; ++k) {
            const CountTable t = count_by_overlap(n, k);
            for (int l = 1; l + k + 2 <= n; ++l) {
                int e = n - k - l - 2;
                e -= e / (k + 1);
                const BigInt repaired = BigInt(n) << e;
                CHECK_MESSAGE(repaired <= t.counts[static_cast<std::size_t>(l)],
                              "n=", n, " k=", k, " l=", l);
                if (repaired == t.counts[static_cast<std::size_t>(l)]) ++equalities;
            }
        }
    CHECK(equalities > 0);  // the floor is attained, not slack everywhere
}

TEST_CASE("site-overlap levels count binomially and obey the entropy bound") {
    for (int n : {10, 15, 24, 33}) {
        for (int r = -n; r <= n; ++r) {
            if ((n + r) % 2 != 0) {
                CHECK_THROWS_AS(count_by_r(n, r), std::invalid_argument);
                continue;
            }
            const RLevelCount c = count_by_r(n, r);
            CHECK(c.count == binomial(n, (n + r) / 2));
            CHECK(c.entropy_bound_log2 ==
                  doctest::Approx(n * entropy_h(std::abs(r) / double(n))).epsilon(1e-12));
            // 2^n * count <= 2^bound, stated in log2.
            const double log2c = std::log2(c.count.convert_to<double>());
            CHECK(n + log2c <= c.entropy_bound_log2 + 1e-9);
        }
        CHECK(count_by_r(n, n).count == 1);
        CHECK(count_by_r(n, -n).count == 1);
    }
    CHECK(count_by_r(12, 0).count == 924);
    CHECK_THROWS_AS(count_by_r(10, 12), std::invalid_argument);
}
