#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace nklab {

using BigInt = boost::multiprecision::cpp_int;

// Exact census of genomes by their windowed agreement with the all-plus
// genome: counts[l] = |{sigma : N*Q(sigma, 1) = l}|, l in 0..n.
struct CountTable {
    int n = 0;
    int k = 0;
    std::vector<BigInt> counts;

    BigInt total() const;

    // {"n": .., "k": .., "counts": {"l": "decimal"}}; zero entries omitted.
    nlohmann::ordered_json to_json() const;
    static CountTable from_json(const nlohmann::json& j);
};

// Transfer DP over the circular run structure. 2 <= n <= 64, 1 <= k <= n-1.
CountTable count_by_overlap(int n, int k);

// Direct 2^n enumeration, n <= 20. Oracle for the DP.
CountTable count_by_overlap_bruteforce(int n, int k);

struct CountBoundRow {
    int l = 0;
    BigInt count;
    BigInt bound;   // n * 2^(n-(k+l))
    bool holds = false;
};

// Audit of the upper bound n*2^(n-(k+l)) on counts[l] for 1 <= l <= n-k-1.
// applicable = (n^2 * 2^-k <= 1/2), the regime where the bound is provable;
// outside it violations are recorded, not asserted.
struct CountBoundReport {
    int n = 0;
    int k = 0;
    bool applicable = false;
    bool all_hold = false;
    std::vector<CountBoundRow> rows;
};

CountBoundReport count_bound_check(const CountTable& table);

// Construction-based lower-bound candidate, kept literally:
// n * 2^(n-k-l-1 - floor((n-k-l-1)/(k+1))), 1 <= l <= n-k-1. Reported as a
// candidate only; the census itself decides whether it holds.
BigInt tightness_lower_bound(int n, int k, int l);

struct RLevelCount {
    BigInt count;              // C(n, (n+r)/2)
    double entropy_bound_log2; // n * h(|r|/n), so the bound itself is 2^this
};

// |{sigma : sum_i sigma_i = r_numerator}|. Requires r = n mod 2, |r| <= n.
RLevelCount count_by_r(int n, int r_numerator);

}  // namespace nklab
