#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nklab {

/// Maximum genome length supported by the bit-packed representation.
inline constexpr int kMaxSites = 64;

/// Low n bits set. n must be in [0, 64].
constexpr std::uint64_t low_mask(int n) {
    return n >= 64 ? ~0ULL : ((1ULL << n) - 1ULL);
}

/// Cyclic right rotation of an n-bit register. Bit i of the result is bit
/// (i + r) mod n of x. Requires 0 <= r < n, x confined to the low n bits.
constexpr std::uint64_t rotr_n(std::uint64_t x, int r, int n) {
    if (r == 0) return x;
    return ((x >> r) | (x << (n - r))) & low_mask(n);
}

/// A configuration of n binary sites on a ring, packed into one word.
/// Bit i encodes site i: set bit = spin +1, clear bit = spin -1.
struct Genome {
    std::uint64_t bits = 0;
    int n = 0;

    int spin(int i) const { return (bits >> i) & 1ULL ? +1 : -1; }
    void flip(int i) { bits ^= 1ULL << i; }
    Genome flipped(int i) const { return {bits ^ (1ULL << i), n}; }
    int plus_count() const { return std::popcount(bits); }

    bool operator==(const Genome&) const = default;
};

inline Genome all_plus(int n) { return {low_mask(n), n}; }
inline Genome all_minus(int n) { return {0, n}; }

inline Genome genome_from_spins(const std::vector<int>& s) {
    if (s.empty() || s.size() > static_cast<std::size_t>(kMaxSites))
        throw std::invalid_argument("genome length out of range");
    Genome g{0, static_cast<int>(s.size())};
    for (int i = 0; i < g.n; ++i) {
        if (s[i] != 1 && s[i] != -1) throw std::invalid_argument("spins must be +-1");
        if (s[i] == 1) g.bits |= 1ULL << i;
    }
    return g;
}

inline std::vector<int> spins_of(const Genome& g) {
    std::vector<int> s(g.n);
    for (int i = 0; i < g.n; ++i) s[i] = g.spin(i);
    return s;
}

/// Site-0-first textual form, '+' for +1 and '-' for -1.
inline std::string to_string(const Genome& g) {
    std::string s(g.n, '-');
    for (int i = 0; i < g.n; ++i)
        if (g.spin(i) > 0) s[i] = '+';
    return s;
}

inline int hamming(const Genome& a, const Genome& b) {
    return std::popcount((a.bits ^ b.bits) & low_mask(a.n));
}

/// Bit i set iff a and b agree at site i.
inline std::uint64_t agreement_mask(const Genome& a, const Genome& b) {
    return ~(a.bits ^ b.bits) & low_mask(a.n);
}

}  // namespace nklab
