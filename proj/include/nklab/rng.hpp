#pragma once

#include <cstdint>

#include "nklab/normal.hpp"

namespace nklab {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Stream tags keep the quenched-disorder hash and the dynamical chain RNG in
/// disjoint domains even when callers reuse the same numeric seed for both.
inline constexpr std::uint64_t kDisorderStream = 0x5a17edc0de7ab1e5ULL;
inline constexpr std::uint64_t kChainStream = 0xc7a18f00d5eeb007ULL;
inline constexpr std::uint64_t kDeriveStream = 0x8d2e6aa1b4c95f3dULL;

/// SplitMix64 finalizer: full-avalanche 64-bit permutation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1e4558e5ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

/// Three finalizer rounds folding (key, a, b) into one well-mixed word.
constexpr std::uint64_t hash3(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = mix64(key + kGolden * (a + 1));
    z = mix64(z ^ b);
    return mix64(z);
}

/// Deterministic seed derivation for auxiliary streams (replica copies,
/// per-seed experiment instances). Never collides with raw user seeds in
/// practice because of the stream tag.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return hash3(seed ^ kDeriveStream, salt, 0);
}

/// Top 53 bits mapped to a uniform in (0,1); endpoints clamped to
/// [2^-53, 1 - 2^-53] so downstream quantile transforms stay finite.
constexpr double unit_from_hash(std::uint64_t h) {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    double u = static_cast<double>(h >> 11) * kScale;
    if (u < kScale) u = kScale;
    if (u > 1.0 - kScale) u = 1.0 - kScale;
    return u;
}

/// Standard normal deviate from one hash word, via the inverse CDF. The whole
/// pipeline is integer-plus-polynomial, so values are bit-identical across
/// platforms and runs.
inline double gaussian_from_hash(std::uint64_t h) {
    return normal_quantile(unit_from_hash(h));
}

/// Counter-based RNG for Markov chains: a pure function of
/// (seed, chain id, step counter). Streams for distinct chain ids never
/// interact, which makes multi-chain runs order-independent, and a chain's
/// prefix is unchanged by running it longer.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t chain_id)
        : key_(seed ^ kChainStream), chain_(chain_id) {}

    std::uint64_t next_u64() { return hash3(key_, chain_, counter_++); }

    /// Uniform in (0,1), clamped away from the endpoints.
    double next_unit() { return unit_from_hash(next_u64()); }

    /// Uniform integer in [0, n). Multiply-shift range reduction: the
    /// (statistically negligible) modulo bias of order 2^-32 is accepted in
    /// exchange for branch-free determinism.
    std::uint32_t next_below(std::uint32_t n) {
        const std::uint64_t hi = next_u64() >> 32;
        return static_cast<std::uint32_t>((hi * n) >> 32);
    }

    double next_gaussian() { return gaussian_from_hash(next_u64()); }

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t chain_;
    std::uint64_t counter_ = 0;
};

}  // namespace nklab
