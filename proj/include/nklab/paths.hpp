#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nklab/enumeration.hpp"
#include "nklab/landscape.hpp"

namespace nklab {

/// Interpolating path between two genomes: step l rewrites block I_l from
/// the first endpoint's values to the second's. Blocks partition the ring
/// into n pieces of size k = floor(N/(n+1)), except the last, which keeps
/// the remainder (between k and 2k + n sites).
struct BridgePath {
    int steps = 0;       // n
    int block_size = 0;  // k
    std::vector<std::pair<int, int>> blocks;  // [begin, end) site ranges
    std::vector<int> order;                   // update order, a permutation of 0..n-1
    std::vector<Genome> nodes;                // n + 1 nodes, endpoints included
};

/// Throws when the genomes differ in length or N < n + 1 (block size would
/// be zero). An empty order means ascending.
BridgePath build_bridge(const Genome& from, const Genome& to, int n_steps,
                        std::vector<int> order = {});

struct PathReport {
    int n_sites = 0;
    int steps = 0;
    std::vector<int> nq;         // per step, exact n*Q
    std::vector<int> nr;         // per step, exact n*R
    std::vector<int> flips;      // per step Hamming distance
    std::vector<double> fitness; // per node H/n
    double min_q = 1.0;
    double min_r = 1.0;
    double min_fitness = 0.0;           // over all nodes
    double min_interior_fitness = 0.0;  // over nodes 1..n-1; +inf when n == 1

    std::string to_json() const;
};

PathReport path_report(const Landscape& land, const BridgePath& path);

struct PathFlags {
    bool regime = false;         // alpha < eta / (5 sqrt(2 ln 2))
    bool q_bound = false;        // every step Q >= 1 - 2/(n+1) - 2 alpha
    bool r_bound = false;        // every step R >= 1 - 4/(n+1)
    bool fitness_floor = false;  // interior fitness >= m - (8n+10) eta
};

/// Checks the path against the guarantees that hold for block-partition
/// paths between near-fittest genomes: the interpolation regime, the two
/// per-step overlap floors, and the fitness floor with the explicit
/// constant (8n+10).
PathFlags verify_path_bounds(const PathReport& report, double alpha, double eta, double m);

enum class WalkRule { steepest, random_improving };

struct WalkTrace {
    std::vector<Genome> nodes;
    std::vector<double> fitness;  // per node H/n, strictly increasing
};

/// Single-locus improving flips until no flip improves. The endpoint is a
/// 1-flip local maximum.
WalkTrace adaptive_walk(const Landscape& land, const Genome& start, WalkRule rule,
                        std::uint64_t rng_seed = 0);

/// The fittest genome paired with the member of the level set
/// {H/n >= M - eta} least aligned with it (smallest n*R, ties by packed
/// bits). Falls back to pairing the maximizer with itself when the level
/// set has no other member.
std::pair<Genome, Genome> distant_near_fittest(const Landscape& land, double eta,
                                               int scan_limit = kSingleScanLimit);

}  // namespace nklab
