#pragma once

#include "fgot/graph.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fgot {

/// Each unordered pair becomes a unit-weight edge independently with
/// probability p.
Graph erdos_renyi(Index n, double p, std::uint64_t seed);

struct SbmSpec {
    Index n = 0;
    int communities = 0;
    double p_in = 0.7;
    double p_out = 0.05;
    std::optional<std::vector<Index>> sizes;  // explicit community sizes, must sum to n
};

struct SbmSample {
    Graph graph;
    std::vector<int> labels;  // ground-truth community per vertex
};

SbmSample sbm(const SbmSpec& spec, std::uint64_t seed);

struct FuseResult {
    Graph graph;
    int merges = 0;
    double achieved_fraction = 0.0;  // merges / original vertex count
};

/// Collapses uniformly random edges (merging their endpoints, summing
/// parallel weights, dropping self-loops) until ceil(fraction * n) merges
/// happened or no edges remain.
FuseResult fuse_nodes(const Graph& g, double fraction, std::uint64_t seed);

} // namespace fgot
