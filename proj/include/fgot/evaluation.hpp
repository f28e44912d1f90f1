#pragma once

#include "fgot/filters.hpp"
#include "fgot/graph.hpp"
#include "fgot/solvers.hpp"

#include <cstdint>
#include <vector>

namespace fgot {

struct ClusteringResult {
    std::vector<int> labels;
    bool degenerate = false;  // no usable spectral gap at the requested k
};

/// k-means (20 restarts, best inertia) on the unit-normalized rows of the
/// k bottom eigenvectors of the Laplacian.
ClusteringResult spectral_clustering(const Graph& g, int k, std::uint64_t seed);

/// Normalized mutual information with arithmetic-mean normalization; 0 when
/// either labeling has zero entropy.
double nmi(const std::vector<int>& a, const std::vector<int>& b);

/// || L1 - P L2 P^T ||_F for a one-to-one assignment of equal-size graphs.
double aligned_frobenius(const Graph& g1, const Graph& g2, const HardAssignment& hard);

struct DistanceMatrix {
    Mat values;               // symmetric, zero diagonal
    std::vector<int> labels;  // class tag per graph (-1 when absent)
};

struct DistanceMatrixConfig {
    FilterSpec filter = FilterSpec::heat(0.8);
    SolverKind solver = SolverKind::Mgd;
    MgdConfig mgd{};
    StochasticConfig smgd{};
    std::uint64_t seed = 0;
    int jobs = 1;
};

/// Pairwise alignment distances D(G_i, G_j) = final surrogate cost normalized
/// by sqrt(Tr g^2(L_i) Tr g^2(L_j)). Each pair is solved once and mirrored;
/// per-pair seeds split off the master seed, so results do not depend on the
/// worker count. A failed pair is retried once with a halved step size.
DistanceMatrix distance_matrix(const std::vector<Graph>& graphs,
                               const DistanceMatrixConfig& cfg);

struct OneNnReport {
    double accuracy = 0.0;
    int evaluated = 0;
    int skipped = 0;  // rows with no finite distance to any other graph
};

/// Leave-one-out nearest-neighbor classification over a distance matrix;
/// ties break to the lowest index.
OneNnReport one_nn_classify(const DistanceMatrix& dm, std::uint64_t split_seed);

} // namespace fgot
