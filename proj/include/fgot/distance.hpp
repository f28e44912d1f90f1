#pragma once

#include "fgot/filters.hpp"
#include "fgot/graph.hpp"
#include "fgot/transport.hpp"
#include "fgot/types.hpp"

#include <optional>

namespace fgot {

/// Hard assignments evaluate the surrogate on the 0/1 matrix directly; fuzzy
/// couplings are rescaled by sqrt(|V1| |V2|) first so that a coupling
/// concentrated on a permutation reproduces the hard value.
inline double coupling_scale(Index n, Index m) {
    return std::sqrt(static_cast<double>(n) * static_cast<double>(m));
}

/// Closed-form squared 2-Wasserstein distance between the filtered-signal
/// Gaussians of two same-size graphs, with the second graph permuted by p:
///   Tr g^2(L1) + Tr g^2(L2) - 2 Tr sqrt(g(L1) g^2(P L2 P^T) g(L1)).
/// The trace of the matrix square root is evaluated by eigendecomposition of
/// the symmetric PSD product; eigenvalues below -1e-6 (relative) signal lost
/// PSD structure and raise NumericError, smaller negatives clamp to zero.
double exact_distance(const FilteredGraph& f1, const FilteredGraph& f2,
                      const Permutation& p);

/// Square-root-free upper bound
///   Tr g^2(L1) + Tr g^2(L2) - 2 <g(L1) P g(L2), P>
/// evaluated on the assignment matrix as given (use the Coupling overload for
/// fuzzy couplings). Supports rectangular assignments.
double surrogate_cost(const FilteredGraph& f1, const FilteredGraph& f2,
                      const Mat& assignment);

/// Surrogate cost on a fuzzy coupling, rescaled by sqrt(|V1| |V2|).
double surrogate_cost(const FilteredGraph& f1, const FilteredGraph& f2,
                      const Coupling& coupling);

/// Gradient of the surrogate cost with respect to the assignment matrix:
/// -4 g(L1) P g(L2).
Mat surrogate_gradient(const FilteredGraph& f1, const FilteredGraph& f2,
                       const Mat& assignment);

struct DistanceReport {
    std::optional<double> exact;          // only for square permutation-like assignments
    double surrogate = 0.0;
    std::pair<double, double> trace_terms{0.0, 0.0};
    double cross_term = 0.0;              // <g(L1) P g(L2), P>
};

/// Evaluates the surrogate decomposition at a hard assignment matrix and,
/// when the assignment is a square permutation, the exact distance as well.
DistanceReport distance_report(const FilteredGraph& f1, const FilteredGraph& f2,
                               const Mat& assignment);

struct BruteForceResult {
    Permutation exact_best;
    double exact_min = 0.0;
    Permutation surrogate_best;
    double surrogate_min = 0.0;
};

/// Exhaustive minimum of both the exact distance and the surrogate cost over
/// all n! permutations. Rejects n > 8.
BruteForceResult brute_force_align(const FilteredGraph& f1, const FilteredGraph& f2);

} // namespace fgot
