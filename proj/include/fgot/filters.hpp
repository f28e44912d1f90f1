#pragma once

#include "fgot/graph.hpp"
#include "fgot/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fgot {

/// Eigendecomposition L = U diag(lambda) U^T with eigenvalues sorted
/// nondecreasing. Tiny negative eigenvalues (roundoff on a PSD Laplacian)
/// are clamped to zero.
struct SpectralDecomposition {
    Vec eigenvalues;
    Mat eigenvectors;
};

SpectralDecomposition decompose(const Laplacian& l);

/// Description of a scalar spectral response g_hat(lambda). Supported kinds:
///   pinv_sqrt  lambda^{-1/2} above a relative zero threshold, else 0
///   square     lambda^2
///   sqrt       sqrt(lambda)
///   heat       exp(-tau * lambda), tau > 0
///   sum        pointwise sum of >= 2 member filters
///
/// String grammar (case-insensitive): "pinv-sqrt", "sq", "sqrt", "heat:<tau>"
/// and '+'-joined composites such as "pinv-sqrt+heat:0.8".
struct FilterSpec {
    enum class Kind { PinvSqrt, Square, Sqrt, Heat, Sum };

    Kind kind = Kind::PinvSqrt;
    double tau = 0.0;               // heat only
    std::vector<FilterSpec> terms;  // sum only
    double zero_tol_rel = 1e-8;     // pseudoinverse threshold, relative to max eigenvalue

    static FilterSpec pinv_sqrt() { return {Kind::PinvSqrt, 0.0, {}, 1e-8}; }
    static FilterSpec square() { return {Kind::Square, 0.0, {}, 1e-8}; }
    static FilterSpec sqrt() { return {Kind::Sqrt, 0.0, {}, 1e-8}; }
    static FilterSpec heat(double tau);
    static FilterSpec sum(std::vector<FilterSpec> terms);

    static FilterSpec parse(std::string_view text);
    std::string str() const;
};

/// Scalar response g_hat(lambda). `lambda_max` sets the scale for the
/// pseudoinverse zero threshold; pass the largest eigenvalue of the matrix
/// the filter will be applied to.
double evaluate_filter(const FilterSpec& spec, double lambda, double lambda_max);

/// A graph together with its materialized filter matrix g(L) = U g_hat(Lambda) U^T.
struct FilteredGraph {
    Graph graph;
    FilterSpec filter;
    SpectralDecomposition decomposition;
    Vec filtered_eigenvalues;  // g_hat(lambda_i)
    Mat gl;                    // g(L), symmetric PSD
    double gl_sq_trace = 0.0;  // Tr(g^2(L)) = sum g_hat(lambda_i)^2

    Index size() const { return graph.size(); }
};

FilteredGraph materialize(const Graph& g, const FilterSpec& spec);

} // namespace fgot
