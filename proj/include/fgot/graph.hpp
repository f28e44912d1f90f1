#pragma once

#include "fgot/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fgot {

/// Undirected weighted graph held as a dense symmetric adjacency matrix with
/// zero diagonal and nonnegative weights. Immutable after construction.
class Graph {
public:
    /// Validates and takes ownership of a weight matrix. Inputs symmetric
    /// within 1e-10 (absolute) are symmetrized as (W + W^T)/2; anything worse
    /// is rejected, as are negative weights and nonzero diagonals.
    explicit Graph(Mat weights, std::optional<int> label = std::nullopt);

    Index size() const { return weights_.rows(); }
    const Mat& weights() const { return weights_; }
    const std::optional<int>& label() const { return label_; }

private:
    Mat weights_;
    std::optional<int> label_;
};

/// Combinatorial Laplacian L = D - W together with the degree vector.
struct Laplacian {
    Mat matrix;
    Vec degrees;

    Index size() const { return matrix.rows(); }
};

/// Bijection on {0,...,n-1}. Row i of the associated 0/1 matrix P has its one
/// at column perm[i], so (P L P^T)(i, j) = L(perm[i], perm[j]).
class Permutation {
public:
    explicit Permutation(std::vector<int> perm);

    static Permutation identity(Index n);

    Index size() const { return static_cast<Index>(perm_.size()); }
    int operator[](Index i) const { return perm_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& indices() const { return perm_; }

    Permutation inverse() const;
    Mat matrix() const;

    bool operator==(const Permutation& other) const { return perm_ == other.perm_; }

private:
    std::vector<int> perm_;
};

Laplacian laplacian(const Graph& g);

/// P L P^T. The spectrum is untouched; only the vertex order changes.
Laplacian apply_permutation(const Laplacian& l, const Permutation& p);

/// Relabels the vertices of a graph: weights(i, j) -> weights(perm[i], perm[j]).
Graph apply_permutation(const Graph& g, const Permutation& p);

/// Uniformly random bijection, deterministic given the seed.
Permutation random_permutation(Index n, std::uint64_t seed);

} // namespace fgot
