#include "fgot/graph.hpp"

#include "fgot/random.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace fgot {

namespace {
constexpr double kSymmetryTol = 1e-10;
}

Graph::Graph(Mat weights, std::optional<int> label)
    : weights_(std::move(weights)), label_(std::move(label)) {
    const Index n = weights_.rows();
    if (n < 1 || weights_.cols() != n) {
        throw ValidationError("graph weights must be a square matrix with n >= 1");
    }
    const double asym = (weights_ - weights_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol) {
        throw ValidationError("graph weights not symmetric (max |W - W^T| = " +
                              std::to_string(asym) + ")");
    }
    weights_ = ((weights_ + weights_.transpose()) / 2.0).eval();
    for (Index i = 0; i < n; ++i) {
        if (weights_(i, i) != 0.0) {
            throw ValidationError("graph weights must have a zero diagonal");
        }
        for (Index j = 0; j < n; ++j) {
            if (weights_(i, j) < 0.0) {
                throw ValidationError("graph weights must be nonnegative");
            }
        }
    }
}

Permutation::Permutation(std::vector<int> perm) : perm_(std::move(perm)) {
    const int n = static_cast<int>(perm_.size());
    if (n < 1) throw ValidationError("permutation must have size >= 1");
    std::vector<bool> seen(perm_.size(), false);
    for (int v : perm_) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
            throw ValidationError("permutation is not a bijection on {0,...,n-1}");
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(Index n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return Permutation(std::move(p));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(perm_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) {
        inv[static_cast<std::size_t>(perm_[i])] = static_cast<int>(i);
    }
    return Permutation(std::move(inv));
}

Mat Permutation::matrix() const {
    const Index n = size();
    Mat p = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) p(i, (*this)[i]) = 1.0;
    return p;
}

Laplacian laplacian(const Graph& g) {
    Vec deg = g.weights().rowwise().sum();
    Mat l = -g.weights();
    l.diagonal() += deg;
    return Laplacian{std::move(l), std::move(deg)};
}

Laplacian apply_permutation(const Laplacian& l, const Permutation& p) {
    const Index n = l.size();
    if (p.size() != n) {
        throw ValidationError("permutation size does not match Laplacian size");
    }
    Mat m(n, n);
    Vec deg(n);
    for (Index i = 0; i < n; ++i) {
        deg(i) = l.degrees(p[i]);
        for (Index j = 0; j < n; ++j) m(i, j) = l.matrix(p[i], p[j]);
    }
    return Laplacian{std::move(m), std::move(deg)};
}

Graph apply_permutation(const Graph& g, const Permutation& p) {
    const Index n = g.size();
    if (p.size() != n) {
        throw ValidationError("permutation size does not match graph size");
    }
    Mat w(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) w(i, j) = g.weights()(p[i], p[j]);
    }
    return Graph(std::move(w), g.label());
}

Permutation random_permutation(Index n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("permutation size must be >= 1");
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    auto rng = make_rng(seed);
    // Fisher-Yates; std::shuffle's pattern is not pinned by the standard.
    for (std::size_t i = p.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(p[i], p[pick(rng)]);
    }
    return Permutation(std::move(p));
}

} // namespace fgot
