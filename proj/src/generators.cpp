#include "fgot/generators.hpp"

#include "fgot/random.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace fgot {

Graph erdos_renyi(Index n, double p, std::uint64_t seed) {
    if (n < 1) throw ValidationError("erdos_renyi requires n >= 1");
    if (p < 0.0 || p > 1.0) throw ValidationError("edge probability must be in [0, 1]");
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Mat w = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            if (coin(rng) < p) w(i, j) = w(j, i) = 1.0;
        }
    }
    return Graph(std::move(w));
}

SbmSample sbm(const SbmSpec& spec, std::uint64_t seed) {
    if (spec.n < 1) throw ValidationError("sbm requires n >= 1");
    if (spec.communities < 1 || spec.communities > spec.n) {
        throw ValidationError("sbm requires 1 <= k <= n");
    }
    if (!(spec.p_out >= 0.0 && spec.p_out < spec.p_in && spec.p_in <= 1.0)) {
        throw ValidationError("sbm requires 0 <= p_out < p_in <= 1");
    }

    std::vector<Index> sizes;
    if (spec.sizes) {
        sizes = *spec.sizes;
        if (static_cast<int>(sizes.size()) != spec.communities) {
            throw ValidationError("sbm sizes list must have one entry per community");
        }
        if (std::accumulate(sizes.begin(), sizes.end(), Index{0}) != spec.n) {
            throw ValidationError("sbm community sizes must sum to n");
        }
    } else {
        const Index base = spec.n / spec.communities;
        const Index extra = spec.n % spec.communities;
        for (int c = 0; c < spec.communities; ++c) {
            sizes.push_back(base + (c < extra ? 1 : 0));
        }
    }

    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(spec.n));
    for (int c = 0; c < spec.communities; ++c) {
        for (Index i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i) labels.push_back(c);
    }

    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Mat w = Mat::Zero(spec.n, spec.n);
    for (Index i = 0; i < spec.n; ++i) {
        for (Index j = i + 1; j < spec.n; ++j) {
            const bool same = labels[static_cast<std::size_t>(i)] ==
                              labels[static_cast<std::size_t>(j)];
            if (coin(rng) < (same ? spec.p_in : spec.p_out)) w(i, j) = w(j, i) = 1.0;
        }
    }
    return SbmSample{Graph(std::move(w)), std::move(labels)};
}

FuseResult fuse_nodes(const Graph& g, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0)) {
        throw ValidationError("fuse fraction must be in [0, 1)");
    }
    const Index n0 = g.size();
    const int target = static_cast<int>(std::ceil(fraction * static_cast<double>(n0)));

    Mat w = g.weights();
    auto rng = make_rng(seed);
    int merges = 0;
    while (merges < target) {
        std::vector<std::pair<Index, Index>> edges;
        for (Index i = 0; i < w.rows(); ++i) {
            for (Index j = i + 1; j < w.cols(); ++j) {
                if (w(i, j) > 0.0) edges.emplace_back(i, j);
            }
        }
        if (edges.empty()) break;

        std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
        const auto [a, b] = edges[pick(rng)];

        // Merge b into a: neighborhoods union, parallel weights summed.
        const Index n = w.rows();
        Mat next(n - 1, n - 1);
        auto old_index = [&](Index i) { return i < b ? i : i + 1; };
        for (Index i = 0; i + 1 < n; ++i) {
            for (Index j = 0; j + 1 < n; ++j) {
                const Index oi = old_index(i);
                const Index oj = old_index(j);
                double value = w(oi, oj);
                if (oi == a) value += w(b, oj);
                if (oj == a) value += w(oi, b);
                if (oi == a && oj == a) value = 0.0;  // drop the self-loop
                next(i, j) = value;
            }
        }
        w = std::move(next);
        ++merges;
    }

    return FuseResult{Graph(std::move(w), g.label()), merges,
                      static_cast<double>(merges) / static_cast<double>(n0)};
}

} // namespace fgot
