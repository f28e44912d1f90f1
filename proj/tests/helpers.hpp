#pragma once

#include "fgot/filters.hpp"
#include "fgot/graph.hpp"
#include "fgot/random.hpp"

#include <initializer_list>
#include <vector>

namespace testutil {

inline fgot::Mat mat(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<fgot::Index>(rows.size());
    const auto c = static_cast<fgot::Index>(rows.begin()->size());
    fgot::Mat m(r, c);
    fgot::Index i = 0;
    for (const auto& row : rows) {
        fgot::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline fgot::Graph k2() {
    return fgot::Graph(mat({{0, 1}, {1, 0}}));
}

inline fgot::Graph triangle() {
    return fgot::Graph(mat({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
}

inline fgot::Graph path3() {
    return fgot::Graph(mat({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
}

inline fgot::Graph empty_graph(fgot::Index n) {
    return fgot::Graph(fgot::Mat::Zero(n, n));
}

/// ER graph that is guaranteed to have at least one edge.
inline fgot::Graph random_graph(fgot::Index n, std::uint64_t seed, double p = 0.5) {
    auto rng = fgot::make_rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        fgot::Mat w = fgot::Mat::Zero(n, n);
        bool any = false;
        for (fgot::Index i = 0; i < n; ++i) {
            for (fgot::Index j = i + 1; j < n; ++j) {
                if (coin(rng) < p) {
                    w(i, j) = w(j, i) = 1.0;
                    any = true;
                }
            }
        }
        if (any || n == 1) return fgot::Graph(std::move(w));
    }
    fgot::Mat w = fgot::Mat::Zero(n, n);
    w(0, 1) = w(1, 0) = 1.0;
    return fgot::Graph(std::move(w));
}

/// Random weighted graph with weights in (0, 2].
inline fgot::Graph random_weighted_graph(fgot::Index n, std::uint64_t seed, double p = 0.6) {
    auto rng = fgot::make_rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    fgot::Mat w = fgot::Mat::Zero(n, n);
    for (fgot::Index i = 0; i < n; ++i) {
        for (fgot::Index j = i + 1; j < n; ++j) {
            if (coin(rng) < p) w(i, j) = w(j, i) = 0.1 + 1.9 * coin(rng);
        }
    }
    return fgot::Graph(std::move(w));
}

inline std::vector<fgot::FilterSpec> filter_library() {
    return {fgot::FilterSpec::pinv_sqrt(),
            fgot::FilterSpec::square(),
            fgot::FilterSpec::sqrt(),
            fgot::FilterSpec::heat(0.2),
            fgot::FilterSpec::heat(0.8),
            fgot::FilterSpec::sum({fgot::FilterSpec::pinv_sqrt(), fgot::FilterSpec::square()}),
            fgot::FilterSpec::sum({fgot::FilterSpec::pinv_sqrt(), fgot::FilterSpec::heat(0.8)}),
            fgot::FilterSpec::sum({fgot::FilterSpec::square(), fgot::FilterSpec::heat(0.8)})};
}

} // namespace testutil
