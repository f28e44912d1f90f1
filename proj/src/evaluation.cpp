#include "fgot/evaluation.hpp"

#include "fgot/parallel.hpp"
#include "fgot/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace fgot {

namespace {

double inertia(const Mat& x, const Mat& centers, const std::vector<int>& labels) {
    double acc = 0.0;
    for (Index i = 0; i < x.rows(); ++i) {
        acc += (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
    }
    return acc;
}

std::vector<int> assign_nearest(const Mat& x, const Mat& centers) {
    std::vector<int> labels(static_cast<std::size_t>(x.rows()), 0);
    for (Index i = 0; i < x.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (Index c = 0; c < centers.rows(); ++c) {
            const double d = (x.row(i) - centers.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = arg;
    }
    return labels;
}

std::vector<int> kmeans(const Mat& x, int k, std::uint64_t seed, int restarts) {
    const Index n = x.rows();
    std::vector<int> best_labels(static_cast<std::size_t>(n), 0);
    double best_inertia = std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        auto rng = make_rng(split_seed(seed, static_cast<std::uint64_t>(r)));

        // k-means++ seeding.
        Mat centers(k, x.cols());
        std::uniform_int_distribution<Index> first(0, n - 1);
        centers.row(0) = x.row(first(rng));
        Vec dist2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double total = dist2.sum();
            Index chosen = 0;
            if (total > 0.0) {
                std::uniform_real_distribution<double> u(0.0, total);
                double target = u(rng);
                for (Index i = 0; i < n; ++i) {
                    target -= dist2(i);
                    if (target <= 0.0) {
                        chosen = i;
                        break;
                    }
                }
            } else {
                chosen = first(rng);
            }
            centers.row(c) = x.row(chosen);
            dist2 = dist2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
        }

        std::vector<int> labels = assign_nearest(x, centers);
        for (int iter = 0; iter < 100; ++iter) {
            // Update step; an emptied cluster is reseeded to the farthest point.
            Mat sums = Mat::Zero(k, x.cols());
            std::vector<int> counts(static_cast<std::size_t>(k), 0);
            for (Index i = 0; i < n; ++i) {
                sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
                ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
            }
            for (int c = 0; c < k; ++c) {
                if (counts[static_cast<std::size_t>(c)] > 0) {
                    centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
                } else {
                    Index farthest = 0;
                    double worst = -1.0;
                    for (Index i = 0; i < n; ++i) {
                        const double d =
                            (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)]))
                                .squaredNorm();
                        if (d > worst) {
                            worst = d;
                            farthest = i;
                        }
                    }
                    centers.row(c) = x.row(farthest);
                }
            }
            std::vector<int> next = assign_nearest(x, centers);
            const bool changed = next != labels;
            labels = std::move(next);
            if (!changed) break;
        }

        const double score = inertia(x, centers, labels);
        if (score < best_inertia) {
            best_inertia = score;
            best_labels = labels;
        }
    }
    return best_labels;
}

} // namespace

ClusteringResult spectral_clustering(const Graph& g, int k, std::uint64_t seed) {
    const Index n = g.size();
    if (k < 1 || k > n) throw ValidationError("spectral clustering requires 1 <= k <= n");

    const SpectralDecomposition dec = decompose(laplacian(g));
    Mat embedding = dec.eigenvectors.leftCols(k);
    for (Index i = 0; i < n; ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) embedding.row(i) /= norm;
    }

    bool degenerate = false;
    if (k < n) {
        const double gap = dec.eigenvalues(k) - dec.eigenvalues(k - 1);
        const double scale = std::max(dec.eigenvalues(n - 1), 1e-12);
        degenerate = gap <= 1e-9 * scale;
    }

    return ClusteringResult{kmeans(embedding, k, seed, 20), degenerate};
}

double nmi(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw ValidationError("nmi requires labelings of equal length");
    if (a.empty()) throw ValidationError("nmi requires nonempty labelings");
    const double n = static_cast<double>(a.size());

    std::map<int, double> pa, pb;
    std::map<std::pair<int, int>, double> pab;
    for (std::size_t i = 0; i < a.size(); ++i) {
        pa[a[i]] += 1.0;
        pb[b[i]] += 1.0;
        pab[{a[i], b[i]}] += 1.0;
    }

    double ha = 0.0, hb = 0.0, mi = 0.0;
    for (auto& [k, c] : pa) ha -= (c / n) * std::log(c / n);
    for (auto& [k, c] : pb) hb -= (c / n) * std::log(c / n);
    for (auto& [kv, c] : pab) {
        const double pj = c / n;
        mi += pj * std::log(pj / ((pa[kv.first] / n) * (pb[kv.second] / n)));
    }
    if (ha <= 0.0 || hb <= 0.0) return 0.0;
    return std::clamp(mi / ((ha + hb) / 2.0), 0.0, 1.0);
}

double aligned_frobenius(const Graph& g1, const Graph& g2, const HardAssignment& hard) {
    if (g1.size() != g2.size() || !hard.one_to_one) {
        throw ValidationError(
            "aligned Frobenius error requires equal sizes and a one-to-one assignment");
    }
    const Mat l1 = laplacian(g1).matrix;
    const Mat l2 = laplacian(g2).matrix;
    const Index n = g1.size();
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        const int pi = hard.map[static_cast<std::size_t>(i)];
        for (Index j = 0; j < n; ++j) {
            const double diff = l1(i, j) - l2(pi, hard.map[static_cast<std::size_t>(j)]);
            acc += diff * diff;
        }
    }
    return std::sqrt(acc);
}

DistanceMatrix distance_matrix(const std::vector<Graph>& graphs,
                               const DistanceMatrixConfig& cfg) {
    const std::size_t count = graphs.size();
    if (count < 2) throw ValidationError("distance_matrix requires at least 2 graphs");

    std::vector<FilteredGraph> filtered;
    filtered.reserve(count);
    for (const Graph& g : graphs) filtered.push_back(materialize(g, cfg.filter));

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) pairs.emplace_back(i, j);
    }

    DistanceMatrix dm;
    dm.values = Mat::Zero(static_cast<Index>(count), static_cast<Index>(count));
    dm.labels.reserve(count);
    for (const Graph& g : graphs) dm.labels.push_back(g.label().value_or(-1));

    auto solve_pair = [&](std::size_t i, std::size_t j, bool halved) {
        const std::uint64_t seed = split_seed(cfg.seed, i, j, halved ? 1 : 0);
        if (cfg.solver == SolverKind::Mgd) {
            MgdConfig c = cfg.mgd;
            c.seed = seed;
            if (halved) {
                if (c.alpha) *c.alpha /= 2.0;
                c.c2 /= 2.0;
            }
            return mgd_solve(filtered[i], filtered[j], c);
        }
        StochasticConfig c = cfg.smgd;
        c.seed = seed;
        if (halved) {
            if (c.alpha) *c.alpha /= 2.0;
            c.c2 /= 2.0;
        }
        return stochastic_mgd_solve(filtered[i], filtered[j], c);
    };

    parallel_for(cfg.jobs, pairs.size(), [&](std::size_t task) {
        const auto [i, j] = pairs[task];
        SolverResult result;
        try {
            result = solve_pair(i, j, false);
        } catch (const NumericError&) {
            try {
                result = solve_pair(i, j, true);
            } catch (const NumericError& retry_error) {
                std::ostringstream os;
                os << "distance_matrix pair (" << i << ", " << j
                   << ") failed twice: " << retry_error.what();
                throw NumericError(os.str());
            }
        }
        const double norm =
            std::sqrt(filtered[i].gl_sq_trace * filtered[j].gl_sq_trace);
        const double value =
            norm > 0.0 ? std::max(result.final_cost, 0.0) / norm : result.final_cost;
        dm.values(static_cast<Index>(i), static_cast<Index>(j)) = value;
        dm.values(static_cast<Index>(j), static_cast<Index>(i)) = value;
    });

    return dm;
}

OneNnReport one_nn_classify(const DistanceMatrix& dm, std::uint64_t split_seed) {
    (void)split_seed;  // leave-one-out evaluation is deterministic
    const Index n = dm.values.rows();
    if (n < 2 || static_cast<std::size_t>(n) != dm.labels.size()) {
        throw ValidationError("one_nn_classify requires a labeled square distance matrix");
    }
    std::map<int, int> classes;
    for (int l : dm.labels) ++classes[l];
    if (classes.size() < 2) {
        throw ValidationError("one_nn_classify requires at least 2 classes");
    }

    OneNnReport report;
    int correct = 0;
    for (Index i = 0; i < n; ++i) {
        Index nearest = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = dm.values(i, j);
            if (std::isfinite(d) && d < best) {
                best = d;
                nearest = j;
            }
        }
        if (nearest < 0) {
            ++report.skipped;
            continue;
        }
        ++report.evaluated;
        if (dm.labels[static_cast<std::size_t>(nearest)] ==
            dm.labels[static_cast<std::size_t>(i)]) {
            ++correct;
        }
    }
    report.accuracy =
        report.evaluated > 0 ? static_cast<double>(correct) / report.evaluated : 0.0;
    return report;
}

} // namespace fgot
