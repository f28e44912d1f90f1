#include "fgot/experiments.hpp"

#include "fgot/parallel.hpp"
#include "fgot/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>

namespace fgot {

namespace {

bool filter_contains(const FilterSpec& f, FilterSpec::Kind kind) {
    if (f.kind == kind) return true;
    if (f.kind == FilterSpec::Kind::Sum) {
        return std::any_of(f.terms.begin(), f.terms.end(),
                           [&](const FilterSpec& t) { return filter_contains(t, kind); });
    }
    return false;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

Preset parse_preset(const std::string& name) {
    if (name == "er-align") return Preset::ErAlign;
    if (name == "sbm-community") return Preset::SbmCommunity;
    if (name == "classify-linesearch") return Preset::Classify;
    throw ValidationError("unknown preset '" + name +
                          "' (expected er-align, sbm-community, classify-linesearch)");
}

std::string preset_name(Preset preset) {
    switch (preset) {
        case Preset::ErAlign: return "er-align";
        case Preset::SbmCommunity: return "sbm-community";
        case Preset::Classify: return "classify-linesearch";
    }
    return "?";
}

double preset_c1(Preset preset, const FilterSpec& filter) {
    switch (preset) {
        case Preset::ErAlign:
            if (filter.kind == FilterSpec::Kind::Square) return 3e-3;
            return 6e-3;
        case Preset::SbmCommunity:
            if (filter_contains(filter, FilterSpec::Kind::Heat)) return 2e-2;
            return 8e-3;
        case Preset::Classify:
            return 1e-2;  // midpoint of the line-search grid
    }
    return 6e-3;
}

double preset_smgd_c2(Preset preset) {
    switch (preset) {
        case Preset::ErAlign: return 50.0;
        case Preset::SbmCommunity: return 1.0;
        case Preset::Classify: return 1.0;
    }
    return 1.0;
}

MgdConfig preset_mgd_config(Preset preset, const FilterSpec& filter) {
    MgdConfig cfg;
    cfg.c1 = preset_c1(preset, filter);
    cfg.c2 = 1.0;
    return cfg;
}

StochasticConfig preset_smgd_config(Preset preset) {
    StochasticConfig cfg;
    cfg.c2 = preset_smgd_c2(preset);
    // Exploration scale calibrated for the log-coupling parametrization.
    cfg.sigma0 = 5.0;
    cfg.patience = 120;
    return cfg;
}

MethodSpec MethodSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ValidationError("method '" + text + "' must look like <solver>:<filter>");
    }
    const std::string solver = text.substr(0, colon);
    MethodSpec spec;
    if (solver == "mgd") spec.solver = SolverKind::Mgd;
    else if (solver == "smgd") spec.solver = SolverKind::Smgd;
    else throw ValidationError("unknown solver '" + solver + "' (expected mgd or smgd)");
    spec.filter = FilterSpec::parse(text.substr(colon + 1));
    return spec;
}

std::string MethodSpec::str() const {
    return (solver == SolverKind::Mgd ? std::string("mgd:") : std::string("smgd:")) +
           filter.str();
}

AlignOutcome run_alignment(const Graph& g1, const Graph& g2, const MethodSpec& method,
                           Preset preset, std::uint64_t seed) {
    const FilteredGraph f1 = materialize(g1, method.filter);
    const FilteredGraph f2 = materialize(g2, method.filter);

    const auto start = std::chrono::steady_clock::now();
    SolverResult result;
    if (method.solver == SolverKind::Mgd) {
        MgdConfig cfg = preset_mgd_config(preset, method.filter);
        cfg.seed = seed;
        result = mgd_solve(f1, f2, cfg);
    } else {
        StochasticConfig cfg = preset_smgd_config(preset);
        cfg.seed = seed;
        result = stochastic_mgd_solve(f1, f2, cfg);
    }

    AlignOutcome outcome;
    outcome.seconds = elapsed_seconds(start);
    if (g1.size() == g2.size() && result.hard.one_to_one) {
        outcome.frobenius = aligned_frobenius(g1, g2, result.hard);
        outcome.exact = exact_distance(f1, f2, result.hard.permutation());
    }
    outcome.result = std::move(result);
    return outcome;
}

std::vector<AlignmentBenchRow> alignment_benchmark(const std::vector<int>& sizes, int reps,
                                                   const std::vector<MethodSpec>& methods,
                                                   double edge_prob,
                                                   std::uint64_t master_seed, int jobs) {
    if (sizes.empty() || methods.empty() || reps < 1) {
        throw ValidationError("alignment benchmark needs sizes, methods, and reps >= 1");
    }
    struct Task {
        std::size_t size_index;
        int rep;
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        for (int r = 0; r < reps; ++r) tasks.push_back(Task{s, r});
    }

    std::vector<std::vector<AlignmentBenchRow>> per_task(tasks.size());
    parallel_for(jobs, tasks.size(), [&](std::size_t t) {
        const auto [size_index, rep] = tasks[t];
        const int n = sizes[size_index];
        const std::uint64_t g1_seed = split_seed(master_seed, size_index, rep, 1);
        const std::uint64_t g2_seed = split_seed(master_seed, size_index, rep, 2);
        const Graph g1 = erdos_renyi(n, edge_prob, g1_seed);
        const Graph g2 = erdos_renyi(n, edge_prob, g2_seed);

        std::vector<AlignmentBenchRow> rows;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const std::uint64_t seed = split_seed(master_seed, size_index, rep, 100 + m);
            const AlignOutcome outcome =
                run_alignment(g1, g2, methods[m], Preset::ErAlign, seed);
            rows.push_back(AlignmentBenchRow{n, methods[m].str(), rep,
                                             outcome.frobenius.value_or(-1.0),
                                             outcome.result.final_cost, outcome.seconds});
        }
        per_task[t] = std::move(rows);
    });

    std::vector<AlignmentBenchRow> rows;
    for (auto& task_rows : per_task) {
        rows.insert(rows.end(), task_rows.begin(), task_rows.end());
    }
    return rows;
}

std::vector<CommunityRow> community_experiment(CommunityKind kind,
                                               const std::vector<double>& grid,
                                               const std::vector<MethodSpec>& methods,
                                               int reps, const CommunityParams& params,
                                               std::uint64_t master_seed, int jobs) {
    if (grid.empty() || methods.empty() || reps < 1) {
        throw ValidationError("community experiment needs a grid, methods, and reps >= 1");
    }
    struct Task {
        std::size_t grid_index;
        int rep;
    };
    std::vector<Task> tasks;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (int r = 0; r < reps; ++r) tasks.push_back(Task{g, r});
    }

    std::vector<std::vector<CommunityRow>> per_task(tasks.size());
    parallel_for(jobs, tasks.size(), [&](std::size_t t) {
        const auto [grid_index, rep] = tasks[t];
        const double setting = grid[grid_index];

        SbmSpec spec;
        spec.n = params.base_size;
        spec.communities = params.communities;
        spec.p_in = params.p_in;
        spec.p_out = params.p_out;
        const SbmSample base = sbm(spec, split_seed(master_seed, grid_index, rep, 1));

        Graph g1 = base.graph;
        if (kind == CommunityKind::Fused) {
            g1 = fuse_nodes(base.graph, setting, split_seed(master_seed, grid_index, rep, 2))
                     .graph;
        } else {
            SbmSpec small = spec;
            small.n = static_cast<Index>(setting);
            g1 = sbm(small, split_seed(master_seed, grid_index, rep, 2)).graph;
        }
        const Permutation shuffle =
            random_permutation(g1.size(), split_seed(master_seed, grid_index, rep, 3));
        g1 = apply_permutation(g1, shuffle);
        const Graph& g2 = base.graph;

        const ClusteringResult c1 = spectral_clustering(
            g1, params.communities, split_seed(master_seed, grid_index, rep, 4));
        const ClusteringResult c2 = spectral_clustering(
            g2, params.communities, split_seed(master_seed, grid_index, rep, 5));

        std::vector<CommunityRow> rows;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const std::uint64_t seed = split_seed(master_seed, grid_index, rep, 100 + m);
            const AlignOutcome outcome =
                run_alignment(g1, g2, methods[m], Preset::SbmCommunity, seed);

            std::vector<int> mapped(c1.labels.size());
            for (std::size_t i = 0; i < mapped.size(); ++i) {
                mapped[i] = c2.labels[static_cast<std::size_t>(outcome.result.hard.map[i])];
            }
            CommunityRow row;
            row.setting = setting;
            row.method = methods[m].str();
            row.rep = rep;
            row.nmi = nmi(c1.labels, mapped);
            row.frobenius = outcome.frobenius;
            row.final_cost = outcome.result.final_cost;
            rows.push_back(std::move(row));
        }
        per_task[t] = std::move(rows);
    });

    std::vector<CommunityRow> rows;
    for (auto& task_rows : per_task) {
        rows.insert(rows.end(), task_rows.begin(), task_rows.end());
    }
    return rows;
}

namespace {

double line_search_c1(const std::vector<Graph>& graphs, const FilterSpec& filter,
                      const ClassificationOptions& options, std::uint64_t seed) {
    // Log-spaced candidates over [1e-3, 1e-1].
    std::vector<double> candidates;
    for (int i = 0; i < 7; ++i) {
        candidates.push_back(std::pow(10.0, -3.0 + 2.0 * i / 6.0));
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        for (std::size_t j = i + 1; j < graphs.size(); ++j) pairs.emplace_back(i, j);
    }
    auto rng = make_rng(split_seed(seed, 0x11e5, 0, 0));
    const std::size_t held = std::max<std::size_t>(1, pairs.size() / 5);
    for (std::size_t i = 0; i < held; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pairs.size() - 1);
        std::swap(pairs[i], pairs[pick(rng)]);
    }
    pairs.resize(held);

    std::vector<FilteredGraph> filtered;
    filtered.reserve(graphs.size());
    for (const Graph& g : graphs) filtered.push_back(materialize(g, filter));

    double best_c1 = candidates.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (double c1 : candidates) {
        std::vector<double> scores(pairs.size(), 0.0);
        parallel_for(options.jobs, pairs.size(), [&](std::size_t t) {
            const auto [i, j] = pairs[t];
            MgdConfig cfg;
            cfg.c1 = c1;
            cfg.c2 = options.c2;
            cfg.seed = split_seed(seed, i, j, 7);
            const SolverResult result = mgd_solve(filtered[i], filtered[j], cfg);
            const double norm =
                std::sqrt(filtered[i].gl_sq_trace * filtered[j].gl_sq_trace);
            scores[t] = norm > 0.0 ? result.final_cost / norm : result.final_cost;
        });
        const double mean =
            std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(held);
        if (mean < best_score) {
            best_score = mean;
            best_c1 = c1;
        }
    }
    return best_c1;
}

} // namespace

ClassificationReport classification_experiment(const GraphCollection& collection,
                                               const ClassificationOptions& options) {
    if (options.filters.empty() || options.reps < 1) {
        throw ValidationError("classification needs filters and reps >= 1");
    }
    ClassificationReport report;
    for (const FilterSpec& filter : options.filters) {
        std::vector<double> accuracies;
        for (int rep = 0; rep < options.reps; ++rep) {
            const std::uint64_t rep_seed = split_seed(options.seed, rep, 11, 0);
            GraphCollection sample = collection;
            if (options.sample && *options.sample < static_cast<Index>(collection.graphs.size())) {
                sample = sample_collection(collection, *options.sample, rep_seed);
            }

            double c1 = options.c1;
            if (options.line_search) {
                c1 = line_search_c1(sample.graphs, filter, options, rep_seed);
            }

            DistanceMatrixConfig cfg;
            cfg.filter = filter;
            cfg.solver = options.solver;
            cfg.mgd.c1 = c1;
            cfg.mgd.c2 = options.c2;
            cfg.smgd.c2 = preset_smgd_c2(Preset::Classify);
            cfg.seed = split_seed(rep_seed, 13, 0, 0);
            cfg.jobs = options.jobs;
            const DistanceMatrix dm = distance_matrix(sample.graphs, cfg);
            const OneNnReport nn = one_nn_classify(dm, split_seed(rep_seed, 17, 0, 0));

            ClassificationRow row;
            row.filter = filter.str();
            row.rep = rep;
            row.accuracy = nn.accuracy;
            row.chosen_c1 = c1;
            row.skipped = nn.skipped;
            report.rows.push_back(row);
            accuracies.push_back(nn.accuracy);
        }

        const double mean = std::accumulate(accuracies.begin(), accuracies.end(), 0.0) /
                            static_cast<double>(accuracies.size());
        double var = 0.0;
        for (double a : accuracies) var += (a - mean) * (a - mean);
        var = accuracies.size() > 1 ? var / static_cast<double>(accuracies.size() - 1) : 0.0;
        report.summary.push_back(FilterAccuracy{filter.str(), mean, std::sqrt(var)});
    }
    return report;
}

GraphCollection er_vs_sbm_collection(int count, Index n, double er_p,
                                     const CommunityParams& sbm_params,
                                     std::uint64_t seed) {
    if (count < 1) throw ValidationError("er_vs_sbm_collection requires count >= 1");
    GraphCollection collection;
    collection.name = "er-vs-sbm";
    collection.source = "synthetic";
    for (int i = 0; i < count; ++i) {
        Mat w = erdos_renyi(n, er_p, split_seed(seed, 0, i, 0)).weights();
        collection.graphs.emplace_back(std::move(w), 0);
    }
    SbmSpec spec;
    spec.n = n;
    spec.communities = sbm_params.communities;
    spec.p_in = sbm_params.p_in;
    spec.p_out = sbm_params.p_out;
    for (int i = 0; i < count; ++i) {
        Mat w = sbm(spec, split_seed(seed, 1, i, 0)).graph.weights();
        collection.graphs.emplace_back(std::move(w), 1);
    }
    return collection;
}

std::vector<Graph> demo_graph_suite() {
    const Index n = 12;
    auto ring_with = [n](const std::vector<std::pair<int, int>>& extra,
                         const std::vector<std::pair<int, int>>& removed) {
        Mat w = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            const int j = (i + 1) % n;
            w(i, j) = w(j, i) = 1.0;
        }
        for (auto [a, b] : extra) w(a, b) = w(b, a) = 1.0;
        for (auto [a, b] : removed) w(a, b) = w(b, a) = 0.0;
        return Graph(std::move(w));
    };

    const std::vector<std::pair<int, int>> chords = {{0, 4}, {3, 9}, {6, 11}};
    std::vector<Graph> graphs;
    // G0: the reference, a chorded ring.
    graphs.push_back(ring_with(chords, {}));
    // G1..G5: local chord edits that keep the ring intact.
    graphs.push_back(ring_with({{0, 4}, {3, 9}}, {}));                        // one chord removed
    graphs.push_back(ring_with({{0, 4}, {3, 9}, {6, 11}, {2, 7}}, {}));       // one chord added
    graphs.push_back(ring_with({{0, 4}, {3, 9}, {6, 10}}, {}));               // chord moved
    graphs.push_back(ring_with({{0, 4}, {3, 9}, {6, 11}, {1, 5}, {8, 11}}, {}));  // two added
    graphs.push_back(ring_with({{0, 5}, {3, 9}, {6, 11}}, {}));               // chord stretched
    // G6: globally broken ring (three consecutive ring edges removed).
    graphs.push_back(ring_with(chords, {{7, 8}, {8, 9}, {9, 10}}));
    // G7: disconnected (vertex 1 split off with its ring edges).
    graphs.push_back(ring_with({{0, 2}, {0, 4}, {3, 9}, {6, 11}}, {{0, 1}, {1, 2}}));
    return graphs;
}

std::vector<OrderingRow> filter_ordering_demo(const std::vector<Graph>& graphs,
                                              const std::vector<FilterSpec>& filters,
                                              std::uint64_t seed, int jobs) {
    if (graphs.size() < 2) throw ValidationError("ordering demo needs a reference and candidates");
    for (const Graph& g : graphs) {
        if (g.size() != graphs.front().size()) {
            throw ValidationError("ordering demo requires equal-size graphs");
        }
    }

    std::vector<OrderingRow> rows(filters.size());
    struct Task {
        std::size_t filter_index;
        std::size_t graph_index;
    };
    std::vector<Task> tasks;
    for (std::size_t f = 0; f < filters.size(); ++f) {
        for (std::size_t g = 1; g < graphs.size(); ++g) tasks.push_back(Task{f, g});
    }

    Mat distances(static_cast<Index>(filters.size()), static_cast<Index>(graphs.size()));
    distances.setZero();
    parallel_for(jobs, tasks.size(), [&](std::size_t t) {
        const auto [fi, gi] = tasks[t];
        const FilteredGraph ref = materialize(graphs[0], filters[fi]);
        const FilteredGraph cand = materialize(graphs[gi], filters[fi]);

        StochasticConfig cfg = preset_smgd_config(Preset::SbmCommunity);
        cfg.seed = split_seed(seed, fi, gi, 0);
        const SolverResult result = stochastic_mgd_solve(ref, cand, cfg);

        double best = exact_distance(ref, cand, Permutation::identity(ref.size()));
        if (result.hard.one_to_one) {
            best = std::min(best, exact_distance(ref, cand, result.hard.permutation()));
        }
        distances(static_cast<Index>(fi), static_cast<Index>(gi)) = best;
    });

    for (std::size_t f = 0; f < filters.size(); ++f) {
        OrderingRow row;
        row.filter = filters[f].str();
        row.ordering.push_back(OrderingEntry{0, 0.0});  // the reference itself
        std::vector<OrderingEntry> rest;
        for (std::size_t g = 1; g < graphs.size(); ++g) {
            rest.push_back(OrderingEntry{static_cast<int>(g),
                                         distances(static_cast<Index>(f), static_cast<Index>(g))});
        }
        std::stable_sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
            return a.distance < b.distance;
        });
        row.ordering.insert(row.ordering.end(), rest.begin(), rest.end());
        rows[f] = std::move(row);
    }
    return rows;
}

std::vector<FilterSpec> table_filters() {
    const FilterSpec g1 = FilterSpec::pinv_sqrt();
    const FilterSpec g2 = FilterSpec::square();
    const FilterSpec g3 = FilterSpec::heat(0.8);
    return {g1,
            g2,
            g3,
            FilterSpec::sum({g1, g2}),
            FilterSpec::sum({g1, g3}),
            FilterSpec::sum({g2, g3})};
}

} // namespace fgot
