#pragma once

#include "fgot/dataset_io.hpp"
#include "fgot/evaluation.hpp"
#include "fgot/generators.hpp"
#include "fgot/solvers.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fgot {

/// Named hyperparameter presets. The c1/c2 scalings follow the reported
/// experiment settings; Classify performs a log-spaced line search for c1 on
/// a held-out share of pairs when enabled.
enum class Preset { ErAlign, SbmCommunity, Classify };

Preset parse_preset(const std::string& name);
std::string preset_name(Preset preset);

double preset_c1(Preset preset, const FilterSpec& filter);
double preset_smgd_c2(Preset preset);

MgdConfig preset_mgd_config(Preset preset, const FilterSpec& filter);
StochasticConfig preset_smgd_config(Preset preset);

/// A solver/filter combination, e.g. "smgd:heat:0.8" or "mgd:sq".
struct MethodSpec {
    SolverKind solver = SolverKind::Mgd;
    FilterSpec filter = FilterSpec::square();

    static MethodSpec parse(const std::string& text);
    std::string str() const;
};

/// One alignment run: solve, round, and score.
struct AlignOutcome {
    SolverResult result;
    std::optional<double> frobenius;  // equal sizes with one-to-one rounding only
    std::optional<double> exact;      // exact distance at the rounded permutation
    double seconds = 0.0;
};

AlignOutcome run_alignment(const Graph& g1, const Graph& g2, const MethodSpec& method,
                           Preset preset, std::uint64_t seed);

struct AlignmentBenchRow {
    int size = 0;
    std::string method;
    int rep = 0;
    double frobenius = 0.0;
    double final_cost = 0.0;
    double seconds = 0.0;
};

/// Aligns independent Erdos-Renyi pairs over a size grid; all methods see the
/// same graph pair for a given (size, rep).
std::vector<AlignmentBenchRow> alignment_benchmark(const std::vector<int>& sizes, int reps,
                                                   const std::vector<MethodSpec>& methods,
                                                   double edge_prob,
                                                   std::uint64_t master_seed, int jobs);

enum class CommunityKind { Fused, RandomSize };

struct CommunityParams {
    Index base_size = 24;
    int communities = 4;
    double p_in = 0.7;
    double p_out = 0.05;
};

struct CommunityRow {
    double setting = 0.0;  // fused fraction or smaller-graph size
    std::string method;
    int rep = 0;
    double nmi = 0.0;
    std::optional<double> frobenius;  // square instances only
    double final_cost = 0.0;
};

/// Fused: G1 is a node-fused, randomly permuted copy of an SBM G2, swept over
/// fusion fractions. RandomSize: G1 is an independent smaller SBM, swept over
/// sizes. Community recovery is scored by NMI of the two spectral clusterings
/// after mapping G2 labels through the hard assignment.
std::vector<CommunityRow> community_experiment(CommunityKind kind,
                                               const std::vector<double>& grid,
                                               const std::vector<MethodSpec>& methods,
                                               int reps, const CommunityParams& params,
                                               std::uint64_t master_seed, int jobs);

struct ClassificationOptions {
    std::vector<FilterSpec> filters;
    SolverKind solver = SolverKind::Mgd;
    std::optional<Index> sample;  // per-repetition subsample size
    int reps = 1;
    bool line_search = false;     // tune c1 on a held-out 20% of pairs
    double c1 = 1e-2;             // fixed c1 when line_search is off
    double c2 = 1.0;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct ClassificationRow {
    std::string filter;
    int rep = 0;
    double accuracy = 0.0;
    double chosen_c1 = 0.0;
    int skipped = 0;
};

struct FilterAccuracy {
    std::string filter;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ClassificationReport {
    std::vector<ClassificationRow> rows;
    std::vector<FilterAccuracy> summary;
};

ClassificationReport classification_experiment(const GraphCollection& collection,
                                               const ClassificationOptions& options);

/// Synthetic two-class benchmark: `count` Erdos-Renyi graphs (label 0) and
/// `count` four-community SBM graphs (label 1), all of equal size.
GraphCollection er_vs_sbm_collection(int count, Index n, double er_p,
                                     const CommunityParams& sbm_params,
                                     std::uint64_t seed);

/// Built-in reference graph plus perturbed variants for the filter-ordering
/// demo: a chorded ring, local chord edits, a globally broken ring, and a
/// disconnected variant.
std::vector<Graph> demo_graph_suite();

struct OrderingEntry {
    int graph_index = 0;
    double distance = 0.0;
};

struct OrderingRow {
    std::string filter;
    std::vector<OrderingEntry> ordering;  // sorted by increasing exact distance
};

/// Sorts graphs[1..] by exact filter distance to graphs[0] under the best
/// alignment found (stochastic solver vs. identity, whichever is lower).
std::vector<OrderingRow> filter_ordering_demo(const std::vector<Graph>& graphs,
                                              const std::vector<FilterSpec>& filters,
                                              std::uint64_t seed, int jobs);

/// Table 1's six filters: pinv-sqrt, sq, heat:0.8 and their pairwise sums.
std::vector<FilterSpec> table_filters();

} // namespace fgot
