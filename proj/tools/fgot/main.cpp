#include "fgot/dataset_io.hpp"
#include "fgot/distance.hpp"
#include "fgot/evaluation.hpp"
#include "fgot/experiments.hpp"
#include "fgot/generators.hpp"
#include "fgot/random.hpp"
#include "fgot/solvers.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace fgot;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    for (const std::string& tok : split_list(text)) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw ValidationError(std::string("bad ") + what + " entry '" + tok + "'");
        }
    }
    if (out.empty()) throw ValidationError(std::string("empty ") + what + " list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const std::string& tok : split_list(text)) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ValidationError(std::string("bad ") + what + " entry '" + tok + "'");
        }
    }
    if (out.empty()) throw ValidationError(std::string("empty ") + what + " list");
    return out;
}

std::vector<FilterSpec> parse_filter_list(const std::string& text) {
    if (text == "all6") return table_filters();
    std::vector<FilterSpec> out;
    for (const std::string& tok : split_list(text)) out.push_back(FilterSpec::parse(tok));
    if (out.empty()) throw ValidationError("empty filter list");
    return out;
}

/// A graph argument: a file path, "er:<n>:<p>", or "sbm:<n>:<k>:<pin>:<pout>".
Graph load_graph_arg(const std::string& spec, std::uint64_t seed) {
    if (spec.rfind("er:", 0) == 0) {
        const auto parts = split_list(std::string(spec.substr(3)));
        std::istringstream is(spec.substr(3));
        std::string n_str, p_str;
        if (!std::getline(is, n_str, ':') || !std::getline(is, p_str)) {
            throw ValidationError("expected er:<n>:<p>, got '" + spec + "'");
        }
        (void)parts;
        return erdos_renyi(std::stoi(n_str), std::stod(p_str), seed);
    }
    if (spec.rfind("sbm:", 0) == 0) {
        std::istringstream is(spec.substr(4));
        std::string n_str, k_str, pin_str, pout_str;
        if (!std::getline(is, n_str, ':') || !std::getline(is, k_str, ':') ||
            !std::getline(is, pin_str, ':') || !std::getline(is, pout_str)) {
            throw ValidationError("expected sbm:<n>:<k>:<p_in>:<p_out>, got '" + spec + "'");
        }
        SbmSpec s;
        s.n = std::stoi(n_str);
        s.communities = std::stoi(k_str);
        s.p_in = std::stod(pin_str);
        s.p_out = std::stod(pout_str);
        return sbm(s, seed).graph;
    }
    std::vector<std::string> warnings;
    Graph g = load_edge_list(spec, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    return g;
}

int default_jobs() {
    if (const char* env = std::getenv("FGOT_JOBS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw ValidationError("FGOT_JOBS must be an integer");
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// align

struct AlignArgs {
    std::string g1, g2;
    std::string filter = "sq";
    std::string solver = "smgd";
    std::string preset = "er-align";
    std::uint64_t seed = 0;
    double alpha = -1.0;
    double epsilon = -1.0;
    double c1 = -1.0;
    double c2 = -1.0;
    bool oracle = false;
    std::string out;
};

int cmd_align(const AlignArgs& args) {
    const Graph g1 = load_graph_arg(args.g1, split_seed(args.seed, 1));
    const Graph g2 = load_graph_arg(args.g2, split_seed(args.seed, 2));
    const FilterSpec filter = FilterSpec::parse(args.filter);
    const Preset preset = parse_preset(args.preset);

    const FilteredGraph f1 = materialize(g1, filter);
    const FilteredGraph f2 = materialize(g2, filter);

    SolverKind kind;
    if (args.solver == "mgd") kind = SolverKind::Mgd;
    else if (args.solver == "smgd") kind = SolverKind::Smgd;
    else throw ValidationError("unknown solver '" + args.solver + "'");

    const auto start = std::chrono::steady_clock::now();
    SolverResult result;
    if (kind == SolverKind::Mgd) {
        MgdConfig cfg = preset_mgd_config(preset, filter);
        cfg.seed = args.seed;
        if (args.c1 > 0) cfg.c1 = args.c1;
        if (args.c2 > 0) cfg.c2 = args.c2;
        if (args.alpha > 0) cfg.alpha = args.alpha;
        if (args.epsilon >= 0) cfg.epsilon = args.epsilon;
        result = mgd_solve(f1, f2, cfg);
    } else {
        StochasticConfig cfg = preset_smgd_config(preset);
        cfg.seed = args.seed;
        if (args.c2 > 0) cfg.c2 = args.c2;
        if (args.alpha > 0) cfg.alpha = args.alpha;
        result = stochastic_mgd_solve(f1, f2, cfg);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::cout << "pair: " << g1.size() << " x " << g2.size() << " vertices\n"
              << "filter: " << filter.str() << "  solver: " << args.solver
              << "  seed: " << args.seed << "\n"
              << "iterations: " << result.iterations << "\n"
              << "final cost (rescaled surrogate): " << format_double(result.final_cost)
              << "\n";

    std::cout << "assignment:";
    for (std::size_t i = 0; i < result.hard.map.size(); ++i) {
        std::cout << ' ' << i << "->" << result.hard.map[i];
    }
    std::cout << (result.hard.degenerate ? "  (degenerate coupling, tie-break)" : "") << "\n";

    std::optional<double> frob;
    std::optional<double> exact;
    if (g1.size() == g2.size() && result.hard.one_to_one) {
        frob = aligned_frobenius(g1, g2, result.hard);
        exact = exact_distance(f1, f2, result.hard.permutation());
        std::cout << "aligned Frobenius error: " << format_double(*frob) << "\n"
                  << "exact distance at assignment: " << format_double(*exact) << "\n";
    }

    std::optional<double> oracle_min;
    if (args.oracle) {
        if (g1.size() != g2.size() || g1.size() > 8) {
            throw ValidationError("--oracle requires equal sizes with n <= 8");
        }
        const BruteForceResult brute = brute_force_align(f1, f2);
        oracle_min = brute.exact_min;
        std::cout << "oracle exact minimum: " << format_double(brute.exact_min)
                  << "  surrogate minimum: " << format_double(brute.surrogate_min) << "\n";
        if (exact) {
            std::cout << "optimality gap: " << format_double(*exact - brute.exact_min) << "\n";
        }
    }
    std::cout << "runtime: " << seconds << " s\n";

    if (!args.out.empty()) {
        ResultTable table;
        table.metadata = {{"command", "align"},
                          {"seed", std::to_string(args.seed)},
                          {"filter", filter.str()},
                          {"solver", args.solver},
                          {"preset", args.preset}};
        table.columns = {"n1", "n2", "final_cost", "frobenius", "exact", "oracle_min"};
        table.rows = {{std::to_string(g1.size()), std::to_string(g2.size()),
                       format_double(result.final_cost),
                       frob ? format_double(*frob) : "",
                       exact ? format_double(*exact) : "",
                       oracle_min ? format_double(*oracle_min) : ""}};
        write_results(table, args.out);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// benchmark-alignment

struct BenchArgs {
    std::string sizes = "10,20,30";
    int reps = 20;
    std::string methods = "mgd:sq,smgd:sq,mgd:pinv-sqrt,smgd:pinv-sqrt";
    double p = 0.4;
    std::uint64_t seed = 0;
    int jobs = 0;
    bool timings = false;
    std::string out;
};

int cmd_benchmark_alignment(const BenchArgs& args) {
    std::vector<MethodSpec> methods;
    for (const std::string& tok : split_list(args.methods)) {
        methods.push_back(MethodSpec::parse(tok));
    }
    const std::vector<int> sizes = parse_int_list(args.sizes, "size");
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();

    const auto rows =
        alignment_benchmark(sizes, args.reps, methods, args.p, args.seed, jobs);

    // Aggregate mean +- std of the Frobenius error per (size, method).
    std::cout << "size  method              frobenius (mean +- std)\n";
    for (int n : sizes) {
        for (const MethodSpec& m : methods) {
            std::vector<double> values;
            for (const auto& row : rows) {
                if (row.size == n && row.method == m.str()) values.push_back(row.frobenius);
            }
            double mean = 0.0, var = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            for (double v : values) var += (v - mean) * (v - mean);
            var = values.size() > 1 ? var / static_cast<double>(values.size() - 1) : 0.0;
            std::ostringstream line;
            line.setf(std::ios::left);
            line.width(6);
            line << n;
            line.width(20);
            line << m.str();
            std::cout << line.str() << mean << " +- " << std::sqrt(var) << "\n";
        }
    }

    if (!args.out.empty()) {
        ResultTable table;
        table.metadata = {{"command", "benchmark-alignment"},
                          {"seed", std::to_string(args.seed)},
                          {"edge_prob", format_double(args.p)},
                          {"reps", std::to_string(args.reps)},
                          {"preset", "er-align"}};
        table.columns = {"size", "method", "rep", "frobenius", "final_cost"};
        if (args.timings) table.columns.push_back("seconds");
        for (const auto& row : rows) {
            std::vector<std::string> fields = {std::to_string(row.size), row.method,
                                               std::to_string(row.rep),
                                               format_double(row.frobenius),
                                               format_double(row.final_cost)};
            if (args.timings) fields.push_back(format_double(row.seconds));
            table.rows.push_back(std::move(fields));
        }
        write_results(table, args.out);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// community

struct CommunityArgs {
    std::string experiment = "fused";
    std::string grid;
    std::string filters = "pinv-sqrt,heat:0.2,heat:0.8";
    std::string solvers = "mgd,smgd";
    int reps = 20;
    Index n = 24;
    int communities = 4;
    double p_in = 0.7;
    double p_out = 0.05;
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string out;
};

int cmd_community(const CommunityArgs& args) {
    CommunityKind kind;
    if (args.experiment == "fused") kind = CommunityKind::Fused;
    else if (args.experiment == "random-size") kind = CommunityKind::RandomSize;
    else throw ValidationError("experiment must be fused or random-size");

    std::string grid_text = args.grid;
    if (grid_text.empty()) {
        grid_text = kind == CommunityKind::Fused ? "0,0.1,0.2,0.3" : "12,16,20,24";
    }
    const std::vector<double> grid = parse_double_list(grid_text, "grid");

    std::vector<MethodSpec> methods;
    for (const std::string& solver : split_list(args.solvers)) {
        for (const FilterSpec& filter : parse_filter_list(args.filters)) {
            MethodSpec m;
            if (solver == "mgd") m.solver = SolverKind::Mgd;
            else if (solver == "smgd") m.solver = SolverKind::Smgd;
            else throw ValidationError("unknown solver '" + solver + "'");
            m.filter = filter;
            methods.push_back(m);
        }
    }

    CommunityParams params;
    params.base_size = args.n;
    params.communities = args.communities;
    params.p_in = args.p_in;
    params.p_out = args.p_out;
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();

    const auto rows =
        community_experiment(kind, grid, methods, args.reps, params, args.seed, jobs);

    std::cout << "setting  method                   nmi (mean)\n";
    for (double setting : grid) {
        for (const MethodSpec& m : methods) {
            double mean = 0.0;
            int count = 0;
            for (const auto& row : rows) {
                if (row.setting == setting && row.method == m.str()) {
                    mean += row.nmi;
                    ++count;
                }
            }
            std::ostringstream line;
            line.setf(std::ios::left);
            line.width(9);
            line << setting;
            line.width(25);
            line << m.str();
            std::cout << line.str() << (count > 0 ? mean / count : 0.0) << "\n";
        }
    }

    if (!args.out.empty()) {
        ResultTable table;
        table.metadata = {{"command", "community"},
                          {"experiment", args.experiment},
                          {"seed", std::to_string(args.seed)},
                          {"reps", std::to_string(args.reps)},
                          {"sbm", std::to_string(args.n) + " nodes, " +
                                      std::to_string(args.communities) + " communities"},
                          {"p_in", format_double(args.p_in)},
                          {"p_out", format_double(args.p_out)},
                          {"preset", "sbm-community"}};
        table.columns = {"setting", "method", "rep", "nmi", "frobenius", "final_cost"};
        for (const auto& row : rows) {
            table.rows.push_back({format_double(row.setting), row.method,
                                  std::to_string(row.rep), format_double(row.nmi),
                                  row.frobenius ? format_double(*row.frobenius) : "",
                                  format_double(row.final_cost)});
        }
        write_results(table, args.out);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyArgs {
    std::string dataset;
    std::string name;
    bool synthetic = false;
    int synthetic_count = 30;
    Index synthetic_n = 20;
    Index sample = 0;
    std::string filters = "all6";
    std::string solver = "mgd";
    int reps = 1;
    bool line_search = false;
    double c1 = 2e-2;
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string out;
    std::string save_distances;
};

int cmd_classify(const ClassifyArgs& args) {
    GraphCollection collection;
    if (args.synthetic) {
        CommunityParams sbm_params;
        collection = er_vs_sbm_collection(args.synthetic_count, args.synthetic_n, 0.2,
                                          sbm_params, split_seed(args.seed, 999));
    } else {
        if (args.dataset.empty() || args.name.empty()) {
            throw ValidationError("classify needs --dataset and --name, or --synthetic");
        }
        collection = load_tudataset(args.dataset, args.name);
    }

    ClassificationOptions options;
    options.filters = parse_filter_list(args.filters);
    if (args.solver == "mgd") options.solver = SolverKind::Mgd;
    else if (args.solver == "smgd") options.solver = SolverKind::Smgd;
    else throw ValidationError("unknown solver '" + args.solver + "'");
    if (args.sample > 0) options.sample = args.sample;
    options.reps = args.reps;
    options.line_search = args.line_search;
    options.c1 = args.c1;
    options.seed = args.seed;
    options.jobs = args.jobs > 0 ? args.jobs : default_jobs();

    const ClassificationReport report = classification_experiment(collection, options);

    std::cout << "dataset: " << collection.name << " (" << collection.graphs.size()
              << " graphs)\n";
    std::cout << "filter                    accuracy (mean +- std over " << args.reps
              << " reps)\n";
    for (const FilterAccuracy& acc : report.summary) {
        std::ostringstream line;
        line.setf(std::ios::left);
        line.width(26);
        line << acc.filter;
        std::cout << line.str() << acc.mean << " +- " << acc.stddev << "\n";
    }

    if (!args.out.empty()) {
        ResultTable table;
        table.metadata = {{"command", "classify"},
                          {"dataset", collection.name},
                          {"seed", std::to_string(args.seed)},
                          {"solver", args.solver},
                          {"reps", std::to_string(args.reps)},
                          {"line_search", args.line_search ? "yes" : "no"}};
        table.columns = {"filter", "rep", "accuracy", "c1", "skipped"};
        for (const auto& row : report.rows) {
            table.rows.push_back({row.filter, std::to_string(row.rep),
                                  format_double(row.accuracy), format_double(row.chosen_c1),
                                  std::to_string(row.skipped)});
        }
        write_results(table, args.out);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// demo-ordering

struct DemoArgs {
    std::string reference;
    std::string candidates;
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string out;
};

int cmd_demo_ordering(const DemoArgs& args) {
    std::vector<Graph> graphs;
    if (args.reference.empty()) {
        graphs = demo_graph_suite();
    } else {
        graphs.push_back(load_graph_arg(args.reference, split_seed(args.seed, 0)));
        if (args.candidates.empty()) {
            throw ValidationError("--reference needs a --candidates list");
        }
        std::size_t i = 1;
        for (const std::string& tok : split_list(args.candidates)) {
            graphs.push_back(load_graph_arg(tok, split_seed(args.seed, i++)));
        }
    }

    const std::vector<FilterSpec> filters = {FilterSpec::heat(5.0), FilterSpec::pinv_sqrt(),
                                             FilterSpec::heat(0.5), FilterSpec::sqrt(),
                                             FilterSpec::square()};
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();
    const auto rows = filter_ordering_demo(graphs, filters, args.seed, jobs);

    for (const OrderingRow& row : rows) {
        std::cout << row.filter << ":";
        for (const OrderingEntry& e : row.ordering) {
            std::cout << "  G" << e.graph_index << " (" << format_double(e.distance) << ")";
        }
        std::cout << "\n";
    }

    if (!args.out.empty()) {
        ResultTable table;
        table.metadata = {{"command", "demo-ordering"}, {"seed", std::to_string(args.seed)}};
        table.columns = {"filter", "rank", "graph", "distance"};
        for (const OrderingRow& row : rows) {
            for (std::size_t rank = 0; rank < row.ordering.size(); ++rank) {
                table.rows.push_back({row.filter, std::to_string(rank),
                                      "G" + std::to_string(row.ordering[rank].graph_index),
                                      format_double(row.ordering[rank].distance)});
            }
        }
        write_results(table, args.out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fgot: filter graph optimal-transport distances, alignment, and experiments"};
    app.require_subcommand(1);
    int status = 0;

    AlignArgs align;
    auto* align_cmd = app.add_subcommand("align", "Align two graphs and report distances");
    align_cmd->add_option("--g1", align.g1, "First graph: path, er:<n>:<p>, or sbm:<n>:<k>:<pin>:<pout>")
        ->required();
    align_cmd->add_option("--g2", align.g2, "Second graph (same forms as --g1)")->required();
    align_cmd->add_option("--filter", align.filter, "Filter string, e.g. sq or pinv-sqrt+heat:0.8");
    align_cmd->add_option("--solver", align.solver, "mgd or smgd");
    align_cmd->add_option("--preset", align.preset,
                          "Hyperparameter preset: er-align, sbm-community, classify-linesearch");
    align_cmd->add_option("--seed", align.seed, "Master seed");
    align_cmd->add_option("--alpha", align.alpha, "Step size override");
    align_cmd->add_option("--epsilon", align.epsilon, "Entropic weight override (mgd)");
    align_cmd->add_option("--c1", align.c1, "Entropic scale c1 override (mgd)");
    align_cmd->add_option("--c2", align.c2, "Step scale c2 override");
    align_cmd->add_flag("--oracle", align.oracle, "Brute-force optimum and gap (n <= 8)");
    align_cmd->add_option("--out", align.out, "Write a one-row CSV report");
    align_cmd->callback([&] { status = cmd_align(align); });

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand(
        "benchmark-alignment", "Frobenius error of ER alignment across sizes and methods");
    bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated graph sizes");
    bench_cmd->add_option("--reps", bench.reps, "Repetitions per size");
    bench_cmd->add_option("--methods", bench.methods, "Comma-separated <solver>:<filter> list");
    bench_cmd->add_option("--p", bench.p, "Erdos-Renyi edge probability");
    bench_cmd->add_option("--seed", bench.seed, "Master seed");
    bench_cmd->add_option("--jobs", bench.jobs, "Worker threads (default: cores or FGOT_JOBS)");
    bench_cmd->add_flag("--timings", bench.timings, "Include wall-time column in the CSV");
    bench_cmd->add_option("--out", bench.out, "CSV output path");
    bench_cmd->callback([&] { status = cmd_benchmark_alignment(bench); });

    CommunityArgs community;
    auto* community_cmd = app.add_subcommand(
        "community", "Community alignment on fused or independent SBM graphs");
    community_cmd->add_option("--experiment", community.experiment, "fused or random-size");
    community_cmd->add_option("--grid", community.grid,
                              "Fractions (fused) or sizes (random-size), comma-separated");
    community_cmd->add_option("--filters", community.filters, "Comma-separated filter list");
    community_cmd->add_option("--solvers", community.solvers, "Comma-separated solver list");
    community_cmd->add_option("--reps", community.reps, "Repetitions per grid point");
    community_cmd->add_option("--n", community.n, "Base SBM size");
    community_cmd->add_option("--communities", community.communities, "Community count");
    community_cmd->add_option("--p-in", community.p_in, "Intra-community edge probability");
    community_cmd->add_option("--p-out", community.p_out, "Inter-community edge probability");
    community_cmd->add_option("--seed", community.seed, "Master seed");
    community_cmd->add_option("--jobs", community.jobs, "Worker threads");
    community_cmd->add_option("--out", community.out, "CSV output path");
    community_cmd->callback([&] { status = cmd_community(community); });

    ClassifyArgs classify;
    auto* classify_cmd =
        app.add_subcommand("classify", "1-NN classification over pairwise distances");
    classify_cmd->add_option("--dataset", classify.dataset, "TUDataset directory");
    classify_cmd->add_option("--name", classify.name, "Dataset name, e.g. MUTAG");
    classify_cmd->add_flag("--synthetic", classify.synthetic, "Use the built-in ER-vs-SBM task");
    classify_cmd->add_option("--synthetic-count", classify.synthetic_count,
                             "Graphs per class for --synthetic");
    classify_cmd->add_option("--synthetic-n", classify.synthetic_n, "Vertices for --synthetic");
    classify_cmd->add_option("--sample", classify.sample, "Subsample size per repetition");
    classify_cmd->add_option("--filters", classify.filters,
                             "Filter list or all6 for the six standard filters");
    classify_cmd->add_option("--solver", classify.solver, "mgd or smgd");
    classify_cmd->add_option("--reps", classify.reps, "Repetitions");
    classify_cmd->add_flag("--line-search", classify.line_search,
                           "Line-search c1 on a held-out 20% of pairs");
    classify_cmd->add_option("--c1", classify.c1, "Fixed c1 when not line-searching");
    classify_cmd->add_option("--seed", classify.seed, "Master seed");
    classify_cmd->add_option("--jobs", classify.jobs, "Worker threads");
    classify_cmd->add_option("--out", classify.out, "CSV output path");
    classify_cmd->callback([&] { status = cmd_classify(classify); });

    DemoArgs demo;
    auto* demo_cmd = app.add_subcommand(
        "demo-ordering", "Order graphs by filter distance to a reference graph");
    demo_cmd->add_option("--reference", demo.reference,
                         "Reference graph (default: built-in chorded-ring suite)");
    demo_cmd->add_option("--candidates", demo.candidates, "Comma-separated candidate graphs");
    demo_cmd->add_option("--seed", demo.seed, "Master seed");
    demo_cmd->add_option("--jobs", demo.jobs, "Worker threads");
    demo_cmd->add_option("--out", demo.out, "CSV output path");
    demo_cmd->callback([&] { status = cmd_demo_ordering(demo); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return status;
}
