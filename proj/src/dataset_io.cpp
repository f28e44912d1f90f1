#include "fgot/dataset_io.hpp"

#include "fgot/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace fgot {

namespace {

std::uint64_t fnv1a(std::uint64_t state, const std::string& bytes) {
    for (unsigned char c : bytes) {
        state ^= c;
        state *= 1099511628211ULL;
    }
    return state;
}

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (is >> tok) tokens.push_back(tok);
    return tokens;
}

[[noreturn]] void parse_fail(const std::string& path, int line_no, const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line_no << ": " << what;
    throw ValidationError(os.str());
}

long parse_long(const std::string& tok, const std::string& path, int line_no) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        parse_fail(path, line_no, "expected an integer, got '" + tok + "'");
    }
    return value;
}

double parse_weight(const std::string& tok, const std::string& path, int line_no) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(tok, &used);
    } catch (const std::exception&) {
        parse_fail(path, line_no, "expected a weight, got '" + tok + "'");
    }
    if (used != tok.size()) parse_fail(path, line_no, "trailing characters in weight '" + tok + "'");
    if (!(value > 0.0)) parse_fail(path, line_no, "edge weight must be positive");
    return value;
}

std::ifstream open_or_fail(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return in;
}

} // namespace

Graph load_edge_list(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in = open_or_fail(path);

    struct Edge {
        long u, v;
        double w;
        int line;
    };
    std::vector<Edge> edges;
    long declared_n = -1;
    long max_id = -1;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(strip_comment(line));
        if (tokens.empty()) continue;
        if (tokens[0] == "n") {
            if (tokens.size() != 2) parse_fail(path, line_no, "header must be 'n <count>'");
            declared_n = parse_long(tokens[1], path, line_no);
            if (declared_n < 1) parse_fail(path, line_no, "header count must be >= 1");
            continue;
        }
        if (tokens.size() != 2 && tokens.size() != 3) {
            parse_fail(path, line_no, "expected 'u v [w]'");
        }
        const long u = parse_long(tokens[0], path, line_no);
        const long v = parse_long(tokens[1], path, line_no);
        if (u < 0 || v < 0) parse_fail(path, line_no, "vertex ids must be nonnegative");
        if (u == v) parse_fail(path, line_no, "self-loops are not supported");
        const double w = tokens.size() == 3 ? parse_weight(tokens[2], path, line_no) : 1.0;
        edges.push_back(Edge{u, v, w, line_no});
        max_id = std::max({max_id, u, v});
    }

    const long n = declared_n >= 0 ? declared_n : max_id + 1;
    if (n < 1) throw ValidationError(path + ": no vertices (empty edge list without header)");
    if (max_id >= n) {
        throw ValidationError(path + ": vertex id " + std::to_string(max_id) +
                              " exceeds declared count " + std::to_string(n));
    }

    Mat w = Mat::Zero(n, n);
    for (const Edge& e : edges) {
        if (w(e.u, e.v) != 0.0 && warnings) {
            std::ostringstream os;
            os << path << ":" << e.line << ": duplicate edge (" << e.u << ", " << e.v
               << "), weights summed";
            warnings->push_back(os.str());
        }
        w(e.u, e.v) += e.w;
        w(e.v, e.u) = w(e.u, e.v);
    }
    return Graph(std::move(w));
}

GraphCollection load_tudataset(const std::string& dir, const std::string& name) {
    const std::string a_path = dir + "/" + name + "_A.txt";
    const std::string ind_path = dir + "/" + name + "_graph_indicator.txt";
    const std::string lab_path = dir + "/" + name + "_graph_labels.txt";

    std::uint64_t checksum = 14695981039346656037ULL;

    // graph_indicator: node id (implicit, 1-based line number) -> graph id.
    std::vector<long> node_graph;  // 0-based graph id per 0-based node
    {
        std::ifstream in = open_or_fail(ind_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            checksum = fnv1a(checksum, line);
            const auto tokens = split_ws(line);
            if (tokens.empty()) continue;
            node_graph.push_back(parse_long(tokens[0], ind_path, line_no) - 1);
        }
    }
    if (node_graph.empty()) throw ValidationError(ind_path + ": no nodes");

    const long num_graphs = *std::max_element(node_graph.begin(), node_graph.end()) + 1;
    std::vector<long> local_index(node_graph.size());
    std::vector<long> graph_size(static_cast<std::size_t>(num_graphs), 0);
    for (std::size_t v = 0; v < node_graph.size(); ++v) {
        const long g = node_graph[v];
        if (g < 0) throw ValidationError(ind_path + ": graph ids must be >= 1");
        local_index[v] = graph_size[static_cast<std::size_t>(g)]++;
    }

    std::vector<int> labels;
    {
        std::ifstream in = open_or_fail(lab_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            checksum = fnv1a(checksum, line);
            const auto tokens = split_ws(line);
            if (tokens.empty()) continue;
            labels.push_back(static_cast<int>(parse_long(tokens[0], lab_path, line_no)));
        }
    }
    if (static_cast<long>(labels.size()) != num_graphs) {
        throw ValidationError(lab_path + ": label count " + std::to_string(labels.size()) +
                              " does not match graph count " + std::to_string(num_graphs));
    }

    std::vector<Mat> adjacency;
    adjacency.reserve(static_cast<std::size_t>(num_graphs));
    for (long g = 0; g < num_graphs; ++g) {
        const long sz = graph_size[static_cast<std::size_t>(g)];
        adjacency.push_back(Mat::Zero(sz, sz));
    }

    {
        std::ifstream in = open_or_fail(a_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            checksum = fnv1a(checksum, line);
            std::string cleaned = line;
            std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
            const auto tokens = split_ws(cleaned);
            if (tokens.empty()) continue;
            if (tokens.size() != 2) parse_fail(a_path, line_no, "expected 'u, v'");
            const long u = parse_long(tokens[0], a_path, line_no) - 1;
            const long v = parse_long(tokens[1], a_path, line_no) - 1;
            if (u < 0 || v < 0 || u >= static_cast<long>(node_graph.size()) ||
                v >= static_cast<long>(node_graph.size())) {
                parse_fail(a_path, line_no, "edge references an unknown node");
            }
            if (node_graph[static_cast<std::size_t>(u)] !=
                node_graph[static_cast<std::size_t>(v)]) {
                parse_fail(a_path, line_no, "edge connects nodes of different graphs");
            }
            if (u == v) continue;  // benchmark files occasionally carry self-loops
            const long g = node_graph[static_cast<std::size_t>(u)];
            Mat& w = adjacency[static_cast<std::size_t>(g)];
            const long lu = local_index[static_cast<std::size_t>(u)];
            const long lv = local_index[static_cast<std::size_t>(v)];
            w(lu, lv) = 1.0;  // presence-based; files list both directions
            w(lv, lu) = 1.0;
        }
    }

    GraphCollection collection;
    collection.name = name;
    collection.source = dir;
    collection.checksum = checksum;
    collection.graphs.reserve(static_cast<std::size_t>(num_graphs));
    for (long g = 0; g < num_graphs; ++g) {
        collection.graphs.emplace_back(std::move(adjacency[static_cast<std::size_t>(g)]),
                                       labels[static_cast<std::size_t>(g)]);
    }
    return collection;
}

GraphCollection sample_collection(const GraphCollection& c, Index k, std::uint64_t seed) {
    const Index total = static_cast<Index>(c.graphs.size());
    if (k < 1 || k > total) throw ValidationError("sample size must be in [1, collection size]");
    if (k == total) return c;

    std::map<int, std::vector<Index>> by_class;
    for (Index i = 0; i < total; ++i) {
        by_class[c.graphs[static_cast<std::size_t>(i)].label().value_or(-1)].push_back(i);
    }
    const bool stratify =
        static_cast<Index>(by_class.size()) <= k &&
        std::all_of(by_class.begin(), by_class.end(),
                    [](const auto& kv) { return kv.second.size() >= 2; });

    auto rng = make_rng(seed);
    auto draw = [&rng](std::vector<Index> pool, Index count) {
        for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        pool.resize(static_cast<std::size_t>(count));
        return pool;
    };

    std::vector<Index> chosen;
    if (stratify) {
        // Largest-remainder allocation with at least one graph per class.
        std::vector<std::pair<int, double>> quota;  // class -> fractional share
        std::map<int, Index> take;
        Index assigned = 0;
        for (const auto& [label, members] : by_class) {
            const double share = static_cast<double>(k) * members.size() / total;
            Index base = std::max<Index>(1, static_cast<Index>(std::floor(share)));
            base = std::min<Index>(base, static_cast<Index>(members.size()));
            take[label] = base;
            assigned += base;
            quota.emplace_back(label, share - std::floor(share));
        }
        std::sort(quota.begin(), quota.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        for (std::size_t qi = 0; assigned < k; qi = (qi + 1) % quota.size()) {
            const int label = quota[qi].first;
            if (take[label] < static_cast<Index>(by_class[label].size())) {
                ++take[label];
                ++assigned;
            }
        }
        while (assigned > k) {  // rounding pushed us over; trim largest takes
            auto largest = std::max_element(
                take.begin(), take.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
            --largest->second;
            --assigned;
        }
        for (const auto& [label, members] : by_class) {
            auto picked = draw(members, take[label]);
            chosen.insert(chosen.end(), picked.begin(), picked.end());
        }
    } else {
        std::vector<Index> all(static_cast<std::size_t>(total));
        std::iota(all.begin(), all.end(), 0);
        chosen = draw(all, k);
    }
    std::sort(chosen.begin(), chosen.end());

    GraphCollection out;
    out.name = c.name;
    out.source = c.source;
    out.checksum = c.checksum;
    for (Index i : chosen) out.graphs.push_back(c.graphs[static_cast<std::size_t>(i)]);
    return out;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

namespace {

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace

void write_results(const ResultTable& table, const std::string& path, TableFormat format) {
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw ValidationError("result row width does not match the column schema");
        }
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");

    if (format == TableFormat::Csv) {
        for (const auto& [key, value] : table.metadata) {
            out << "# " << key << " = " << value << "\n";
        }
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i > 0) out << ',';
            out << csv_quote(table.columns[i]);
        }
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i > 0) out << ',';
                out << csv_quote(row[i]);
            }
            out << "\n";
        }
    } else {
        if (!table.metadata.empty()) {
            nlohmann::ordered_json meta;
            for (const auto& [key, value] : table.metadata) meta[key] = value;
            out << nlohmann::ordered_json{{"metadata", meta}}.dump() << "\n";
        }
        for (const auto& row : table.rows) {
            nlohmann::ordered_json record;
            for (std::size_t i = 0; i < row.size(); ++i) record[table.columns[i]] = row[i];
            out << record.dump() << "\n";
        }
    }
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

ResultTable read_results(const std::string& path) {
    std::ifstream in = open_or_fail(path);
    ResultTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!header_seen && line.rfind("# ", 0) == 0) {
            const std::string body = line.substr(2);
            const auto eq = body.find(" = ");
            if (eq != std::string::npos) {
                table.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 3));
            } else {
                table.metadata.emplace_back(body, "");
            }
            continue;
        }
        if (!header_seen) {
            table.columns = csv_split(line);
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        table.rows.push_back(csv_split(line));
    }
    return table;
}

} // namespace fgot
