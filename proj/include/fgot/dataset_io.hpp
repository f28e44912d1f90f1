#pragma once

#include "fgot/graph.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fgot {

struct GraphCollection {
    std::vector<Graph> graphs;
    std::string name;
    std::string source;       // path the collection was loaded from
    std::uint64_t checksum = 0;  // FNV-1a over the source bytes
};

/// Parses `u v [w]` edge lines (0-indexed ids, optional positive weight,
/// '#' comments, optional `n <count>` header). Duplicate edges sum their
/// weights and emit a warning.
Graph load_edge_list(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Loads a TUDataset-style directory: `<name>_A.txt` (comma-separated
/// 1-indexed edges), `<name>_graph_indicator.txt`, `<name>_graph_labels.txt`.
/// Node and edge attribute files are ignored.
GraphCollection load_tudataset(const std::string& dir, const std::string& name);

/// Uniform sample of k graphs without replacement, stratified by class label
/// whenever every class has at least 2 members and k >= the class count.
GraphCollection sample_collection(const GraphCollection& c, Index k, std::uint64_t seed);

struct ResultTable {
    std::vector<std::pair<std::string, std::string>> metadata;  // '# key = value' lines
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

enum class TableFormat { Csv, Jsonl };

/// CSV with RFC-4180 quoting (or line-delimited JSON records), preceded by
/// '#'-prefixed run-metadata comment lines.
void write_results(const ResultTable& table, const std::string& path,
                   TableFormat format = TableFormat::Csv);

/// Parses a CSV written by write_results, metadata included.
ResultTable read_results(const std::string& path);

/// Shortest representation that round-trips the double exactly.
std::string format_double(double value);

} // namespace fgot
