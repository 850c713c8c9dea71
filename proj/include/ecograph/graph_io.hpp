#pragma once

#include "ecograph/graph.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>

namespace ecograph {

/// `source,target` header, one edge per line, names as parsed.
void write_edges_csv(std::ostream& out, const DependencyGraph& g);

/// Marks a node outside the partitioned variant; written as an empty cell.
inline constexpr std::uint32_t kNoCommunity = 0xffffffffu;

/// `name,is_base,is_recommended,origin[,community]`.
void write_nodes_csv(std::ostream& out, const DependencyGraph& g,
                     std::optional<std::span<const std::uint32_t>> community = std::nullopt);

/// Rebuilds a FULL graph from exported CSVs. Nodes listed in the node table
/// keep their order and flags; endpoints absent from it are appended (in
/// first-seen order) as missing nodes with flags taken from `config`.
DependencyGraph read_graph_csv(std::istream& edges, std::istream* nodes, const NodeSetConfig& config);

DependencyGraph read_graph_csv_files(const std::filesystem::path& edges_path,
                                     const std::optional<std::filesystem::path>& nodes_path,
                                     const NodeSetConfig& config);

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

} // namespace ecograph
