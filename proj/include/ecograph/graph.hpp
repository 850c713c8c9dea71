#pragma once

#include "ecograph/ingest.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ecograph {

using NodeId = std::uint32_t;

/// The four network variants analysed for an ecosystem.
enum class Variant { Full, GiantComponent, TransitiveClosure, ClosureNoBase };

std::string_view to_string(Variant variant);  // FULL, GC, TC, TCNB
std::optional<Variant> variant_from_string(std::string_view text);

struct NodeInfo {
    std::string name;
    bool is_base = false;
    bool is_recommended = false;
    Origin origin = Origin::MainRegistry;
    bool missing = false;  // referenced as a dependency but absent from the input

    bool operator==(const NodeInfo&) const = default;
};

/// Packages shipped with the language distribution. Defaults are the 14 base
/// and 15 recommended R packages.
struct NodeSetConfig {
    std::vector<std::string> base;
    std::vector<std::string> recommended;

    static NodeSetConfig defaults();

    bool is_base(std::string_view name) const;
    bool is_recommended(std::string_view name) const;
    /// Throws GraphError when a name appears in both lists.
    void validate() const;
};

struct Edge {
    NodeId source = 0;
    NodeId target = 0;
    auto operator<=>(const Edge&) const = default;
};

/// Immutable directed graph with CSR adjacency in both directions. Edges
/// mean "source imports or depends on target". Construction drops self loops
/// and duplicate edges and sorts the edge list.
class DependencyGraph {
public:
    DependencyGraph() = default;
    DependencyGraph(std::vector<NodeInfo> nodes, std::vector<Edge> edges, Variant variant);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    Variant variant() const noexcept { return variant_; }

    std::span<const NodeInfo> nodes() const noexcept { return nodes_; }
    const NodeInfo& node(NodeId id) const { return nodes_[id]; }
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const NodeId> successors(NodeId id) const {
        return {out_targets_.data() + out_offsets_[id], out_targets_.data() + out_offsets_[id + 1]};
    }
    std::span<const NodeId> predecessors(NodeId id) const {
        return {in_sources_.data() + in_offsets_[id], in_sources_.data() + in_offsets_[id + 1]};
    }
    std::size_t out_degree(NodeId id) const { return out_offsets_[id + 1] - out_offsets_[id]; }
    std::size_t in_degree(NodeId id) const { return in_offsets_[id + 1] - in_offsets_[id]; }

    std::optional<NodeId> find(std::string_view name) const;
    bool has_edge(NodeId source, NodeId target) const;

    /// Subgraph induced by `keep` (any order; duplicates ignored). Nodes keep
    /// their relative order.
    DependencyGraph induced(std::span<const NodeId> keep, Variant variant) const;

private:
    std::vector<NodeInfo> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<NodeId> out_targets_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<NodeId> in_sources_;
    std::unordered_map<std::string, NodeId> index_;
    Variant variant_ = Variant::Full;
};

/// Missing-dependency nodes and skipped entries, one line each.
struct BuildLog {
    std::vector<std::string> lines;
    std::string to_text() const;
};

/// FULL graph: one node per record (input order), then one flagged node per
/// referenced-but-missing name (sorted). Edges from imports and depends only.
DependencyGraph build_graph(std::span<const PackageRecord> records, const NodeSetConfig& config,
                            BuildLog* log = nullptr);

/// Weakly connected components; component ids ordered by smallest member.
std::vector<std::uint32_t> weak_components(const DependencyGraph& g, std::size_t* count = nullptr);

/// Largest weakly connected component. Ties: more edges, then smallest
/// minimum node index.
DependencyGraph giant_component(const DependencyGraph& g);

/// Edge (i, j) iff j is reachable from i by a nonempty path. Per-source
/// traversals run on `threads` workers (0 = hardware concurrency).
DependencyGraph transitive_closure(const DependencyGraph& g, unsigned threads = 0);

bool is_transitively_closed(const DependencyGraph& g);

/// Drops base and recommended nodes, then keeps the largest weakly
/// connected component of what remains.
DependencyGraph remove_node_sets(const DependencyGraph& closed, const NodeSetConfig& config);

/// Simple undirected graph in CSR form with sorted neighbour lists.
class UndirectedGraph {
public:
    UndirectedGraph() = default;
    /// Pairs may repeat or appear in both orientations; self loops are dropped.
    UndirectedGraph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> pairs);

    std::size_t node_count() const noexcept { return offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }
    std::span<const NodeId> neighbors(NodeId u) const {
        return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
    }
    std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
    bool has_edge(NodeId u, NodeId v) const;

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> neighbors_;
};

UndirectedGraph undirected_projection(const DependencyGraph& g);

/// Probability p = 2e / (n (n - 1)) used for an equivalent random graph.
double er_edge_probability(std::size_t n, std::size_t e);

/// G(n, p) with p from er_edge_probability, clamped to 1 (with a warning
/// appended to `warnings` when given). Reproducible from `seed`.
UndirectedGraph er_random_graph(std::size_t n, std::size_t e, std::uint64_t seed,
                                std::vector<std::string>* warnings = nullptr);

/// Connected components of an undirected graph; returns the largest as an
/// induced subgraph (ties: smallest minimum node index).
UndirectedGraph largest_component(const UndirectedGraph& g);

bool is_connected(const UndirectedGraph& g);

} // namespace ecograph
