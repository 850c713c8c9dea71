#include "ecograph/graph.hpp"

#include "ecograph/detail/parallel.hpp"
#include "ecograph/detail/random.hpp"
#include "ecograph/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

namespace ecograph {

std::string_view to_string(Variant variant) {
    switch (variant) {
    case Variant::Full: return "FULL";
    case Variant::GiantComponent: return "GC";
    case Variant::TransitiveClosure: return "TC";
    case Variant::ClosureNoBase: return "TCNB";
    }
    return "FULL";
}

std::optional<Variant> variant_from_string(std::string_view text) {
    if (text == "FULL" || text == "full") return Variant::Full;
    if (text == "GC" || text == "gc") return Variant::GiantComponent;
    if (text == "TC" || text == "tc") return Variant::TransitiveClosure;
    if (text == "TCNB" || text == "tcnb") return Variant::ClosureNoBase;
    return std::nullopt;
}

NodeSetConfig NodeSetConfig::defaults() {
    return {
        {"base", "compiler", "datasets", "grDevices", "graphics", "grid", "methods", "parallel", "splines", "stats",
         "stats4", "tcltk", "tools", "utils"},
        {"KernSmooth", "MASS", "Matrix", "boot", "class", "cluster", "codetools", "foreign", "lattice", "mgcv", "nlme",
         "nnet", "rpart", "spatial", "survival"},
    };
}

bool NodeSetConfig::is_base(std::string_view name) const {
    return std::find(base.begin(), base.end(), name) != base.end();
}

bool NodeSetConfig::is_recommended(std::string_view name) const {
    return std::find(recommended.begin(), recommended.end(), name) != recommended.end();
}

void NodeSetConfig::validate() const {
    for (const auto& name : base) {
        if (is_recommended(name)) {
            throw GraphError("graph-core", "package '" + name + "' is listed as both base and recommended",
                             "base and recommended lists must be disjoint");
        }
    }
}

DependencyGraph::DependencyGraph(std::vector<NodeInfo> nodes, std::vector<Edge> edges, Variant variant)
    : nodes_(std::move(nodes)), variant_(variant) {
    const auto n = nodes_.size();
    std::erase_if(edges, [](const Edge& e) { return e.source == e.target; });
    for (const auto& e : edges) {
        if (e.source >= n || e.target >= n) {
            throw GraphError("graph-core", "edge endpoint outside the node set");
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
        ++out_offsets_[e.source + 1];
        ++in_offsets_[e.target + 1];
    }
    std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
    std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
    out_targets_.resize(edges_.size());
    in_sources_.resize(edges_.size());
    std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        out_targets_[i] = edges_[i].target;  // edges are sorted by source
        in_sources_[in_fill[edges_[i].target]++] = edges_[i].source;
    }

    index_.reserve(n);
    for (NodeId i = 0; i < n; ++i) {
        if (!index_.emplace(nodes_[i].name, i).second) {
            throw GraphError("graph-core", "duplicate node name '" + nodes_[i].name + "'");
        }
    }
}

std::optional<NodeId> DependencyGraph::find(std::string_view name) const {
    auto it = index_.find(std::string{name});
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool DependencyGraph::has_edge(NodeId source, NodeId target) const {
    auto succ = successors(source);
    return std::binary_search(succ.begin(), succ.end(), target);
}

DependencyGraph DependencyGraph::induced(std::span<const NodeId> keep, Variant variant) const {
    std::vector<NodeId> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    constexpr NodeId absent = ~NodeId{0};
    std::vector<NodeId> remap(node_count(), absent);
    std::vector<NodeInfo> nodes;
    nodes.reserve(sorted.size());
    for (NodeId old : sorted) {
        remap[old] = static_cast<NodeId>(nodes.size());
        nodes.push_back(nodes_[old]);
    }
    std::vector<Edge> edges;
    for (const auto& e : edges_) {
        if (remap[e.source] != absent && remap[e.target] != absent) {
            edges.push_back({remap[e.source], remap[e.target]});
        }
    }
    return DependencyGraph(std::move(nodes), std::move(edges), variant);
}

std::string BuildLog::to_text() const {
    std::string out;
    for (const auto& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

DependencyGraph build_graph(std::span<const PackageRecord> records, const NodeSetConfig& config, BuildLog* log) {
    config.validate();
    std::vector<NodeInfo> nodes;
    std::unordered_map<std::string, NodeId> index;
    nodes.reserve(records.size());
    for (const auto& rec : records) {
        if (!index.emplace(rec.name, static_cast<NodeId>(nodes.size())).second) {
            throw GraphError("graph-core", "duplicate record '" + rec.name + "'", "record names must be unique");
        }
        nodes.push_back({rec.name, config.is_base(rec.name), config.is_recommended(rec.name), rec.origin, false});
    }

    std::set<std::string> missing;
    for (const auto& rec : records) {
        for (const auto* field : {&rec.imports, &rec.depends}) {
            for (const auto& dep : *field) {
                if (!index.contains(dep)) missing.insert(dep);
            }
        }
    }
    for (const auto& name : missing) {
        index.emplace(name, static_cast<NodeId>(nodes.size()));
        nodes.push_back({name, config.is_base(name), config.is_recommended(name), Origin::Unknown, true});
        if (log) {
            std::string tag = config.is_base(name) ? " [base]" : config.is_recommended(name) ? " [recommended]" : "";
            log->lines.push_back("missing-dependency\t" + name + tag);
        }
    }

    std::vector<Edge> edges;
    for (NodeId i = 0; i < records.size(); ++i) {
        for (const auto* field : {&records[i].imports, &records[i].depends}) {
            for (const auto& dep : *field) {
                edges.push_back({i, index.at(dep)});
            }
        }
    }
    return DependencyGraph(std::move(nodes), std::move(edges), Variant::Full);
}

namespace {

struct DisjointSets {
    std::vector<NodeId> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), NodeId{0}); }
    NodeId find(NodeId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(NodeId a, NodeId b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;  // root is always the smallest member
    }
};

} // namespace

std::vector<std::uint32_t> weak_components(const DependencyGraph& g, std::size_t* count) {
    DisjointSets sets(g.node_count());
    for (const auto& e : g.edges()) sets.unite(e.source, e.target);
    std::vector<std::uint32_t> label(g.node_count());
    std::vector<std::uint32_t> root_label(g.node_count(), ~0u);
    std::uint32_t next = 0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        NodeId r = sets.find(i);
        if (root_label[r] == ~0u) root_label[r] = next++;
        label[i] = root_label[r];
    }
    if (count) *count = next;
    return label;
}

namespace {

std::vector<NodeId> giant_component_nodes(const DependencyGraph& g) {
    if (g.node_count() == 0) return {};
    std::size_t count = 0;
    auto label = weak_components(g, &count);
    std::vector<std::size_t> sizes(count, 0), edge_counts(count, 0);
    for (auto l : label) ++sizes[l];
    for (const auto& e : g.edges()) ++edge_counts[label[e.source]];
    // Labels follow each component's smallest node, so the lowest label wins
    // the final tie.
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < count; ++c) {
        if (std::tie(sizes[c], edge_counts[c]) > std::tie(sizes[best], edge_counts[best])) best = c;
    }
    std::vector<NodeId> keep;
    keep.reserve(sizes[best]);
    for (NodeId i = 0; i < g.node_count(); ++i) {
        if (label[i] == best) keep.push_back(i);
    }
    return keep;
}

} // namespace

DependencyGraph giant_component(const DependencyGraph& g) {
    return g.induced(giant_component_nodes(g), Variant::GiantComponent);
}

DependencyGraph transitive_closure(const DependencyGraph& g, unsigned threads) {
    const std::size_t n = g.node_count();
    unsigned workers = detail::resolve_threads(threads);
    std::vector<std::vector<Edge>> per_block(workers);

    detail::parallel_blocks(n, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        std::vector<std::uint32_t> stamp(n, 0);
        std::vector<NodeId> stack, reached;
        auto& out = per_block[w];
        for (std::size_t s = begin; s < end; ++s) {
            const auto source = static_cast<NodeId>(s);
            const auto mark = static_cast<std::uint32_t>(s + 1);
            reached.clear();
            stack.assign(g.successors(source).begin(), g.successors(source).end());
            for (NodeId v : stack) stamp[v] = mark;
            while (!stack.empty()) {
                NodeId u = stack.back();
                stack.pop_back();
                reached.push_back(u);
                for (NodeId v : g.successors(u)) {
                    if (stamp[v] != mark) {
                        stamp[v] = mark;
                        stack.push_back(v);
                    }
                }
            }
            std::sort(reached.begin(), reached.end());
            for (NodeId t : reached) {
                if (t != source) out.push_back({source, t});
            }
        }
    });

    std::vector<Edge> edges;
    std::size_t total = 0;
    for (const auto& b : per_block) total += b.size();
    edges.reserve(total);
    for (auto& b : per_block) edges.insert(edges.end(), b.begin(), b.end());
    return DependencyGraph(std::vector<NodeInfo>(g.nodes().begin(), g.nodes().end()), std::move(edges),
                           Variant::TransitiveClosure);
}

bool is_transitively_closed(const DependencyGraph& g) {
    for (const auto& e : g.edges()) {
        for (NodeId k : g.successors(e.target)) {
            if (k != e.source && !g.has_edge(e.source, k)) return false;
        }
    }
    return true;
}

DependencyGraph remove_node_sets(const DependencyGraph& closed, const NodeSetConfig& config) {
    std::vector<NodeId> keep;
    for (NodeId i = 0; i < closed.node_count(); ++i) {
        const auto& info = closed.node(i);
        if (!config.is_base(info.name) && !config.is_recommended(info.name)) keep.push_back(i);
    }
    auto reduced = closed.induced(keep, Variant::ClosureNoBase);
    return reduced.induced(giant_component_nodes(reduced), Variant::ClosureNoBase);
}

UndirectedGraph::UndirectedGraph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> pairs) {
    std::vector<std::pair<NodeId, NodeId>> arcs;
    arcs.reserve(pairs.size() * 2);
    for (auto [u, v] : pairs) {
        if (u == v) continue;
        if (u >= n || v >= n) throw GraphError("graph-core", "undirected edge endpoint outside the node set");
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    offsets_.assign(n + 1, 0);
    neighbors_.resize(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        ++offsets_[arcs[i].first + 1];
        neighbors_[i] = arcs[i].second;
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
}

bool UndirectedGraph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

UndirectedGraph undirected_projection(const DependencyGraph& g) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(g.edge_count());
    for (const auto& e : g.edges()) pairs.emplace_back(e.source, e.target);
    return UndirectedGraph(g.node_count(), pairs);
}

double er_edge_probability(std::size_t n, std::size_t e) {
    if (n < 2) throw GraphError("graph-core", "random graph needs at least 2 nodes");
    const double k = 2.0 * static_cast<double>(e) / static_cast<double>(n);
    return k / static_cast<double>(n - 1);
}

UndirectedGraph er_random_graph(std::size_t n, std::size_t e, std::uint64_t seed, std::vector<std::string>* warnings) {
    double p = er_edge_probability(n, e);
    if (p > 1.0) {
        if (warnings) warnings->push_back("edge probability " + std::to_string(p) + " clamped to 1");
        p = 1.0;
    }
    std::vector<std::pair<NodeId, NodeId>> pairs;
    if (p >= 1.0) {
        for (NodeId v = 1; v < n; ++v)
            for (NodeId w = 0; w < v; ++w) pairs.emplace_back(v, w);
        return UndirectedGraph(n, pairs);
    }
    if (p <= 0.0) return UndirectedGraph(n, pairs);

    // Geometric skipping over the lower triangle of pairs (w < v).
    detail::Rng rng(seed);
    const double log_q = std::log1p(-p);
    pairs.reserve(static_cast<std::size_t>(p * n * (n - 1) / 2.0 * 1.1) + 16);
    std::int64_t v = 1, w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
        double r = detail::uniform01(rng);
        w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
        while (w >= v && v < nn) {
            w -= v;
            ++v;
        }
        if (v < nn) pairs.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(w));
    }
    return UndirectedGraph(n, pairs);
}

namespace {

std::vector<std::uint32_t> undirected_labels(const UndirectedGraph& g, std::size_t& count) {
    constexpr auto unset = ~std::uint32_t{0};
    std::vector<std::uint32_t> label(g.node_count(), unset);
    std::vector<NodeId> stack;
    count = 0;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (label[s] != unset) continue;
        const auto c = static_cast<std::uint32_t>(count++);
        label[s] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : g.neighbors(u)) {
                if (label[v] == unset) {
                    label[v] = c;
                    stack.push_back(v);
                }
            }
        }
    }
    return label;
}

} // namespace

bool is_connected(const UndirectedGraph& g) {
    std::size_t count = 0;
    undirected_labels(g, count);
    return count <= 1;
}

UndirectedGraph largest_component(const UndirectedGraph& g) {
    std::size_t count = 0;
    auto label = undirected_labels(g, count);
    if (count <= 1) return g;
    std::vector<std::size_t> sizes(count, 0);
    for (auto l : label) ++sizes[l];
    auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<NodeId> remap(g.node_count(), 0);
    NodeId next = 0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        if (label[i] == best) remap[i] = next++;
    }
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (label[u] != best) continue;
        for (NodeId v : g.neighbors(u)) {
            if (u < v) pairs.emplace_back(remap[u], remap[v]);
        }
    }
    return UndirectedGraph(next, pairs);
}

} // namespace ecograph
