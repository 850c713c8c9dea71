#pragma once
// Brute-force references the library results are checked against. Slow on
// purpose: each one follows the textbook definition directly.

#include "ecograph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using ecograph::DependencyGraph;
using ecograph::Edge;
using ecograph::NodeId;
using ecograph::NodeInfo;
using ecograph::UndirectedGraph;
using ecograph::Variant;

using Matrix = std::vector<std::vector<bool>>;

inline std::vector<NodeInfo> named_nodes(std::size_t n, const std::string& prefix = "p") {
    std::vector<NodeInfo> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i].name = prefix + std::to_string(i);
    return nodes;
}

// Each ordered pair (i != j) is an edge with probability p.
inline DependencyGraph random_digraph(std::size_t n, double p, std::mt19937_64& rng,
                                      Variant variant = Variant::Full) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = 0; j < n; ++j) {
            if (i != j && u(rng) < p) edges.push_back({i, j});
        }
    }
    return DependencyGraph(named_nodes(n), std::move(edges), variant);
}

inline UndirectedGraph random_undirected(std::size_t n, double p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (u(rng) < p) pairs.emplace_back(i, j);
        }
    }
    return UndirectedGraph(n, pairs);
}

inline Matrix adjacency(const DependencyGraph& g) {
    Matrix m(g.node_count(), std::vector<bool>(g.node_count(), false));
    for (const auto& e : g.edges()) m[e.source][e.target] = true;
    return m;
}

// reach[i][j]: nonempty directed path i -> j (Floyd-Warshall on booleans).
inline Matrix floyd_warshall_reach(const DependencyGraph& g) {
    Matrix r = adjacency(g);
    const std::size_t n = g.node_count();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

inline std::set<std::pair<NodeId, NodeId>> edge_set(const DependencyGraph& g) {
    std::set<std::pair<NodeId, NodeId>> out;
    for (const auto& e : g.edges()) out.emplace(e.source, e.target);
    return out;
}

inline std::set<std::pair<NodeId, NodeId>> reach_set(const Matrix& r) {
    std::set<std::pair<NodeId, NodeId>> out;
    for (NodeId i = 0; i < r.size(); ++i)
        for (NodeId j = 0; j < r.size(); ++j)
            if (i != j && r[i][j]) out.emplace(i, j);
    return out;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Per-node triangle counts by checking every triple.
inline std::vector<std::uint64_t> triangles_by_triples(const UndirectedGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::uint64_t> t(n, 0);
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
            if (g.has_edge(a, b))
                for (NodeId c = b + 1; c < n; ++c)
                    if (g.has_edge(a, c) && g.has_edge(b, c)) {
                        ++t[a];
                        ++t[b];
                        ++t[c];
                    }
    return t;
}

inline double clustering_by_triples(const UndirectedGraph& g) {
    auto t = triangles_by_triples(g);
    double sum = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const double d = static_cast<double>(g.degree(u));
        if (d >= 2) sum += 2.0 * static_cast<double>(t[u]) / (d * (d - 1.0));
    }
    return sum / static_cast<double>(g.node_count());
}

// All-pairs hop distances (Floyd-Warshall); max() for unreachable.
inline std::vector<std::vector<std::uint32_t>> distances(const UndirectedGraph& g) {
    const std::size_t n = g.node_count();
    constexpr auto inf = std::numeric_limits<std::uint32_t>::max() / 2;
    std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, inf));
    for (NodeId u = 0; u < n; ++u) {
        d[u][u] = 0;
        for (NodeId v : g.neighbors(u)) d[u][v] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

// Modularity from its definition: (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).
inline double modularity_by_pairs(const UndirectedGraph& g, const std::vector<std::uint32_t>& c) {
    const double m = static_cast<double>(g.edge_count());
    double q = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i)
        for (NodeId j = 0; j < g.node_count(); ++j)
            if (c[i] == c[j]) {
                const double a = g.has_edge(i, j) ? 1.0 : 0.0;
                q += a - static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j)) / (2.0 * m);
            }
    return q / (2.0 * m);
}

// Inverse-CDF sampler for p(k) = k^-gamma / zeta(gamma), k >= 1. The CDF is
// tabulated by direct summation up to `table`; the remaining mass (estimated
// by the integral of the tail) is sampled from the matching continuous tail.
class PowerLawSampler {
public:
    PowerLawSampler(double gamma, std::size_t table = 1000000) : gamma_(gamma), cdf_(table + 1, 0.0) {
        double acc = 0.0;
        for (std::size_t k = 1; k <= table; ++k) {
            acc += std::pow(static_cast<double>(k), -gamma);
            cdf_[k] = acc;
        }
        const double tail = std::pow(static_cast<double>(table) + 0.5, 1.0 - gamma) / (gamma - 1.0);
        const double total = acc + tail;
        for (auto& c : cdf_) c /= total;
    }

    template <class Rng>
    std::uint64_t operator()(Rng& rng) const {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < cdf_.back()) {
            return static_cast<std::uint64_t>(std::upper_bound(cdf_.begin() + 1, cdf_.end(), u) - cdf_.begin());
        }
        // Continuous tail beyond the table, inverted analytically.
        const double rest = (u - cdf_.back()) / (1.0 - cdf_.back());
        const double base = static_cast<double>(cdf_.size() - 1) + 0.5;
        return static_cast<std::uint64_t>(std::floor(base * std::pow(1.0 - rest, -1.0 / (gamma_ - 1.0)) + 0.5));
    }

private:
    double gamma_;
    std::vector<double> cdf_;
};

} // namespace oracle
