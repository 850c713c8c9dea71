#include "ecograph/error.hpp"
#include "ecograph/graph.hpp"
#include "ecograph/graph_io.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

using namespace ecograph;

namespace {

PackageRecord rec(std::string name, std::vector<std::string> imports = {}, std::vector<std::string> depends = {}) {
    PackageRecord r;
    r.name = std::move(name);
    r.imports = std::move(imports);
    r.depends = std::move(depends);
    return r;
}

DependencyGraph graph_of(std::size_t n, std::vector<Edge> edges, Variant v = Variant::Full) {
    return DependencyGraph(oracle::named_nodes(n), std::move(edges), v);
}

std::vector<std::string> names(const DependencyGraph& g) {
    std::vector<std::string> out;
    for (const auto& n : g.nodes()) out.push_back(n.name);
    return out;
}

} // namespace

TEST_CASE("default node sets hold 14 base and 15 recommended packages") {
    auto cfg = NodeSetConfig::defaults();
    CHECK(cfg.base.size() == 14);
    CHECK(cfg.recommended.size() == 15);
    CHECK(cfg.is_base("methods"));
    CHECK(cfg.is_recommended("Matrix"));
    CHECK_FALSE(cfg.is_base("Rcpp"));
    CHECK_NOTHROW(cfg.validate());
    cfg.recommended.push_back("utils");
    CHECK_THROWS_AS(cfg.validate(), GraphError);
}

TEST_CASE("one edge per distinct dependency, missing names become flagged nodes") {
    std::vector<PackageRecord> two{rec("a", {"b"}), rec("b")};
    auto g = build_graph(two, NodeSetConfig::defaults());
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);

    BuildLog log;
    std::vector<PackageRecord> recs{rec("a", {"b", "utils"}, {"b", "zzz"}), rec("b", {}, {"methods"})};
    auto h = build_graph(recs, NodeSetConfig::defaults(), &log);
    CHECK(h.node_count() == 5);
    CHECK(h.edge_count() == 4);
    auto z = h.find("zzz");
    REQUIRE(z.has_value());
    CHECK(h.node(*z).missing);
    CHECK(h.node(*z).origin == Origin::Unknown);
    CHECK(h.node(*h.find("utils")).is_base);
    CHECK(log.lines.size() == 3);
    CHECK(log.to_text().find("missing-dependency\tutils [base]") != std::string::npos);

    PackageRecord with_suggests = rec("c", {"a"});
    with_suggests.suggests = {"b"};
    std::vector<PackageRecord> three{rec("a"), rec("b"), with_suggests};
    CHECK(build_graph(three, NodeSetConfig::defaults()).edge_count() == 1);
}

TEST_CASE("edge count matches a per-record recount on random record sets") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PackageRecord> recs;
        const int n = 1 + static_cast<int>(rng() % 30);
        std::size_t expected = 0;
        for (int i = 0; i < n; ++i) {
            PackageRecord r = rec("p" + std::to_string(i));
            std::set<std::string> all;
            for (int k = 0; k < 4; ++k) {
                std::string dep = "p" + std::to_string(rng() % 40);
                if (dep == r.name) continue;
                if (rng() % 2) {
                    if (std::find(r.imports.begin(), r.imports.end(), dep) == r.imports.end()) r.imports.push_back(dep);
                } else if (std::find(r.depends.begin(), r.depends.end(), dep) == r.depends.end()) {
                    r.depends.push_back(dep);
                }
                all.insert(dep);
            }
            expected += all.size();
            recs.push_back(r);
        }
        auto g = build_graph(recs, NodeSetConfig::defaults());
        CHECK(g.edge_count() == expected);
    }
}

TEST_CASE("graph construction drops self loops and duplicate edges") {
    auto g = graph_of(3, {{0, 1}, {0, 1}, {1, 1}, {2, 0}});
    CHECK(g.edge_count() == 2);
    CHECK(g.in_degree(1) == 1);
    CHECK(g.out_degree(0) == 1);
    CHECK_THROWS_AS(graph_of(2, {{0, 5}}), GraphError);
}

TEST_CASE("giant component tie rule") {
    // Two disjoint directed triangles {0,1,2}, {3,4,5} and a pair {6,7}.
    auto g = graph_of(8, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {6, 7}});
    auto gc = giant_component(g);
    CHECK(gc.variant() == Variant::GiantComponent);
    CHECK(names(gc) == std::vector<std::string>{"p0", "p1", "p2"});

    // Same sizes, more edges wins.
    auto h = graph_of(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {3, 5}});
    CHECK(names(giant_component(h)) == std::vector<std::string>{"p3", "p4", "p5"});

    CHECK(giant_component(DependencyGraph{}).node_count() == 0);
}

TEST_CASE("component membership matches union-find on random graphs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 64;
        auto g = oracle::random_digraph(n, 1.5 / static_cast<double>(n), rng);
        oracle::UnionFind uf(n);
        for (const auto& e : g.edges()) uf.unite(e.source, e.target);
        std::size_t count = 0;
        auto label = weak_components(g, &count);
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = 0; b < n; ++b) CHECK((label[a] == label[b]) == (uf.find(a) == uf.find(b)));

        std::map<std::size_t, std::size_t> sizes;
        for (NodeId a = 0; a < n; ++a) ++sizes[uf.find(a)];
        std::size_t largest = 0;
        for (auto [_, s] : sizes) largest = std::max(largest, s);
        CHECK(giant_component(g).node_count() == largest);
    }
}

TEST_CASE("closure of a chain adds the shortcut") {
    auto tc = transitive_closure(graph_of(3, {{0, 1}, {1, 2}}));
    CHECK(tc.variant() == Variant::TransitiveClosure);
    CHECK(oracle::edge_set(tc) == std::set<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}, {0, 2}});
}

TEST_CASE("closure equals Floyd-Warshall reachability, is idempotent and keeps direct edges") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 64;
        auto g = oracle::random_digraph(n, 2.0 / static_cast<double>(n), rng);
        for (unsigned threads : {1u, 3u}) {
            auto tc = transitive_closure(g, threads);
            CHECK(oracle::edge_set(tc) == oracle::reach_set(oracle::floyd_warshall_reach(g)));
            CHECK(is_transitively_closed(tc));
            CHECK(oracle::edge_set(transitive_closure(tc)) == oracle::edge_set(tc));
            for (const auto& e : g.edges()) CHECK(tc.has_edge(e.source, e.target));
        }
    }
}

TEST_CASE("removing base packages from a closed chain keeps the shortcut") {
    std::vector<NodeInfo> nodes = oracle::named_nodes(3);
    nodes[1].name = "utils";
    nodes[1].is_base = true;
    DependencyGraph closed(nodes, {{0, 1}, {1, 2}, {0, 2}}, Variant::TransitiveClosure);
    auto nb = remove_node_sets(closed, NodeSetConfig::defaults());
    CHECK(nb.variant() == Variant::ClosureNoBase);
    REQUIRE(nb.node_count() == 2);
    CHECK(nb.edge_count() == 1);
    CHECK(nb.has_edge(*nb.find("p0"), *nb.find("p2")));
}

TEST_CASE("node-set removal keeps closure and takes the largest remaining component") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng() % 40;
        auto g = oracle::random_digraph(n, 1.5 / static_cast<double>(n), rng);
        std::vector<NodeInfo> nodes(g.nodes().begin(), g.nodes().end());
        NodeSetConfig cfg;
        for (auto& info : nodes) {
            if (rng() % 4 == 0) {
                info.is_base = true;
                cfg.base.push_back(info.name);
            }
        }
        std::vector<Edge> edges(g.edges().begin(), g.edges().end());
        auto tc = transitive_closure(DependencyGraph(nodes, edges, Variant::Full));
        auto nb = remove_node_sets(tc, cfg);
        CHECK(oracle::edge_set(nb) == oracle::reach_set(oracle::floyd_warshall_reach(nb)));
        for (const auto& info : nb.nodes()) CHECK_FALSE(info.is_base);
        if (nb.node_count() > 0) {
            std::size_t count = 0;
            weak_components(nb, &count);
            CHECK(count == 1);
        }
    }
}

TEST_CASE("undirected projection collapses direction and duplicates") {
    auto two_way = undirected_projection(graph_of(2, {{0, 1}, {1, 0}}));
    CHECK(two_way.edge_count() == 1);
    auto tri = undirected_projection(graph_of(3, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK(tri.edge_count() == 3);
    for (NodeId u = 0; u < 3; ++u) CHECK(tri.degree(u) == 2);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng() % 40;
        auto g = oracle::random_digraph(n, 0.1, rng);
        auto adj = oracle::adjacency(g);
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) pairs += (adj[i][j] || adj[j][i]) ? 1 : 0;
        CHECK(undirected_projection(g).edge_count() == pairs);
    }
}

TEST_CASE("degree sums equal the edge count") {
    std::mt19937_64 rng(17);
    auto g = oracle::random_digraph(50, 0.05, rng);
    std::size_t in = 0, out = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        in += g.in_degree(u);
        out += g.out_degree(u);
    }
    CHECK(in == g.edge_count());
    CHECK(out == g.edge_count());
}

TEST_CASE("random graph baseline generator") {
    CHECK(er_edge_probability(13838, 66574) == doctest::Approx(9.622 / 13837.0).epsilon(1e-3));
    CHECK(2.0 * 66574 / 13838 == doctest::Approx(9.622).epsilon(1e-4));

    auto pair = er_random_graph(2, 1, 99);
    CHECK(pair.edge_count() == 1);

    std::vector<std::string> warnings;
    auto clamped = er_random_graph(4, 100, 1, &warnings);
    CHECK(clamped.edge_count() == 6);
    CHECK(warnings.size() == 1);

    CHECK_THROWS_AS(er_edge_probability(1, 0), GraphError);

    // Same seed, same graph.
    auto a = er_random_graph(200, 600, 5), b = er_random_graph(200, 600, 5);
    for (NodeId u = 0; u < 200; ++u) {
        auto na = a.neighbors(u), nb = b.neighbors(u);
        CHECK(std::equal(na.begin(), na.end(), nb.begin(), nb.end()));
    }
}

TEST_CASE("largest component of an undirected graph") {
    std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}, {2, 3}, {3, 4}};
    UndirectedGraph g(6, pairs);
    CHECK_FALSE(is_connected(g));
    auto big = largest_component(g);
    CHECK(big.node_count() == 3);
    CHECK(is_connected(big));
}

TEST_CASE("CSV export and import round-trip the FULL graph") {
    std::vector<PackageRecord> recs{rec("a", {"b", "utils"}), rec("b", {"c,d"}), rec("c,d")};
    recs[1].origin = Origin::CompanionRegistry;
    auto g = build_graph(recs, NodeSetConfig::defaults());
    std::stringstream edges, nodes;
    write_edges_csv(edges, g);
    write_nodes_csv(nodes, g);
    CHECK(edges.str().rfind("source,target\n", 0) == 0);
    CHECK(nodes.str().rfind("name,is_base,is_recommended,origin\n", 0) == 0);

    auto back = read_graph_csv(edges, &nodes, NodeSetConfig::defaults());
    CHECK(names(back) == names(g));
    CHECK(oracle::edge_set(back) == oracle::edge_set(g));
    for (NodeId i = 0; i < g.node_count(); ++i) {
        CHECK(back.node(i).is_base == g.node(i).is_base);
        CHECK(back.node(i).origin == g.node(i).origin);
    }

    std::stringstream only_edges("source,target\nx,y\ny,utils\n");
    auto bare = read_graph_csv(only_edges, nullptr, NodeSetConfig::defaults());
    CHECK(bare.node_count() == 3);
    CHECK(bare.node(*bare.find("utils")).is_base);
}
