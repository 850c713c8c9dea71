#include "ecograph/error.hpp"
#include "ecograph/node_metrics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace ecograph;

namespace {

const NodeScoreRow& row(const std::vector<NodeScoreRow>& rows, const std::string& name) {
    for (const auto& r : rows)
        if (r.package == name) return r;
    throw std::runtime_error("no row " + name);
}

} // namespace

TEST_CASE("chain vulnerability") {
    DependencyGraph g(oracle::named_nodes(3), {{0, 1}, {1, 2}}, Variant::GiantComponent);
    auto rows = vulnerability_table(g, transitive_closure(g));
    CHECK(row(rows, "p2").vulnerability == 1.0);
    CHECK(row(rows, "p1").vulnerability == 0.5);
    CHECK(row(rows, "p0").vulnerability == 0.0);
    CHECK(row(rows, "p0").inverse_vulnerability == 1.0);
    CHECK(row(rows, "p2").dd == 1);
    CHECK(row(rows, "p2").td == 2);
}

TEST_CASE("vulnerability equals reachable-predecessor share from Floyd-Warshall") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 63;
        auto g = oracle::random_digraph(n, 2.0 / static_cast<double>(n), rng);
        auto reach = oracle::floyd_warshall_reach(g);
        auto tc = transitive_closure(g);
        auto rows = vulnerability_table(g, tc);
        std::size_t dd_sum = 0, td_sum = 0;
        for (NodeId j = 0; j < n; ++j) {
            std::size_t preds = 0, succs = 0;
            for (NodeId i = 0; i < n; ++i) {
                if (i != j && reach[i][j]) ++preds;
                if (i != j && reach[j][i]) ++succs;
            }
            CHECK(rows[j].td == preds);
            CHECK(rows[j].vulnerability == static_cast<double>(preds) / static_cast<double>(n - 1));
            CHECK(rows[j].centrality == rows[j].vulnerability);
            CHECK(rows[j].out_transitive == succs);
            CHECK(rows[j].dd <= rows[j].td);
            CHECK(rows[j].centrality <= 1.0);
            dd_sum += rows[j].dd;
            td_sum += rows[j].td;
        }
        CHECK(dd_sum == g.edge_count());
        CHECK(td_sum == tc.edge_count());
    }
}

TEST_CASE("mismatched node sets are rejected") {
    DependencyGraph a(oracle::named_nodes(3), {}, Variant::GiantComponent);
    DependencyGraph b(oracle::named_nodes(4), {}, Variant::TransitiveClosure);
    CHECK_THROWS_AS(vulnerability_table(a, b), GraphError);
    DependencyGraph c(oracle::named_nodes(3, "q"), {}, Variant::TransitiveClosure);
    CHECK_THROWS_AS(vulnerability_table(a, c), GraphError);
}

TEST_CASE("ranking ties fall back to td then name") {
    std::vector<NodeScoreRow> rows(4);
    rows[0].package = "d";
    rows[1].package = "b";
    rows[2].package = "c";
    rows[3].package = "a";
    auto top = top_influential(rows, 10);
    REQUIRE(top.size() == 4);
    CHECK(top[0].package == "a");
    CHECK(top[3].package == "d");

    rows[2].vulnerability = 0.5;
    rows[2].td = 1;
    rows[0].vulnerability = 0.5;
    rows[0].td = 2;
    top = top_influential(rows, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0].package == "d");
    CHECK(top[1].package == "c");

    // Scaling v leaves the order alone.
    auto scaled = rows;
    for (auto& r : scaled) r.vulnerability *= 3.0;
    auto a = top_influential(rows, 4), b = top_influential(scaled, 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(a[i].package == b[i].package);
}

TEST_CASE("base packages can be excluded from the ranking") {
    std::vector<NodeScoreRow> rows(3);
    rows[0].package = "utils";
    rows[0].vulnerability = 0.9;
    rows[1].package = "Rcpp";
    rows[1].vulnerability = 0.5;
    rows[2].package = "Matrix";
    rows[2].vulnerability = 0.7;
    auto cfg = NodeSetConfig::defaults();
    auto top = top_influential(rows, 3, &cfg);
    REQUIRE(top.size() == 1);
    CHECK(top[0].package == "Rcpp");
}

TEST_CASE("heavy dependents") {
    DependencyGraph empty(oracle::named_nodes(4), {}, Variant::TransitiveClosure);
    CHECK(heavy_dependents(vulnerability_table(empty, empty), 0).empty());

    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng() % 50;
        auto g = oracle::random_digraph(n, 2.0 / static_cast<double>(n), rng);
        auto tc = transitive_closure(g);
        auto rows = vulnerability_table(g, tc);
        const std::size_t threshold = rng() % 6;
        auto heavy = heavy_dependents(rows, threshold);
        std::set<std::string> expected, got;
        for (NodeId i = 0; i < n; ++i)
            if (tc.out_degree(i) > threshold) expected.insert(tc.node(i).name);
        for (const auto& r : heavy) got.insert(r.package);
        CHECK(got == expected);
        for (std::size_t i = 1; i < heavy.size(); ++i) CHECK(heavy[i - 1].out_transitive >= heavy[i].out_transitive);
    }
}

TEST_CASE("driver-node estimate") {
    auto e = driver_nodes(3.0, 4.0, 1000);
    CHECK(std::abs(e.fraction - std::exp(-1.0)) < 1e-12);
    CHECK(e.count == 368);
    CHECK_FALSE(e.clamped);

    auto limit = driver_nodes(1e6, 2.0, 1000);
    CHECK(limit.fraction == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));

    auto wide = driver_nodes(1.5, 4.0, 100);
    CHECK(wide.fraction == 1.0);
    CHECK(wide.clamped);
    CHECK(wide.warning.has_value());
    CHECK(wide.count == 100);

    CHECK(driver_nodes(3.0, 1e6, 10).count == 1);
    CHECK_THROWS_AS(driver_nodes(1.0, 4.0, 10), GraphError);
}
