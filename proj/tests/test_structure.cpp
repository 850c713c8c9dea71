#include "ecograph/error.hpp"
#include "ecograph/structure.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace ecograph;

namespace {

DependencyGraph graph_of(std::size_t n, std::vector<Edge> edges) {
    return DependencyGraph(oracle::named_nodes(n), std::move(edges), Variant::GiantComponent);
}

UndirectedGraph ug_of(std::size_t n, std::vector<std::pair<NodeId, NodeId>> pairs) {
    return UndirectedGraph(n, pairs);
}

UndirectedGraph ring_lattice(std::size_t n, std::size_t k) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId u = 0; u < n; ++u)
        for (std::size_t s = 1; s <= k / 2; ++s) pairs.emplace_back(u, static_cast<NodeId>((u + s) % n));
    return UndirectedGraph(n, pairs);
}

} // namespace

TEST_CASE("chain degrees by kind") {
    auto g = graph_of(3, {{0, 1}, {1, 2}});
    CHECK(degree_sequence(g, DegreeKind::In) == std::vector<std::uint64_t>{0, 1, 1});
    CHECK(degree_sequence(g, DegreeKind::Out) == std::vector<std::uint64_t>{1, 1, 0});
    CHECK(degree_sequence(g, DegreeKind::Total) == std::vector<std::uint64_t>{1, 2, 1});
    CHECK_THROWS_AS(degree_distribution(DependencyGraph{}, DegreeKind::Total), GraphError);
}

TEST_CASE("distribution invariants and recount on random graphs") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng() % 60;
        auto g = oracle::random_digraph(n, 0.08, rng);
        auto adj = oracle::adjacency(g);
        for (auto kind : {DegreeKind::Total, DegreeKind::In, DegreeKind::Out}) {
            auto d = degree_distribution(g, kind);
            std::map<std::uint64_t, std::size_t> recount;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t k = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (kind != DegreeKind::Out && adj[j][i]) ++k;
                    if (kind != DegreeKind::In && adj[i][j]) ++k;
                }
                ++recount[k];
            }
            CHECK(d.histogram == recount);
            double pdf = 0.0;
            for (const auto& p : d.points) pdf += p.pdf;
            CHECK(pdf == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(d.points.front().ccdf == doctest::Approx(1.0));
            for (std::size_t i = 1; i < d.points.size(); ++i) CHECK(d.points[i].ccdf <= d.points[i - 1].ccdf);
        }
        auto total = degree_distribution(g, DegreeKind::Total);
        CHECK(total.mean() == doctest::Approx(2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n)));
    }
}

TEST_CASE("Hurwitz zeta against direct summation") {
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
    CHECK(hurwitz_zeta(4.0, 1.0) == doctest::Approx(std::pow(M_PI, 4) / 90.0).epsilon(1e-12));
    double direct = 0.0;
    for (int j = 0; j < 2000000; ++j) direct += std::pow(5.0 + j, -3.5);
    CHECK(hurwitz_zeta(3.5, 5.0) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("power-law fit recovers the exponent of sampled data") {
    std::mt19937_64 rng(101);
    oracle::PowerLawSampler sampler(2.5);
    std::vector<std::uint64_t> xs(100000);
    for (auto& x : xs) x = sampler(rng);
    auto fit = fit_power_law(xs);
    CHECK(fit.gamma >= 2.45);
    CHECK(fit.gamma <= 2.55);
    CHECK(fit.xmin >= 1);
    CHECK(fit.ks >= 0.0);
    CHECK(fit.ks <= 1.0);
    CHECK(fit.n_tail <= xs.size());

    // Self-consistency: resample from the fitted exponent and refit.
    oracle::PowerLawSampler again(fit.gamma);
    for (auto& x : xs) x = again(rng);
    CHECK(std::abs(fit_power_law(xs).gamma - fit.gamma) < 0.1);
}

TEST_CASE("power-law fit rejects degenerate and tiny samples") {
    std::vector<std::uint64_t> flat(100, 3);
    CHECK_THROWS_AS(fit_power_law(flat), FitError);
    std::vector<std::uint64_t> few{1, 2, 3, 4, 5, 1, 2, 3};
    try {
        fit_power_law(few);
        FAIL("expected a fit error");
    } catch (const FitError& e) {
        CHECK(std::string(e.what()).find("10") != std::string::npos);
        CHECK(e.exit_code() == 4);
    }
}

TEST_CASE("clustering on small shapes") {
    CHECK(avg_clustering(ug_of(3, {{0, 1}, {1, 2}, {0, 2}})) == doctest::Approx(1.0));
    CHECK(avg_clustering(ug_of(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})) == 0.0);
    CHECK_THROWS_AS(avg_clustering(UndirectedGraph{}), GraphError);
}

TEST_CASE("clustering matches the triple-enumeration oracle exactly") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 64;
        auto g = oracle::random_undirected(n, 0.05 + 0.3 * static_cast<double>(rng() % 100) / 100.0, rng);
        CHECK(triangle_counts(g) == oracle::triangles_by_triples(g));
        CHECK(avg_clustering(g) == doctest::Approx(oracle::clustering_by_triples(g)).epsilon(1e-12));
    }
}

TEST_CASE("path length on a path graph") {
    auto p = avg_path_length(ug_of(3, {{0, 1}, {1, 2}}));
    CHECK(p.mean == doctest::Approx(4.0 / 3.0));
    CHECK_FALSE(p.sampled);
    CHECK_THROWS_AS(avg_path_length(ug_of(3, {{0, 1}})), GraphError);
    CHECK_THROWS_AS(avg_path_length(ug_of(1, {})), GraphError);
}

TEST_CASE("exact path length matches Floyd-Warshall and survives relabeling") {
    std::mt19937_64 rng(31);
    int checked = 0;
    while (checked < 40) {
        const std::size_t n = 2 + rng() % 100;
        auto g = oracle::random_undirected(n, 4.0 / static_cast<double>(n), rng);
        if (!is_connected(g)) continue;
        ++checked;
        auto d = oracle::distances(g);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) sum += d[i][j];
        const double expected = sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
        CHECK(avg_path_length(g).mean == doctest::Approx(expected).epsilon(1e-12));

        std::vector<NodeId> perm(n);
        std::iota(perm.begin(), perm.end(), 0u);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::pair<NodeId, NodeId>> pairs;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v : g.neighbors(u))
                if (u < v) pairs.emplace_back(perm[u], perm[v]);
        CHECK(avg_path_length(UndirectedGraph(n, pairs)).mean == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("sampled path length is reproducible and close to exact") {
    auto g = largest_component(er_random_graph(600, 1800, 4));
    auto exact = avg_path_length(g);
    PathLengthOptions opts;
    opts.sampled = true;
    opts.samples = 200;
    opts.seed = 9;
    auto a = avg_path_length(g, opts), b = avg_path_length(g, opts);
    CHECK(a.mean == b.mean);
    CHECK(a.sources == 200);
    CHECK(a.std_error > 0.0);
    CHECK(std::abs(a.mean - exact.mean) < 3.0 * a.std_error + 1e-9);
}

TEST_CASE("ER baselines: complete triangle and analytic agreement") {
    auto tri = er_baselines(3, 3, 1, 5);
    CHECK(tri.c_er == doctest::Approx(1.0));
    REQUIRE(tri.l_er.has_value());
    CHECK(*tri.l_er == doctest::Approx(1.0));

    auto b = er_baselines(500, 2500, 7, 20);
    CHECK(b.c_analytic == doctest::Approx(10.0 / 499.0));
    const double sigma = b.c_er_stddev / std::sqrt(20.0);
    CHECK(std::abs(b.c_er - b.c_analytic) < 3.0 * sigma + 1e-4);
    CHECK(b.trials == 20);

    auto sparse = er_baselines(200, 50, 3, 3);
    CHECK_FALSE(sparse.warnings.empty());
}

TEST_CASE("density") {
    std::vector<Edge> all;
    for (NodeId i = 0; i < 5; ++i)
        for (NodeId j = 0; j < 5; ++j)
            if (i != j) all.push_back({i, j});
    CHECK(density(graph_of(5, all)) == doctest::Approx(1.0));

    std::mt19937_64 rng(37);
    auto g = oracle::random_digraph(30, 0.1, rng);
    CHECK(density(g) == doctest::Approx(static_cast<double>(g.edge_count()) / (30.0 * 29.0)));
}

TEST_CASE("small-world verdicts") {
    CHECK(small_world_verdict(0.21, 0.0006, 3.10, 4.47) == std::optional<bool>{true});
    CHECK(small_world_verdict(0.05, 0.05, 3.0, 3.0) == std::optional<bool>{false});
    CHECK_FALSE(small_world_verdict(0.3, 0.01, 3.0, std::nullopt).has_value());

    // Ring lattice: high clustering, but paths far longer than random.
    auto ring = ring_lattice(1000, 10);
    const double c = avg_clustering(ring);
    PathLengthOptions opts;
    opts.sampled = true;
    opts.samples = 50;
    const double l = avg_path_length(ring, opts).mean;
    auto er = er_baselines(1000, ring.edge_count(), 1, 3);
    CHECK(c > 0.5);
    CHECK(l > 40.0);
    CHECK(small_world_verdict(c, er.c_er, l, er.l_er) == std::optional<bool>{false});
}

TEST_CASE("structure report on a small connected graph") {
    std::mt19937_64 rng(41);
    auto g = giant_component(oracle::random_digraph(80, 0.04, rng));
    StructureOptions opts;
    opts.er_trials = 3;
    auto r = structure_report(g, opts);
    CHECK(r.n == g.node_count());
    CHECK(r.e == g.edge_count());
    CHECK(r.avg_degree == doctest::Approx(2.0 * r.e / r.n));
    CHECK(r.clustering >= 0.0);
    CHECK(r.clustering <= 1.0);
    CHECK(r.path.mean >= 1.0);
    CHECK(r.density <= 1.0);
    CHECK(r.er_seed == 42);
    CHECK(r.er_trials == 3);
    CHECK(structure_report(g, opts) == r);
}
