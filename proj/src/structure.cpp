#include "ecograph/structure.hpp"

#include "ecograph/detail/parallel.hpp"
#include "ecograph/detail/random.hpp"
#include "ecograph/error.hpp"
#include "ecograph/node_metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace ecograph {

std::string_view to_string(DegreeKind kind) {
    switch (kind) {
    case DegreeKind::Total: return "total";
    case DegreeKind::In: return "in";
    case DegreeKind::Out: return "out";
    }
    return "total";
}

double DegreeDistribution::mean() const {
    if (node_count == 0) return 0.0;
    double sum = 0.0;
    for (auto [k, c] : histogram) sum += static_cast<double>(k) * static_cast<double>(c);
    return sum / static_cast<double>(node_count);
}

std::vector<std::uint64_t> DegreeDistribution::samples() const {
    std::vector<std::uint64_t> out;
    out.reserve(node_count);
    for (auto [k, c] : histogram) out.insert(out.end(), c, k);
    return out;
}

std::vector<std::uint64_t> degree_sequence(const DependencyGraph& g, DegreeKind kind) {
    std::vector<std::uint64_t> deg(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) {
        switch (kind) {
        case DegreeKind::Total: deg[i] = g.in_degree(i) + g.out_degree(i); break;
        case DegreeKind::In: deg[i] = g.in_degree(i); break;
        case DegreeKind::Out: deg[i] = g.out_degree(i); break;
        }
    }
    return deg;
}

DegreeDistribution distribution_from_degrees(std::span<const std::uint64_t> degrees, DegreeKind kind) {
    DegreeDistribution dist;
    dist.kind = kind;
    dist.node_count = degrees.size();
    for (auto k : degrees) ++dist.histogram[k];
    const auto n = static_cast<double>(degrees.size());
    std::size_t remaining = degrees.size();
    for (auto [k, c] : dist.histogram) {
        dist.points.push_back({k, static_cast<double>(c) / n, static_cast<double>(remaining) / n});
        remaining -= c;
    }
    return dist;
}

DegreeDistribution degree_distribution(const DependencyGraph& g, DegreeKind kind) {
    if (g.node_count() == 0) throw GraphError("structure-metrics", "degree distribution of an empty graph");
    auto deg = degree_sequence(g, kind);
    return distribution_from_degrees(deg, kind);
}

std::vector<std::uint64_t> triangle_counts(const UndirectedGraph& g) {
    const std::size_t n = g.node_count();
    // Orient each edge toward the endpoint of higher (degree, id) rank; every
    // triangle is then found exactly once from its lowest-ranked corner.
    auto higher = [&](NodeId a, NodeId b) {
        return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
    };
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<NodeId> forward;
    forward.reserve(g.edge_count());
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : g.neighbors(u)) {
            if (higher(u, v)) forward.push_back(v);
        }
        offsets[u + 1] = forward.size();
    }
    std::vector<std::uint64_t> tri(n, 0);
    std::vector<NodeId> mark(n, static_cast<NodeId>(n));
    for (NodeId u = 0; u < n; ++u) {
        for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) mark[forward[i]] = u;
        for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) {
            NodeId v = forward[i];
            for (std::size_t j = offsets[v]; j < offsets[v + 1]; ++j) {
                NodeId w = forward[j];
                if (mark[w] == u) {
                    ++tri[u];
                    ++tri[v];
                    ++tri[w];
                }
            }
        }
    }
    return tri;
}

double avg_clustering(const UndirectedGraph& g) {
    if (g.node_count() == 0) throw GraphError("structure-metrics", "clustering of an empty graph");
    auto tri = triangle_counts(g);
    double sum = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto d = static_cast<double>(g.degree(u));
        if (g.degree(u) >= 2) sum += 2.0 * static_cast<double>(tri[u]) / (d * (d - 1.0));
    }
    return sum / static_cast<double>(g.node_count());
}

namespace {

// Sum of BFS distances from `source` to every node.
std::uint64_t bfs_distance_sum(const UndirectedGraph& g, NodeId source, std::vector<std::uint32_t>& dist,
                               std::vector<NodeId>& queue) {
    constexpr auto unseen = ~std::uint32_t{0};
    std::fill(dist.begin(), dist.end(), unseen);
    queue.clear();
    queue.push_back(source);
    dist[source] = 0;
    std::uint64_t total = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId u = queue[head];
        total += dist[u];
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] == unseen) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return total;
}

// Sum of distances over ordered pairs, 64 sources per sweep.
std::uint64_t all_pairs_distance_sum(const UndirectedGraph& g, unsigned threads) {
    const std::size_t n = g.node_count();
    const std::size_t batches = (n + 63) / 64;
    unsigned workers = detail::resolve_threads(threads);
    std::vector<std::uint64_t> partial(workers, 0);
    detail::parallel_blocks(batches, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        std::vector<std::uint64_t> visited(n), frontier(n), next(n);
        std::uint64_t total = 0;
        for (std::size_t b = begin; b < end; ++b) {
            std::fill(visited.begin(), visited.end(), 0);
            std::fill(frontier.begin(), frontier.end(), 0);
            const std::size_t first = b * 64;
            const std::size_t count = std::min<std::size_t>(64, n - first);
            const std::uint64_t full = count == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
            for (std::size_t i = 0; i < count; ++i) {
                visited[first + i] |= std::uint64_t{1} << i;
                frontier[first + i] |= std::uint64_t{1} << i;
            }
            for (std::uint64_t level = 1;; ++level) {
                bool any = false;
                for (NodeId v = 0; v < n; ++v) {
                    if (visited[v] == full) {
                        next[v] = 0;
                        continue;
                    }
                    std::uint64_t acc = 0;
                    for (NodeId u : g.neighbors(v)) acc |= frontier[u];
                    acc &= ~visited[v];
                    next[v] = acc;
                    if (acc) {
                        any = true;
                        total += level * static_cast<std::uint64_t>(std::popcount(acc));
                    }
                }
                if (!any) break;
                for (NodeId v = 0; v < n; ++v) visited[v] |= next[v];
                frontier.swap(next);
            }
        }
        partial[w] = total;
    });
    return std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
}

} // namespace

PathLength avg_path_length(const UndirectedGraph& g, const PathLengthOptions& options) {
    const std::size_t n = g.node_count();
    if (n < 2) throw GraphError("structure-metrics", "average path length needs at least 2 nodes");
    if (!is_connected(g)) {
        throw GraphError("structure-metrics", "average path length is undefined on a disconnected graph",
                         "reduce the graph to its giant component first");
    }
    PathLength result;
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    if (!options.sampled || options.samples >= n) {
        result.mean = static_cast<double>(all_pairs_distance_sum(g, options.threads)) / pairs;
        result.sources = n;
        return result;
    }

    const std::size_t m = std::max<std::size_t>(options.samples, 2);
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    detail::Rng rng(options.seed);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t j = i + detail::uniform_below(rng, n - i);
        std::swap(order[i], order[j]);
    }
    std::vector<double> per_source(m);
    detail::parallel_blocks(m, options.threads, [&](std::size_t begin, std::size_t end, unsigned) {
        std::vector<std::uint32_t> dist(n);
        std::vector<NodeId> queue;
        queue.reserve(n);
        for (std::size_t i = begin; i < end; ++i) {
            per_source[i] = static_cast<double>(bfs_distance_sum(g, order[i], dist, queue)) / static_cast<double>(n - 1);
        }
    });
    double mean = 0.0;
    for (double x : per_source) mean += x;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double x : per_source) var += (x - mean) * (x - mean);
    var /= static_cast<double>(m - 1);
    result.mean = mean;
    result.std_error = std::sqrt(var / static_cast<double>(m));
    result.sampled = true;
    result.sources = m;
    return result;
}

ErBaselines er_baselines(std::size_t n, std::size_t e, std::uint64_t seed, std::size_t trials, unsigned threads) {
    if (n < 2) throw GraphError("structure-metrics", "random-graph baseline needs n >= 2");
    if (trials < 1) throw GraphError("structure-metrics", "random-graph baseline needs at least one trial");
    ErBaselines out;
    out.trials = trials;
    out.seed = seed;
    const double k = 2.0 * static_cast<double>(e) / static_cast<double>(n);
    out.c_analytic = std::min(1.0, k / static_cast<double>(n - 1));
    const bool giant_expected = k >= 1.0;
    if (!giant_expected) {
        out.warnings.push_back("average degree " + std::to_string(k) +
                               " < 1: random-graph giant component vanishes, l_er undefined");
    }

    std::vector<double> cs(trials), ls;
    for (std::size_t t = 0; t < trials; ++t) {
        auto rg = er_random_graph(n, e, seed + t, t == 0 ? &out.warnings : nullptr);
        cs[t] = avg_clustering(rg);
        if (giant_expected) {
            auto gc = largest_component(rg);
            if (gc.node_count() >= 2) ls.push_back(avg_path_length(gc, {false, 0, seed + t, threads}).mean);
        }
    }
    auto mean_sd = [](const std::vector<double>& xs) {
        double m = 0.0;
        for (double x : xs) m += x;
        m /= static_cast<double>(xs.size());
        double v = 0.0;
        for (double x : xs) v += (x - m) * (x - m);
        return std::pair{m, xs.size() > 1 ? std::sqrt(v / static_cast<double>(xs.size() - 1)) : 0.0};
    };
    std::tie(out.c_er, out.c_er_stddev) = mean_sd(cs);
    if (!ls.empty()) {
        auto [m, sd] = mean_sd(ls);
        out.l_er = m;
        out.l_er_stddev = sd;
    } else if (giant_expected) {
        out.warnings.push_back("random graphs had no component with 2 or more nodes; l_er undefined");
    }
    return out;
}

double density(const DependencyGraph& g) {
    const auto n = static_cast<double>(g.node_count());
    if (g.node_count() < 2) throw GraphError("structure-metrics", "density needs at least 2 nodes");
    return static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

std::optional<bool> small_world_verdict(double c, double c_er, double l, std::optional<double> l_er,
                                        const SmallWorldThresholds& thresholds) {
    if (!l_er) return std::nullopt;
    return c >= thresholds.clustering_factor * c_er && l <= thresholds.path_factor * *l_er;
}

std::optional<bool> small_world_verdict(const StructureReport& report) {
    return small_world_verdict(report.clustering, report.clustering_er, report.path.mean, report.path_er,
                               report.thresholds);
}

const std::optional<PowerLawFit>& StructureReport::gamma_fit() const {
    switch (gamma_kind) {
    case DegreeKind::In: return fit_in;
    case DegreeKind::Out: return fit_out;
    case DegreeKind::Total: break;
    }
    return fit_total;
}

StructureReport structure_report(const DependencyGraph& g, const StructureOptions& options) {
    if (g.node_count() < 2) {
        throw GraphError("structure-metrics", "structure report needs at least 2 nodes");
    }
    StructureReport r;
    r.variant = g.variant();
    r.n = g.node_count();
    r.e = g.edge_count();
    const auto n = static_cast<double>(r.n);
    r.avg_degree = 2.0 * static_cast<double>(r.e) / n;
    r.avg_in_degree = static_cast<double>(r.e) / n;
    r.avg_out_degree = r.avg_in_degree;
    r.gamma_kind = options.gamma_kind;
    r.thresholds = options.thresholds;
    r.er_seed = options.er_seed;
    r.er_trials = options.er_trials;
    r.path_seed = options.path.seed;

    for (auto kind : {DegreeKind::Total, DegreeKind::In, DegreeKind::Out}) {
        auto deg = degree_sequence(g, kind);
        if (kind == DegreeKind::In) r.max_in_degree = *std::max_element(deg.begin(), deg.end());
        if (kind == DegreeKind::Out) r.max_out_degree = *std::max_element(deg.begin(), deg.end());
        try {
            auto fit = fit_power_law(deg);
            (kind == DegreeKind::Total ? r.fit_total : kind == DegreeKind::In ? r.fit_in : r.fit_out) = fit;
        } catch (const FitError& e) {
            r.fit_errors.push_back(std::string{to_string(kind)} + ": " + e.what());
        }
    }

    auto ug = undirected_projection(g);
    r.clustering = avg_clustering(ug);
    PathLengthOptions path = options.path;
    if (path.threads == 0) path.threads = options.threads;
    r.path = avg_path_length(ug, path);
    r.density = density(g);

    auto er = er_baselines(r.n, r.e, options.er_seed, options.er_trials, options.threads);
    r.clustering_er = er.c_er;
    r.clustering_analytic = er.c_analytic;
    r.path_er = er.l_er;
    r.warnings.insert(r.warnings.end(), er.warnings.begin(), er.warnings.end());
    r.clustering_ratio = r.clustering_er > 0.0 ? r.clustering / r.clustering_er : std::numeric_limits<double>::infinity();
    if (r.path_er) r.path_ratio = r.path.mean / *r.path_er;
    r.small_world = small_world_verdict(r);

    if (const auto& fit = r.gamma_fit(); fit && fit->gamma > 1.0) {
        auto est = driver_nodes(fit->gamma, r.avg_degree, r.n);
        r.driver_fraction = est.fraction;
        r.driver_count = est.count;
        if (est.warning) r.warnings.push_back(*est.warning);
    } else {
        r.warnings.push_back("driver-node estimate unavailable: no usable power-law fit");
    }
    return r;
}

} // namespace ecograph
