#include "ecograph/community.hpp"

#include "ecograph/detail/parallel.hpp"
#include "ecograph/detail/random.hpp"
#include "ecograph/error.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace ecograph {

std::vector<std::size_t> CommunityPartition::sizes() const {
    std::vector<std::size_t> out(community_count, 0);
    for (auto c : assignment) ++out[c];
    return out;
}

double modularity(const UndirectedGraph& g, std::span<const std::uint32_t> assignment, double resolution) {
    if (assignment.size() != g.node_count()) {
        throw GraphError("community", "assignment covers " + std::to_string(assignment.size()) + " of " +
                                          std::to_string(g.node_count()) + " nodes");
    }
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0) return 0.0;
    std::unordered_map<std::uint32_t, std::pair<double, double>> per;  // intra edges, degree sum
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto& slot = per[assignment[u]];
        slot.second += static_cast<double>(g.degree(u));
        for (NodeId v : g.neighbors(u)) {
            if (u < v && assignment[u] == assignment[v]) slot.first += 1.0;
        }
    }
    // Sum in community-id order for a reproducible rounding pattern.
    std::vector<std::uint32_t> ids;
    ids.reserve(per.size());
    for (const auto& [c, _] : per) ids.push_back(c);
    std::sort(ids.begin(), ids.end());
    double q = 0.0;
    for (auto c : ids) {
        const auto [intra, deg] = per[c];
        const double share = deg / (2.0 * m);
        q += intra / m - resolution * share * share;
    }
    return q;
}

namespace {

// Weighted graph with self loops used between aggregation levels.
struct LevelGraph {
    std::vector<std::size_t> offsets{0};
    std::vector<std::uint32_t> targets;  // excludes self loops
    std::vector<double> weights;
    std::vector<double> self_loop;       // weight of the loop on each node
    std::vector<double> degree;          // neighbour weights + 2 * loop

    std::size_t size() const { return self_loop.size(); }
};

LevelGraph from_simple(const UndirectedGraph& g) {
    LevelGraph lg;
    const std::size_t n = g.node_count();
    lg.offsets.assign(n + 1, 0);
    lg.self_loop.assign(n, 0.0);
    lg.degree.assign(n, 0.0);
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : g.neighbors(u)) {
            lg.targets.push_back(v);
            lg.weights.push_back(1.0);
        }
        lg.offsets[u + 1] = lg.targets.size();
        lg.degree[u] = static_cast<double>(g.degree(u));
    }
    return lg;
}

struct LevelResult {
    std::vector<std::uint32_t> community;  // dense ids
    std::size_t count = 0;
    bool moved = false;
    double q = 0.0;
};

LevelResult local_moves(const LevelGraph& g, double m, double resolution, detail::Rng& rng) {
    const std::size_t n = g.size();
    std::vector<std::uint32_t> comm(n);
    std::iota(comm.begin(), comm.end(), 0u);
    std::vector<double> tot(g.degree), in(n);
    for (std::size_t u = 0; u < n; ++u) in[u] = 2.0 * g.self_loop[u];

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    detail::shuffle(std::span<std::uint32_t>{order}, rng);

    std::vector<double> link(n, -1.0);  // weight from the current node to each community
    std::vector<std::uint32_t> touched;
    const double two_m = 2.0 * m;
    bool moved_any = false;

    for (int pass = 0; pass < 1000; ++pass) {
        bool moved = false;
        for (std::uint32_t u : order) {
            const std::uint32_t home = comm[u];
            const double k = g.degree[u];
            touched.clear();
            link[home] = 0.0;
            touched.push_back(home);
            for (std::size_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
                const std::uint32_t c = comm[g.targets[i]];
                if (link[c] < 0.0) {
                    link[c] = 0.0;
                    touched.push_back(c);
                }
                link[c] += g.weights[i];
            }
            tot[home] -= k;
            in[home] -= 2.0 * (link[home] + g.self_loop[u]);

            std::uint32_t best = home;
            double best_gain = link[home] - resolution * tot[home] * k / two_m;
            for (std::uint32_t c : touched) {
                const double gain = link[c] - resolution * tot[c] * k / two_m;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            tot[best] += k;
            in[best] += 2.0 * (link[best] + g.self_loop[u]);
            if (best != home) {
                comm[u] = best;
                moved = true;
            }
            for (std::uint32_t c : touched) link[c] = -1.0;
        }
        if (!moved) break;
        moved_any = true;
    }

    LevelResult r;
    r.moved = moved_any;
    std::vector<std::uint32_t> dense(n, ~0u);
    r.community.resize(n);
    for (std::uint32_t u = 0; u < n; ++u) {
        if (dense[comm[u]] == ~0u) dense[comm[u]] = static_cast<std::uint32_t>(r.count++);
        r.community[u] = dense[comm[u]];
    }
    // `in` holds twice the internal weight of each community.
    for (std::uint32_t c = 0; c < n; ++c) {
        if (dense[c] == ~0u) continue;
        const double share = tot[c] / two_m;
        r.q += in[c] / two_m - resolution * share * share;
    }
    return r;
}

LevelGraph aggregate(const LevelGraph& g, const LevelResult& level) {
    LevelGraph out;
    const std::size_t c = level.count;
    out.self_loop.assign(c, 0.0);
    out.degree.assign(c, 0.0);
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(c);
    for (std::uint32_t u = 0; u < g.size(); ++u) {
        const std::uint32_t cu = level.community[u];
        out.self_loop[cu] += g.self_loop[u];
        out.degree[cu] += g.degree[u];
        for (std::size_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
            const std::uint32_t cv = level.community[g.targets[i]];
            if (cu == cv) {
                out.self_loop[cu] += 0.5 * g.weights[i];  // seen from both endpoints
            } else {
                rows[cu].emplace_back(cv, g.weights[i]);
            }
        }
    }
    out.offsets.assign(c + 1, 0);
    for (std::uint32_t cu = 0; cu < c; ++cu) {
        auto& row = rows[cu];
        std::sort(row.begin(), row.end());
        for (std::size_t i = 0; i < row.size();) {
            std::size_t j = i;
            double w = 0.0;
            while (j < row.size() && row[j].first == row[i].first) w += row[j++].second;
            out.targets.push_back(row[i].first);
            out.weights.push_back(w);
            i = j;
        }
        out.offsets[cu + 1] = out.targets.size();
    }
    return out;
}

} // namespace

CommunityPartition louvain(const UndirectedGraph& g, std::uint64_t seed, double resolution) {
    if (g.node_count() == 0) throw GraphError("community", "Louvain needs a non-empty graph");
    CommunityPartition result;
    result.seed = seed;
    result.resolution = resolution;
    const std::size_t n = g.node_count();
    const double m = static_cast<double>(g.edge_count());

    std::vector<std::uint32_t> membership(n);
    std::iota(membership.begin(), membership.end(), 0u);
    if (m == 0.0) {
        // Singletons; nothing to optimize.
        result.assignment = membership;
        result.community_count = n;
        result.modularity = 0.0;
        result.levels.push_back(0.0);
        return result;
    }

    detail::Rng rng(seed);
    LevelGraph level_graph = from_simple(g);
    double q = 0.0;
    for (;;) {
        LevelResult level = local_moves(level_graph, m, resolution, rng);
        if (!level.moved) {
            if (result.levels.empty()) {
                q = level.q;
                result.levels.push_back(q);
            }
            break;
        }
        for (auto& c : membership) c = level.community[c];
        q = level.q;
        result.levels.push_back(q);
        level_graph = aggregate(level_graph, level);
    }

    // Dense ids by size (largest first), ties by smallest member.
    std::size_t count = *std::max_element(membership.begin(), membership.end()) + 1;
    std::vector<std::size_t> size(count, 0);
    std::vector<std::uint32_t> first(count, ~0u);
    for (std::uint32_t u = 0; u < n; ++u) {
        ++size[membership[u]];
        first[membership[u]] = std::min(first[membership[u]], u);
    }
    std::vector<std::uint32_t> ids;
    for (std::uint32_t c = 0; c < count; ++c) {
        if (size[c] > 0) ids.push_back(c);
    }
    std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
        return size[a] != size[b] ? size[a] > size[b] : first[a] < first[b];
    });
    std::vector<std::uint32_t> relabel(count, 0);
    for (std::uint32_t i = 0; i < ids.size(); ++i) relabel[ids[i]] = i;
    result.assignment.resize(n);
    for (std::uint32_t u = 0; u < n; ++u) result.assignment[u] = relabel[membership[u]];
    result.community_count = ids.size();
    result.modularity = q;
    return result;
}

StabilityReport louvain_stability(const UndirectedGraph& g, std::span<const std::uint64_t> seeds, double resolution,
                                  unsigned threads) {
    StabilityReport report;
    report.seeds.assign(seeds.begin(), seeds.end());
    report.community_counts.resize(seeds.size());
    report.modularities.resize(seeds.size());
    detail::parallel_blocks(seeds.size(), threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            auto p = louvain(g, seeds[i], resolution);
            report.community_counts[i] = p.community_count;
            report.modularities[i] = p.modularity;
        }
    });
    for (auto c : report.community_counts) ++report.count_histogram[c];
    return report;
}

} // namespace ecograph
