#include "ecograph/node_metrics.hpp"

#include "ecograph/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ecograph {

std::vector<NodeScoreRow> vulnerability_table(const DependencyGraph& direct, const DependencyGraph& closed) {
    if (direct.node_count() != closed.node_count()) {
        throw GraphError("node-metrics",
                         "node-set mismatch: direct graph has " + std::to_string(direct.node_count()) +
                             " nodes, closure has " + std::to_string(closed.node_count()),
                         "pass the closure of the same graph variant");
    }
    const std::size_t n = direct.node_count();
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    std::vector<NodeScoreRow> rows;
    rows.reserve(n);
    for (NodeId i = 0; i < n; ++i) {
        const auto& info = direct.node(i);
        if (info.name != closed.node(i).name) {
            throw GraphError("node-metrics", "node-set mismatch at index " + std::to_string(i) + ": '" + info.name +
                                                 "' vs '" + closed.node(i).name + "'");
        }
        NodeScoreRow row;
        row.package = info.name;
        row.dd = direct.in_degree(i);
        row.td = closed.in_degree(i);
        row.centrality = n > 1 ? static_cast<double>(row.td) / denom : 0.0;
        row.vulnerability = row.centrality;
        row.out_direct = direct.out_degree(i);
        row.out_transitive = closed.out_degree(i);
        row.inverse_vulnerability = n > 1 ? static_cast<double>(row.out_transitive) / denom : 0.0;
        row.is_base = info.is_base;
        row.is_recommended = info.is_recommended;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<NodeScoreRow> top_influential(const std::vector<NodeScoreRow>& rows, std::size_t k,
                                          const NodeSetConfig* exclude) {
    std::vector<NodeScoreRow> kept;
    for (const auto& row : rows) {
        if (exclude && (exclude->is_base(row.package) || exclude->is_recommended(row.package))) continue;
        kept.push_back(row);
    }
    auto better = [](const NodeScoreRow& a, const NodeScoreRow& b) {
        if (a.vulnerability != b.vulnerability) return a.vulnerability > b.vulnerability;
        if (a.td != b.td) return a.td > b.td;
        return a.package < b.package;
    };
    const std::size_t take = std::min(k, kept.size());
    std::partial_sort(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(take), kept.end(), better);
    kept.resize(take);
    return kept;
}

std::vector<NodeScoreRow> heavy_dependents(const std::vector<NodeScoreRow>& rows, std::size_t threshold) {
    std::vector<NodeScoreRow> out;
    for (const auto& row : rows) {
        if (row.out_transitive > threshold) out.push_back(row);
    }
    std::sort(out.begin(), out.end(), [](const NodeScoreRow& a, const NodeScoreRow& b) {
        if (a.out_transitive != b.out_transitive) return a.out_transitive > b.out_transitive;
        return a.package < b.package;
    });
    return out;
}

ControllabilityEstimate driver_nodes(double gamma, double avg_degree, std::size_t n) {
    if (!(gamma > 1.0)) {
        throw GraphError("node-metrics", "driver-node estimate needs gamma > 1, got " + std::to_string(gamma),
                         "check the power-law fit");
    }
    ControllabilityEstimate est;
    est.gamma = gamma;
    est.avg_degree = avg_degree;
    est.raw_fraction = std::exp(-0.5 * (1.0 - 1.0 / (gamma - 1.0)) * avg_degree);
    est.fraction = est.raw_fraction;
    if (!(est.fraction <= 1.0)) {
        est.fraction = 1.0;
        est.clamped = true;
        std::ostringstream msg;
        msg << "driver-node fraction " << est.raw_fraction << " exceeds 1 (gamma " << gamma
            << " is outside the estimate's validity range); clamped to 1";
        est.warning = msg.str();
    }
    if (!(est.fraction > 0.0)) {
        est.fraction = std::numeric_limits<double>::min();
        est.clamped = true;
        est.warning = "driver-node fraction underflowed to 0; clamped to the smallest positive value";
    }
    est.count = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(est.fraction * static_cast<double>(n))));
    return est;
}

} // namespace ecograph
