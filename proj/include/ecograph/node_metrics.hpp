#pragma once

#include "ecograph/graph.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ecograph {

/// Influence and risk scores for one package.
///
/// `vulnerability` is the fraction of the rest of the ecosystem that
/// transitively depends on the package; `inverse_vulnerability` is the
/// fraction it transitively depends on. On closure graphs the normalized
/// degree centrality is td / (n - 1), so `centrality` and `vulnerability`
/// carry the same number.
struct NodeScoreRow {
    std::string package;
    std::size_t dd = 0;              // direct reverse dependencies (in-degree, direct graph)
    std::size_t td = 0;              // transitive reverse dependencies (in-degree, closure)
    double centrality = 0.0;
    double vulnerability = 0.0;
    std::size_t out_direct = 0;      // direct dependencies
    std::size_t out_transitive = 0;  // transitive dependencies
    double inverse_vulnerability = 0.0;
    bool is_base = false;
    bool is_recommended = false;

    bool operator==(const NodeScoreRow&) const = default;
};

/// Scores every node. `direct` and `closed` must hold the same node names in
/// the same order (GC with its TC, or the GC restricted to TCNB's nodes with
/// TCNB). Throws GraphError on a mismatch.
std::vector<NodeScoreRow> vulnerability_table(const DependencyGraph& direct, const DependencyGraph& closed);

/// Top `k` rows by vulnerability (ties: td, then name). With `exclude`, base
/// and recommended packages are skipped.
std::vector<NodeScoreRow> top_influential(const std::vector<NodeScoreRow>& rows, std::size_t k,
                                          const NodeSetConfig* exclude = nullptr);

/// Rows with out_transitive > threshold, largest first (ties by name).
std::vector<NodeScoreRow> heavy_dependents(const std::vector<NodeScoreRow>& rows, std::size_t threshold);

struct ControllabilityEstimate {
    double gamma = 0.0;
    double avg_degree = 0.0;
    double raw_fraction = 0.0;  // formula value before clamping
    double fraction = 0.0;      // clamped to (0, 1]
    std::size_t count = 0;      // round(fraction * n), at least 1
    bool clamped = false;
    std::optional<std::string> warning;

    bool operator==(const ControllabilityEstimate&) const = default;
};

/// Driver-node estimate n_d / n ~ exp(-(1/2) (1 - 1/(gamma - 1)) <k>).
/// Throws GraphError (domain error) when gamma <= 1.
ControllabilityEstimate driver_nodes(double gamma, double avg_degree, std::size_t n);

} // namespace ecograph
