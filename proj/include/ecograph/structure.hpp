#pragma once

#include "ecograph/graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ecograph {

enum class DegreeKind { Total, In, Out };

std::string_view to_string(DegreeKind kind);

struct DegreePoint {
    std::uint64_t k = 0;
    double pdf = 0.0;   // fraction of nodes with degree exactly k
    double ccdf = 0.0;  // fraction of nodes with degree >= k

    bool operator==(const DegreePoint&) const = default;
};

struct DegreeDistribution {
    DegreeKind kind = DegreeKind::Total;
    std::map<std::uint64_t, std::size_t> histogram;  // degree -> node count
    std::vector<DegreePoint> points;                 // one per observed degree, ascending
    std::size_t node_count = 0;

    double mean() const;
    std::uint64_t max_degree() const { return histogram.empty() ? 0 : histogram.rbegin()->first; }
    /// Expands the histogram back into one degree per node (ascending).
    std::vector<std::uint64_t> samples() const;
};

std::vector<std::uint64_t> degree_sequence(const DependencyGraph& g, DegreeKind kind);
DegreeDistribution distribution_from_degrees(std::span<const std::uint64_t> degrees, DegreeKind kind);
/// Throws GraphError on an empty graph.
DegreeDistribution degree_distribution(const DependencyGraph& g, DegreeKind kind);

/// Discrete power-law fit p(k) ~ k^-gamma on the tail k >= xmin.
struct PowerLawFit {
    double gamma = 0.0;         // maximum-likelihood exponent
    std::uint64_t xmin = 1;     // KS-minimizing lower cutoff
    double ks = 0.0;            // KS distance between empirical and fitted tail CCDF
    std::size_t n_tail = 0;     // samples >= xmin
    double gamma_approx = 0.0;  // closed form 1 + n / sum ln(k / (xmin - 1/2)) at the chosen xmin
    double loglog_slope = 0.0;  // least-squares slope of log pdf on log k (all positive degrees)

    bool operator==(const PowerLawFit&) const = default;
};

/// Minimum number of distinct degree values a candidate tail must hold.
inline constexpr std::size_t kMinTailDistinct = 10;

/// Fits positive samples. Throws FitError for a single-valued sample or when
/// fewer than kMinTailDistinct distinct positive values exist.
PowerLawFit fit_power_law(std::span<const std::uint64_t> samples);
PowerLawFit fit_power_law(const DegreeDistribution& dist);

/// Hurwitz zeta sum_{j>=0} (q + j)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

/// Per-node triangle counts on an undirected simple graph.
std::vector<std::uint64_t> triangle_counts(const UndirectedGraph& g);

/// Mean local clustering; nodes with degree < 2 contribute 0.
/// Throws GraphError on an empty graph.
double avg_clustering(const UndirectedGraph& g);

struct PathLengthOptions {
    bool sampled = false;
    std::size_t samples = 1000;  // sources drawn without replacement in sampled mode
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct PathLength {
    double mean = 0.0;
    double std_error = 0.0;  // zero in exact mode
    bool sampled = false;
    std::size_t sources = 0;

    bool operator==(const PathLength&) const = default;
};

/// Mean shortest-path length over unordered node pairs. Exact mode runs a
/// 64-way bit-parallel BFS from every node. Throws GraphError when `g` is
/// disconnected or has fewer than 2 nodes.
PathLength avg_path_length(const UndirectedGraph& g, const PathLengthOptions& options = {});

struct ErBaselines {
    double c_er = 0.0;          // Monte-Carlo mean clustering
    double c_er_stddev = 0.0;   // across trials
    double c_analytic = 0.0;    // k / (n - 1)
    std::optional<double> l_er; // undefined when the giant component vanishes
    double l_er_stddev = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;

    bool operator==(const ErBaselines&) const = default;
};

/// Averages clustering and path length (on each trial's giant component)
/// over `trials` G(n, p) graphs seeded seed, seed + 1, ...
ErBaselines er_baselines(std::size_t n, std::size_t e, std::uint64_t seed, std::size_t trials, unsigned threads = 0);

/// Directed density E / (n (n - 1)).
double density(const DependencyGraph& g);

struct SmallWorldThresholds {
    double clustering_factor = 10.0;  // C >= factor * C_er
    double path_factor = 2.0;         // l <= factor * l_er

    bool operator==(const SmallWorldThresholds&) const = default;
};

struct StructureReport {
    Variant variant = Variant::GiantComponent;
    std::size_t n = 0;
    std::size_t e = 0;
    double avg_degree = 0.0;  // 2e / n
    double avg_in_degree = 0.0;
    double avg_out_degree = 0.0;
    DegreeKind gamma_kind = DegreeKind::Total;
    std::optional<PowerLawFit> fit_total;
    std::optional<PowerLawFit> fit_in;
    std::optional<PowerLawFit> fit_out;
    std::vector<std::string> fit_errors;
    double clustering = 0.0;
    double clustering_er = 0.0;
    double clustering_analytic = 0.0;
    PathLength path;
    std::optional<double> path_er;
    double density = 0.0;
    double driver_fraction = 0.0;
    std::size_t driver_count = 0;
    std::optional<bool> small_world;
    double clustering_ratio = 0.0;  // C / C_er
    std::optional<double> path_ratio;  // l / l_er
    SmallWorldThresholds thresholds;
    std::uint64_t er_seed = 0;
    std::size_t er_trials = 0;
    std::uint64_t path_seed = 0;
    std::size_t max_in_degree = 0;
    std::size_t max_out_degree = 0;
    std::vector<std::string> warnings;

    const std::optional<PowerLawFit>& gamma_fit() const;

    bool operator==(const StructureReport&) const = default;
};

/// True iff C >= clustering_factor * C_er and l <= path_factor * l_er;
/// nullopt when l_er is undefined.
std::optional<bool> small_world_verdict(double c, double c_er, double l, std::optional<double> l_er,
                                        const SmallWorldThresholds& thresholds = {});
std::optional<bool> small_world_verdict(const StructureReport& report);

struct StructureOptions {
    PathLengthOptions path;
    std::uint64_t er_seed = 42;
    std::size_t er_trials = 10;
    SmallWorldThresholds thresholds;
    DegreeKind gamma_kind = DegreeKind::Total;
    unsigned threads = 0;
};

/// All ecosystem-level diagnostics for one connected variant.
StructureReport structure_report(const DependencyGraph& g, const StructureOptions& options = {});

} // namespace ecograph
