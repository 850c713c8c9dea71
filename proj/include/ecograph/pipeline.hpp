#pragma once

#include "ecograph/community.hpp"
#include "ecograph/graph.hpp"
#include "ecograph/ingest.hpp"
#include "ecograph/node_metrics.hpp"
#include "ecograph/structure.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ecograph {

struct RunConfig {
    // Exactly one of input_path / url.
    std::optional<std::filesystem::path> input_path;
    std::optional<std::string> url;
    std::filesystem::path cache_dir;
    InputFormat format = InputFormat::Dcf;
    std::optional<std::filesystem::path> nodes_path;     // node table for the edges format
    std::optional<std::filesystem::path> metadata_path;  // descriptions when the graph comes from CSV
    InputFormat metadata_format = InputFormat::Dcf;

    NodeSetConfig node_sets = NodeSetConfig::defaults();

    bool run_structure = true;
    bool run_nodes = true;
    bool run_communities = true;
    std::vector<Variant> structure_variants{Variant::GiantComponent, Variant::TransitiveClosure,
                                            Variant::ClosureNoBase};
    StructureOptions structure;
    bool strict_fit = false;  // a failed fit of the selected degree kind aborts the run

    std::size_t top = 10;
    bool exclude_base = false;
    std::size_t out_degree_threshold = 200;

    Variant community_variant = Variant::GiantComponent;
    std::uint64_t community_seed = 1;
    double resolution = 1.0;
    std::size_t stability_runs = 0;  // extra Louvain runs on seeds community_seed, +1, ...
    SummaryOptions summary;
    std::optional<std::filesystem::path> stopwords_path;
    bool stopwords_exclude_data = false;

    std::filesystem::path output_dir;
    bool write_tsv = true;
    bool write_json = true;
    unsigned threads = 0;

    /// Sets every seed (ER, sampled paths, Louvain) from one value.
    void set_seed(std::uint64_t seed);
    /// Throws Error (parse kind) on a contradictory configuration.
    void validate() const;
};

struct InputInfo {
    std::string source;
    std::string format;
    std::string checksum;
    std::string captured_at;
    bool stale = false;
    bool from_cache = false;
    std::size_t records = 0;
    std::vector<ParseWarning> parse_warnings;

    bool operator==(const InputInfo&) const = default;
};

struct NetworkRow {
    Variant variant = Variant::Full;
    std::size_t n = 0;
    std::size_t e = 0;
    double avg_degree = 0.0;

    bool operator==(const NetworkRow&) const = default;
};

struct NodeScores {
    Variant variant = Variant::TransitiveClosure;
    std::vector<NodeScoreRow> rows;  // graph node order
    std::vector<NodeScoreRow> influential;
    std::vector<NodeScoreRow> heavy;

    bool operator==(const NodeScores&) const = default;
};

struct CommunitySection {
    Variant variant = Variant::GiantComponent;
    std::uint64_t seed = 0;
    double resolution = 1.0;
    std::size_t count = 0;
    double modularity = 0.0;
    std::vector<double> levels;
    std::vector<std::size_t> sizes;
    std::vector<CommunitySummary> summaries;
    std::optional<StabilityReport> stability;

    bool operator==(const CommunitySection&) const = default;
};

struct DistributionSection {
    Variant variant = Variant::GiantComponent;
    std::vector<DegreePoint> total, in, out;

    bool operator==(const DistributionSection&) const = default;
};

struct ReportSettings {
    std::uint64_t er_seed = 0;
    std::size_t er_trials = 0;
    std::string path_mode;  // "exact" or "sampled:M"
    std::uint64_t path_seed = 0;
    DegreeKind gamma_kind = DegreeKind::Total;
    SmallWorldThresholds thresholds;
    std::size_t top = 0;
    bool exclude_base = false;
    std::size_t out_degree_threshold = 0;
    std::uint64_t community_seed = 0;
    double resolution = 1.0;
    double min_share = 0.0;
    std::size_t top_words = 0;
    std::size_t stability_runs = 0;
    std::vector<std::string> base;
    std::vector<std::string> recommended;

    bool operator==(const ReportSettings&) const = default;
};

/// Everything that goes into report.json.
struct EcosystemReport {
    std::string tool_version;
    InputInfo input;
    ReportSettings settings;
    std::vector<NetworkRow> network;
    std::vector<StructureReport> structure;
    std::optional<DistributionSection> distributions;
    std::vector<NodeScores> nodes;
    std::optional<CommunitySection> communities;
    std::vector<std::string> warnings;

    bool operator==(const EcosystemReport&) const = default;
};

/// The report plus the graphs and partition needed for CSV exports.
struct PipelineResult {
    EcosystemReport report;
    std::vector<PackageRecord> records;
    BuildLog build_log;
    DependencyGraph full;
    DependencyGraph gc;
    std::optional<DependencyGraph> community_graph;
    std::vector<std::uint32_t> assignment;  // over community_graph
};

/// Reads the configured input into records (possibly empty for the edges
/// format) and a FULL graph.
struct LoadedInput {
    std::vector<PackageRecord> records;
    DependencyGraph full;
    BuildLog build_log;
    InputInfo info;
};
LoadedInput load_input(const RunConfig& config);

/// ingest -> FULL -> GC -> TC -> TCNB -> metrics -> scores -> communities.
/// Writes artifacts when config.output_dir is non-empty.
PipelineResult run_pipeline(const RunConfig& config);
PipelineResult run_pipeline(const RunConfig& config, LoadedInput input);

/// Writes the TSV / CSV / JSON artifacts into `dir`. Throws IoError.
void emit_tables(const PipelineResult& result, const std::filesystem::path& dir, bool tsv, bool json);

/// Deterministic JSON text (no timestamps of the run itself).
std::string report_to_json(const EcosystemReport& report);
EcosystemReport report_from_json(std::string_view text);

} // namespace ecograph
