#pragma once

#include "ecograph/graph.hpp"
#include "ecograph/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace ecograph {

/// Node -> community assignment from Louvain. Ids are dense, ordered by
/// community size (largest first, ties by smallest member).
struct CommunityPartition {
    std::vector<std::uint32_t> assignment;
    std::size_t community_count = 0;
    double modularity = 0.0;
    std::uint64_t seed = 0;
    double resolution = 1.0;
    std::vector<double> levels;  // modularity after each aggregation level

    std::vector<std::size_t> sizes() const;

    bool operator==(const CommunityPartition&) const = default;
};

/// Newman modularity sum_c [e_c / m - resolution * (d_c / 2m)^2] on an
/// unweighted simple graph. Zero for an edgeless graph. Throws GraphError
/// when `assignment` does not cover every node.
double modularity(const UndirectedGraph& g, std::span<const std::uint32_t> assignment, double resolution = 1.0);

/// Two-phase Louvain: local moves in a seed-shuffled node order until no
/// move improves modularity, then aggregation, repeated until a level makes
/// no move.
CommunityPartition louvain(const UndirectedGraph& g, std::uint64_t seed, double resolution = 1.0);

struct StabilityReport {
    std::vector<std::uint64_t> seeds;
    std::vector<std::size_t> community_counts;
    std::vector<double> modularities;
    std::map<std::size_t, std::size_t> count_histogram;  // community count -> runs

    bool operator==(const StabilityReport&) const = default;
};

/// Runs Louvain once per seed (in parallel across seeds).
StabilityReport louvain_stability(const UndirectedGraph& g, std::span<const std::uint64_t> seeds,
                                  double resolution = 1.0, unsigned threads = 0);

class Stopwords {
public:
    Stopwords() = default;
    explicit Stopwords(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    /// English list plus ecosystem boilerplate ("package", "functions", ...);
    /// "data" only when `exclude_data` is set.
    static Stopwords defaults(bool ecosystem_terms = true, bool exclude_data = false);
    /// One word per line; '#' starts a comment.
    static Stopwords from_file(const std::filesystem::path& path);

    bool contains(std::string_view word) const { return words_.contains(std::string{word}); }
    void add(std::string word) { words_.insert(std::move(word)); }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

/// Lower-cased alphanumeric tokens of `text`.
std::vector<std::string> tokenize(std::string_view text);

/// Top `k` terms by frequency (ties alphabetical) across `texts`.
std::vector<std::string> top_terms(std::span<const std::string> texts, const Stopwords& stopwords, std::size_t k);

struct CommunitySummary {
    std::uint32_t id = 0;
    bool other = false;  // aggregate of communities below the share threshold
    std::size_t size = 0;
    double share = 0.0;
    std::vector<std::string> sample_packages;    // highest direct in-degree, no base/recommended
    std::vector<std::string> critical_packages;  // highest closure in-degree, base allowed
    std::vector<std::string> keywords;

    bool operator==(const CommunitySummary&) const = default;
};

struct SummaryOptions {
    std::size_t top_words = 30;
    std::size_t top_packages = 3;
    double min_share = 0.01;

    bool operator==(const SummaryOptions&) const = default;
};

/// One row per community holding at least `min_share` of the nodes, then one
/// "other" row for the rest (if any). `closed` supplies critical-package
/// ranking and must share `direct`'s node order; pass nullptr to rank on
/// `direct`.
std::vector<CommunitySummary> summarize_communities(const CommunityPartition& partition, const DependencyGraph& direct,
                                                    const DependencyGraph* closed,
                                                    std::span<const PackageRecord> records,
                                                    const Stopwords& stopwords, const SummaryOptions& options = {});

} // namespace ecograph
