#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecograph {

enum class Origin { MainRegistry, CompanionRegistry, Unknown };

std::string_view to_string(Origin origin);
Origin origin_from_string(std::string_view text);

/// One parsed registry entry. Dependency lists are normalized: version
/// qualifiers stripped, duplicates removed, self references and the
/// language pseudo-package "R" dropped.
struct PackageRecord {
    std::string name;
    std::string version;
    std::vector<std::string> imports;
    std::vector<std::string> depends;
    std::vector<std::string> suggests;
    std::string description;
    std::optional<std::string> published;
    Origin origin = Origin::MainRegistry;

    bool operator==(const PackageRecord&) const = default;
};

/// Non-fatal problem found while parsing (e.g. a stanza without `Package`).
struct ParseWarning {
    std::size_t line = 0;
    std::string message;

    bool operator==(const ParseWarning&) const = default;
};

struct ParseResult {
    std::vector<PackageRecord> records;
    std::vector<ParseWarning> warnings;
};

/// Parses a CRAN-style `PACKAGES` index (RFC-822 stanzas, folded lines).
/// Throws ParseError on control bytes that cannot be text.
ParseResult parse_dcf(std::string_view raw);

/// Parses a JSON manifest: a top-level array of objects with `name` and
/// optional `version`, `imports`, `depends`, `suggests`, `description`,
/// `published`, `origin`.
ParseResult parse_manifest_json(std::string_view raw);

/// Writes records back in DCF form. parse_dcf(serialize_dcf(r)) == r for
/// normalized records.
std::string serialize_dcf(const std::vector<PackageRecord>& records);

/// Splits one dependency field value ("a, b (>= 1.0), R (>= 3.5)") into
/// normalized names, excluding `self` and "R".
std::vector<std::string> split_dependency_field(std::string_view value, std::string_view self);

/// Builds a record list keyed by unique names; later duplicates are dropped
/// with a warning.
void deduplicate_records(ParseResult& result);

struct Snapshot {
    std::vector<PackageRecord> records;
    std::vector<ParseWarning> warnings;
    std::string captured_at;   // ISO-8601 UTC, empty when unknown
    std::string source;        // URL or file path
    std::string checksum;      // sha256 hex of raw bytes
    bool stale = false;        // served from cache after a failed network check
    bool from_cache = false;
    std::size_t network_reads = 0;  // full-body GETs performed
};

/// Lower-case hex SHA-256 of raw bytes.
std::string sha256_hex(std::string_view bytes);

enum class InputFormat { Dcf, Json, Edges };

std::optional<InputFormat> input_format_from_string(std::string_view text);

/// Reads and parses a local metadata file. Checksum and source are filled in.
Snapshot load_snapshot_file(const std::filesystem::path& path, InputFormat format);

/// Fetches a registry index over HTTP(S), caching raw bytes under
/// `<cache_dir>/<date>/<checksum>.dcf` with `<cache_dir>/index.json`
/// recording each download. A HEAD request decides freshness; an unchanged
/// remote is served from the cache without a GET. On network failure the
/// newest cached copy is returned with `stale` set.
Snapshot fetch_snapshot(const std::string& url, const std::filesystem::path& cache_dir);

} // namespace ecograph
