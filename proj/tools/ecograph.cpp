// ecograph command-line front end.
#include "ecograph/error.hpp"
#include "ecograph/graph_io.hpp"
#include "ecograph/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace ecograph;

namespace {

constexpr const char* kDefaultUrl = "https://cloud.r-project.org/src/contrib/PACKAGES";

struct CommonArgs {
    std::string input;
    std::string url;
    std::string cache;
    std::string input_format;
    std::string nodes;
    std::string metadata;
    std::string base_list;
    std::string recommended_list;
    std::string out = "ecograph-out";
    std::string formats = "tsv,json";
    unsigned threads = 0;
    bool quiet = false;
};

struct MetricArgs {
    std::uint64_t seed = 42;
    std::size_t er_trials = 10;
    std::string path_mode = "exact";
    std::string gamma_kind = "total";
    std::string variants = "GC,TC,TCNB";
    bool strict_fit = false;
    double c_factor = 10.0;
    double l_factor = 2.0;
    std::size_t top = 10;
    bool exclude_base = false;
    std::size_t out_threshold = 200;
    std::string community_variant = "GC";
    double resolution = 1.0;
    std::size_t stability = 0;
    double min_share = 0.01;
    std::size_t top_words = 30;
    std::string stopwords;
    bool exclude_data = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

Error usage(const std::string& msg, std::string hint = {}) {
    return Error(ErrorKind::Parse, "cli-report", msg, std::move(hint));
}

std::vector<std::string> read_name_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cli-report", "cannot read package list " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (auto& name : split(line, ',')) {
            while (!name.empty() && (name.back() == '\r' || name.back() == '\t')) name.pop_back();
            if (!name.empty()) names.push_back(name);
        }
    }
    return names;
}

InputFormat guess_format(const std::string& explicit_format, const std::string& path) {
    if (!explicit_format.empty()) {
        auto f = input_format_from_string(explicit_format);
        if (!f) throw usage("unknown input format '" + explicit_format + "'", "use dcf, json or edges");
        return *f;
    }
    const auto ext = fs::path(path).extension().string();
    if (ext == ".json") return InputFormat::Json;
    if (ext == ".csv") return InputFormat::Edges;
    return InputFormat::Dcf;
}

std::string cache_dir(const CommonArgs& a) {
    if (!a.cache.empty()) return a.cache;
    if (const char* env = std::getenv("ECOGRAPH_CACHE"); env && *env) return env;
    if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/ecograph";
    return ".ecograph-cache";
}

RunConfig base_config(const CommonArgs& a) {
    RunConfig c;
    if (!a.input.empty() && !a.url.empty()) throw usage("give either an input file or --url, not both");
    if (!a.url.empty()) {
        c.url = a.url;
        c.cache_dir = cache_dir(a);
    } else if (!a.input.empty()) {
        c.input_path = a.input;
        c.format = guess_format(a.input_format, a.input);
    } else {
        throw usage("no input given", "pass a PACKAGES file, a JSON manifest, an edges.csv, or --url");
    }
    if (!a.nodes.empty()) c.nodes_path = a.nodes;
    if (!a.metadata.empty()) {
        c.metadata_path = a.metadata;
        c.metadata_format = guess_format("", a.metadata);
    }
    if (!a.base_list.empty()) c.node_sets.base = read_name_list(a.base_list);
    if (!a.recommended_list.empty()) c.node_sets.recommended = read_name_list(a.recommended_list);
    c.output_dir = a.out;
    c.write_tsv = c.write_json = false;
    for (const auto& f : split(a.formats, ',')) {
        if (f == "tsv") c.write_tsv = true;
        else if (f == "json") c.write_json = true;
        else throw usage("unknown output format '" + f + "'", "use tsv, json or tsv,json");
    }
    c.threads = a.threads;
    return c;
}

void apply_metrics(RunConfig& c, const MetricArgs& m) {
    c.set_seed(m.seed);
    c.structure.er_trials = m.er_trials;
    if (m.path_mode == "exact") {
        c.structure.path.sampled = false;
    } else if (m.path_mode.rfind("sampled:", 0) == 0) {
        c.structure.path.sampled = true;
        try {
            c.structure.path.samples = std::stoul(m.path_mode.substr(8));
        } catch (const std::exception&) {
            throw usage("bad --path-mode '" + m.path_mode + "'", "use exact or sampled:M");
        }
    } else {
        throw usage("bad --path-mode '" + m.path_mode + "'", "use exact or sampled:M");
    }
    if (m.gamma_kind == "total") c.structure.gamma_kind = DegreeKind::Total;
    else if (m.gamma_kind == "in") c.structure.gamma_kind = DegreeKind::In;
    else if (m.gamma_kind == "out") c.structure.gamma_kind = DegreeKind::Out;
    else throw usage("bad --gamma-kind '" + m.gamma_kind + "'", "use total, in or out");
    c.structure_variants.clear();
    for (const auto& v : split(m.variants, ',')) {
        auto parsed = variant_from_string(v);
        if (!parsed) throw usage("unknown variant '" + v + "'", "use GC, TC or TCNB");
        c.structure_variants.push_back(*parsed);
    }
    c.structure.thresholds = {m.c_factor, m.l_factor};
    c.strict_fit = m.strict_fit;
    c.top = m.top;
    c.exclude_base = m.exclude_base;
    c.out_degree_threshold = m.out_threshold;
    auto cv = variant_from_string(m.community_variant);
    if (!cv) throw usage("unknown community variant '" + m.community_variant + "'");
    c.community_variant = *cv;
    c.resolution = m.resolution;
    c.stability_runs = m.stability;
    c.summary.min_share = m.min_share;
    c.summary.top_words = m.top_words;
    if (!m.stopwords.empty()) c.stopwords_path = m.stopwords;
    c.stopwords_exclude_data = m.exclude_data;
}

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("input", a.input, "PACKAGES (DCF), JSON manifest, or edges.csv");
    cmd->add_option("--url", a.url, "fetch a registry index instead of reading a file");
    cmd->add_option("--cache", a.cache, "cache directory for --url (default $ECOGRAPH_CACHE)");
    cmd->add_option("--input-format", a.input_format, "dcf, json or edges (default: from the extension)");
    cmd->add_option("--nodes", a.nodes, "node table accompanying an edges.csv input");
    cmd->add_option("--metadata", a.metadata, "PACKAGES or JSON file supplying descriptions for CSV input");
    cmd->add_option("--base-list", a.base_list, "file of base package names");
    cmd->add_option("--recommended-list", a.recommended_list, "file of recommended package names");
    cmd->add_option("-o,--out", a.out, "output directory")->capture_default_str();
    cmd->add_option("--format", a.formats, "output formats: tsv, json, or tsv,json")->capture_default_str();
    cmd->add_option("--threads", a.threads, "worker threads (0 = all cores)")->capture_default_str();
    cmd->add_flag("-q,--quiet", a.quiet, "print nothing on success");
}

void add_structure_flags(CLI::App* cmd, MetricArgs& m) {
    cmd->add_option("--seed", m.seed, "seed for random baselines, sampling and Louvain")->capture_default_str();
    cmd->add_option("--er-trials", m.er_trials, "random graphs per baseline")->capture_default_str();
    cmd->add_option("--path-mode", m.path_mode, "exact or sampled:M")->capture_default_str();
    cmd->add_option("--gamma-kind", m.gamma_kind, "degree kind behind the reported gamma: total, in, out")
        ->capture_default_str();
    cmd->add_option("--variants", m.variants, "variants for structure metrics")->capture_default_str();
    cmd->add_flag("--strict-fit", m.strict_fit, "fail (exit 4) when the selected power-law fit is undefined");
    cmd->add_option("--small-world-c", m.c_factor, "small world needs C >= factor * C_er")->capture_default_str();
    cmd->add_option("--small-world-l", m.l_factor, "small world needs l <= factor * l_er")->capture_default_str();
}

void add_node_flags(CLI::App* cmd, MetricArgs& m) {
    cmd->add_option("--top", m.top, "rows in the influential table")->capture_default_str();
    cmd->add_flag("--exclude-base", m.exclude_base, "leave base and recommended packages out of the ranking");
    cmd->add_option("--out-degree-threshold", m.out_threshold, "transitive dependency count for heavy.tsv")
        ->capture_default_str();
}

void add_community_flags(CLI::App* cmd, MetricArgs& m, bool with_seed) {
    if (with_seed) cmd->add_option("--seed", m.seed, "Louvain seed")->capture_default_str();
    cmd->add_option("--community-variant", m.community_variant, "graph partitioned by Louvain: GC, TC, TCNB, FULL")
        ->capture_default_str();
    cmd->add_option("--resolution", m.resolution, "modularity resolution")->capture_default_str();
    cmd->add_option("--stability-seeds", m.stability, "extra Louvain runs reporting the community-count spread")
        ->capture_default_str();
    cmd->add_option("--min-share", m.min_share, "smallest community share listed on its own")->capture_default_str();
    cmd->add_option("--top-words", m.top_words, "keywords per community")->capture_default_str();
    cmd->add_option("--stopwords", m.stopwords, "replace the built-in stopword list");
    cmd->add_flag("--exclude-data-term", m.exclude_data, "treat \"data\" as a stopword");
}

void print_summary(const EcosystemReport& rep, const fs::path& out) {
    std::printf("%-6s %10s %10s %10s\n", "", "N", "E", "k");
    for (const auto& r : rep.network) {
        std::printf("%-6s %10zu %10zu %10.3f\n", std::string(to_string(r.variant)).c_str(), r.n, r.e, r.avg_degree);
    }
    for (const auto& s : rep.structure) {
        const auto& fit = s.gamma_fit();
        std::printf("%-6s gamma=%s C=%.4f C_er=%.4f l=%.2f l_er=%s small-world=%s\n",
                    std::string(to_string(s.variant)).c_str(), fit ? std::to_string(fit->gamma).c_str() : "NA",
                    s.clustering, s.clustering_er, s.path.mean,
                    s.path_er ? std::to_string(*s.path_er).c_str() : "NA",
                    s.small_world ? (*s.small_world ? "yes" : "no") : "undetermined");
    }
    for (const auto& n : rep.nodes) {
        if (n.influential.empty()) continue;
        const auto& top = n.influential.front();
        std::printf("%-6s most depended upon: %s (v=%.1f%%)\n", std::string(to_string(n.variant)).c_str(),
                    top.package.c_str(), 100.0 * top.vulnerability);
    }
    if (rep.communities) {
        std::printf("communities: %zu (Q=%.4f, seed %llu)\n", rep.communities->count, rep.communities->modularity,
                    static_cast<unsigned long long>(rep.communities->seed));
    }
    for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("outputs in %s\n", out.string().c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Complex-network analysis of package dependency ecosystems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ecograph 0.1.0");

    CommonArgs common;
    MetricArgs metrics;

    auto* fetch = app.add_subcommand("fetch", "download (or reuse a cached copy of) a registry index");
    std::string fetch_url = kDefaultUrl, fetch_cache, fetch_copy;
    fetch->add_option("--url", fetch_url, "registry index URL")->capture_default_str();
    fetch->add_option("--cache", fetch_cache, "cache directory (default $ECOGRAPH_CACHE)");
    fetch->add_option("--copy-to", fetch_copy, "also write the parsed records as DCF here");

    auto* build = app.add_subcommand("build", "parse metadata and export the dependency graph");
    add_common(build, common);

    auto* analyze = app.add_subcommand("analyze", "run the whole pipeline");
    add_common(analyze, common);
    add_structure_flags(analyze, metrics);
    add_node_flags(analyze, metrics);
    add_community_flags(analyze, metrics, false);

    auto* structure = app.add_subcommand("structure", "scale-free and small-world diagnostics");
    add_common(structure, common);
    add_structure_flags(structure, metrics);

    auto* nodes = app.add_subcommand("nodes", "vulnerability and dependency rankings");
    add_common(nodes, common);
    add_node_flags(nodes, metrics);

    auto* communities = app.add_subcommand("communities", "Louvain communities with keyword summaries");
    add_common(communities, common);
    add_community_flags(communities, metrics, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorKind::Parse);
    }

    try {
        if (fetch->parsed()) {
            CommonArgs a;
            a.cache = fetch_cache;
            Snapshot snap = fetch_snapshot(fetch_url, cache_dir(a));
            std::printf("source: %s\nchecksum: %s\nrecords: %zu\nfrom cache: %s%s\n", snap.source.c_str(),
                        snap.checksum.c_str(), snap.records.size(), snap.from_cache ? "yes" : "no",
                        snap.stale ? " (stale)" : "");
            for (const auto& w : snap.warnings) std::fprintf(stderr, "warning: line %zu: %s\n", w.line, w.message.c_str());
            if (!fetch_copy.empty()) {
                std::ofstream f(fetch_copy, std::ios::binary);
                if (!f) throw IoError("registry-ingest", "cannot write " + fetch_copy);
                f << serialize_dcf(snap.records);
            }
            return 0;
        }

        RunConfig config = base_config(common);
        if (build->parsed()) {
            LoadedInput in = load_input(config);
            PipelineResult result;
            result.full = std::move(in.full);
            result.build_log = std::move(in.build_log);
            emit_tables(result, config.output_dir, false, false);
            if (!common.quiet) {
                std::printf("FULL: %zu nodes, %zu edges (%zu missing-dependency entries)\noutputs in %s\n",
                            result.full.node_count(), result.full.edge_count(), result.build_log.lines.size(),
                            config.output_dir.string().c_str());
            }
            for (const auto& w : in.info.parse_warnings) {
                std::fprintf(stderr, "warning: line %zu: %s\n", w.line, w.message.c_str());
            }
            return 0;
        }

        apply_metrics(config, metrics);
        config.run_structure = analyze->parsed() || structure->parsed();
        config.run_nodes = analyze->parsed() || nodes->parsed();
        config.run_communities = analyze->parsed() || communities->parsed();
        PipelineResult result = run_pipeline(config);
        if (!common.quiet) print_summary(result.report, config.output_dir);
        return 0;
    } catch (const Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.module().c_str(), e.what());
        if (!e.hint().empty()) std::fprintf(stderr, "hint: %s\n", e.hint().c_str());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
