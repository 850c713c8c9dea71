#include "ecograph/pipeline.hpp"

#include "ecograph/error.hpp"
#include "ecograph/graph_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#ifndef ECOGRAPH_VERSION
#define ECOGRAPH_VERSION "0.0.0"
#endif

namespace ecograph {

using nlohmann::json;
namespace fs = std::filesystem;

void RunConfig::set_seed(std::uint64_t seed) {
    structure.er_seed = seed;
    structure.path.seed = seed;
    community_seed = seed;
}

void RunConfig::validate() const {
    auto bad = [](const std::string& msg, std::string hint = {}) {
        return Error(ErrorKind::Parse, "cli-report", msg, std::move(hint));
    };
    if (input_path.has_value() == url.has_value()) {
        throw bad("exactly one input source is required", "give either an input file or --url");
    }
    if (url && format != InputFormat::Dcf) throw bad("--url only serves DCF registry indexes");
    if (nodes_path && format != InputFormat::Edges) throw bad("a node table only applies to the edges format");
    for (auto v : structure_variants) {
        if (v == Variant::Full) {
            throw bad("structure metrics need a connected variant", "choose among GC, TC, TCNB");
        }
    }
    if (structure.path.sampled && structure.path.samples == 0) throw bad("sampled path mode needs M > 0");
    if (!(summary.min_share >= 0.0 && summary.min_share <= 1.0)) throw bad("--min-share must lie in [0, 1]");
    if (!(resolution > 0.0)) throw bad("--resolution must be positive");
    if (!(structure.thresholds.clustering_factor > 0.0 && structure.thresholds.path_factor > 0.0)) {
        throw bad("small-world factors must be positive");
    }
    node_sets.validate();
}

// ---------------------------------------------------------------- loading

LoadedInput load_input(const RunConfig& config) {
    config.validate();
    LoadedInput in;
    if (config.url) {
        Snapshot snap = fetch_snapshot(*config.url, config.cache_dir);
        in.info.source = snap.source;
        in.info.checksum = snap.checksum;
        in.info.captured_at = snap.captured_at;
        in.info.stale = snap.stale;
        in.info.from_cache = snap.from_cache;
        in.info.parse_warnings = snap.warnings;
        in.records = std::move(snap.records);
        in.info.format = "dcf";
    } else if (config.format == InputFormat::Edges) {
        in.full = read_graph_csv_files(*config.input_path, config.nodes_path, config.node_sets);
        std::ifstream raw(*config.input_path, std::ios::binary);
        std::stringstream buf;
        buf << raw.rdbuf();
        in.info.source = config.input_path->string();
        in.info.checksum = sha256_hex(buf.str());
        in.info.format = "edges";
        if (config.metadata_path) {
            Snapshot meta = load_snapshot_file(*config.metadata_path, config.metadata_format);
            in.records = std::move(meta.records);
            in.info.parse_warnings = meta.warnings;
        }
        in.info.records = in.records.size();
        return in;
    } else {
        Snapshot snap = load_snapshot_file(*config.input_path, config.format);
        in.info.source = snap.source;
        in.info.checksum = snap.checksum;
        in.info.captured_at = snap.captured_at;
        in.info.parse_warnings = snap.warnings;
        in.records = std::move(snap.records);
        in.info.format = config.format == InputFormat::Json ? "json" : "dcf";
    }
    in.info.records = in.records.size();
    in.full = build_graph(in.records, config.node_sets, &in.build_log);
    return in;
}

// ---------------------------------------------------------------- pipeline

namespace {

NetworkRow network_row(const DependencyGraph& g) {
    NetworkRow row;
    row.variant = g.variant();
    row.n = g.node_count();
    row.e = g.edge_count();
    row.avg_degree = row.n ? 2.0 * static_cast<double>(row.e) / static_cast<double>(row.n) : 0.0;
    return row;
}

std::string path_mode(const PathLengthOptions& o) {
    return o.sampled ? "sampled:" + std::to_string(o.samples) : "exact";
}

// GC restricted to the names of `subset`, in GC order.
DependencyGraph restrict_to(const DependencyGraph& gc, const DependencyGraph& subset) {
    std::vector<NodeId> keep;
    keep.reserve(subset.node_count());
    for (const auto& info : subset.nodes()) {
        if (auto id = gc.find(info.name)) keep.push_back(*id);
    }
    return gc.induced(keep, Variant::GiantComponent);
}

} // namespace

PipelineResult run_pipeline(const RunConfig& config) {
    return run_pipeline(config, load_input(config));
}

PipelineResult run_pipeline(const RunConfig& config, LoadedInput input) {
    config.validate();
    PipelineResult out;
    EcosystemReport& rep = out.report;
    rep.tool_version = ECOGRAPH_VERSION;
    rep.input = std::move(input.info);
    out.records = std::move(input.records);
    out.build_log = std::move(input.build_log);
    out.full = std::move(input.full);

    auto& s = rep.settings;
    s.er_seed = config.structure.er_seed;
    s.er_trials = config.structure.er_trials;
    s.path_mode = path_mode(config.structure.path);
    s.path_seed = config.structure.path.seed;
    s.gamma_kind = config.structure.gamma_kind;
    s.thresholds = config.structure.thresholds;
    s.top = config.top;
    s.exclude_base = config.exclude_base;
    s.out_degree_threshold = config.out_degree_threshold;
    s.community_seed = config.community_seed;
    s.resolution = config.resolution;
    s.min_share = config.summary.min_share;
    s.top_words = config.summary.top_words;
    s.stability_runs = config.stability_runs;
    s.base = config.node_sets.base;
    s.recommended = config.node_sets.recommended;

    for (const auto& w : rep.input.parse_warnings) {
        rep.warnings.push_back("input line " + std::to_string(w.line) + ": " + w.message);
    }
    if (rep.input.stale) rep.warnings.push_back("snapshot served from a stale cache entry (network check failed)");
    if (out.full.node_count() == 0) {
        throw GraphError("graph-core", "input produced an empty graph", "check the input file and its format");
    }

    out.gc = giant_component(out.full);
    DependencyGraph tc = transitive_closure(out.gc, config.threads);
    DependencyGraph tcnb = remove_node_sets(tc, config.node_sets);

    rep.network = {network_row(out.full), network_row(out.gc), network_row(tc), network_row(tcnb)};
    {
        std::size_t removed = 0;
        for (const auto& info : tc.nodes()) removed += (info.is_base || info.is_recommended) ? 1 : 0;
        const std::size_t dropped = tc.node_count() - removed - tcnb.node_count();
        rep.warnings.push_back("TCNB: removed " + std::to_string(removed) +
                               " base/recommended packages, then kept the largest weakly connected component (" +
                               std::to_string(dropped) + " disconnected packages dropped); this re-extraction "
                               "step is an inference, not a documented rule");
    }

    auto variant_graph = [&](Variant v) -> const DependencyGraph& {
        switch (v) {
        case Variant::Full: return out.full;
        case Variant::GiantComponent: return out.gc;
        case Variant::TransitiveClosure: return tc;
        case Variant::ClosureNoBase: return tcnb;
        }
        return out.gc;
    };

    if (config.run_structure) {
        StructureOptions opts = config.structure;
        opts.threads = config.threads;
        opts.path.threads = config.threads;
        for (auto v : config.structure_variants) {
            const auto& g = variant_graph(v);
            if (g.node_count() < 2) {
                rep.warnings.push_back(std::string(to_string(v)) +
                                       " has fewer than 2 nodes; structure metrics skipped");
                continue;
            }
            auto r = structure_report(g, opts);
            if (config.strict_fit && !r.gamma_fit()) {
                throw FitError(std::string(to_string(v)) + ": no power-law fit for the " +
                                   std::string(to_string(opts.gamma_kind)) + " degree distribution" +
                                   (r.fit_errors.empty() ? "" : " (" + r.fit_errors.front() + ")"),
                               "drop --strict-fit to report the other metrics anyway");
            }
            for (const auto& w : r.warnings) rep.warnings.push_back(std::string(to_string(v)) + ": " + w);
            for (const auto& w : r.fit_errors) rep.warnings.push_back(std::string(to_string(v)) + ": " + w);
            rep.structure.push_back(std::move(r));
        }
        if (!rep.structure.empty()) {
            rep.warnings.push_back("nd is this tool's own evaluation of exp(-(1/2)(1 - 1/(gamma - 1))<k>) from each "
                                   "variant's fitted gamma and mean degree; published nd figures with unstated "
                                   "inputs are not comparable");
        }
        DistributionSection d;
        d.variant = Variant::GiantComponent;
        d.total = degree_distribution(out.gc, DegreeKind::Total).points;
        d.in = degree_distribution(out.gc, DegreeKind::In).points;
        d.out = degree_distribution(out.gc, DegreeKind::Out).points;
        rep.distributions = std::move(d);
    }

    std::optional<DependencyGraph> gc_nb;
    auto gc_without_base = [&]() -> const DependencyGraph& {
        if (!gc_nb) gc_nb = restrict_to(out.gc, tcnb);
        return *gc_nb;
    };

    if (config.run_nodes) {
        const NodeSetConfig* exclude = config.exclude_base ? &config.node_sets : nullptr;
        NodeScores tc_scores;
        tc_scores.variant = Variant::TransitiveClosure;
        tc_scores.rows = vulnerability_table(out.gc, tc);
        tc_scores.influential = top_influential(tc_scores.rows, config.top, exclude);
        tc_scores.heavy = heavy_dependents(tc_scores.rows, config.out_degree_threshold);
        rep.nodes.push_back(std::move(tc_scores));

        NodeScores nb_scores;
        nb_scores.variant = Variant::ClosureNoBase;
        nb_scores.rows = vulnerability_table(gc_without_base(), tcnb);
        nb_scores.influential = top_influential(nb_scores.rows, config.top, exclude);
        nb_scores.heavy = heavy_dependents(nb_scores.rows, config.out_degree_threshold);
        rep.nodes.push_back(std::move(nb_scores));
    }

    if (config.run_communities) {
        const Variant v = config.community_variant;
        const DependencyGraph* direct = &out.gc;
        const DependencyGraph* closed = &tc;
        switch (v) {
        case Variant::Full:
            direct = &out.full;
            closed = nullptr;
            rep.warnings.push_back("communities on FULL: critical packages ranked by direct in-degree");
            break;
        case Variant::GiantComponent:
        case Variant::TransitiveClosure: break;
        case Variant::ClosureNoBase:
            direct = &gc_without_base();
            closed = &tcnb;
            break;
        }
        const DependencyGraph& target = variant_graph(v);
        const UndirectedGraph ug = undirected_projection(target);
        CommunityPartition partition = louvain(ug, config.community_seed, config.resolution);

        const Stopwords stopwords = config.stopwords_path ? Stopwords::from_file(*config.stopwords_path)
                                                          : Stopwords::defaults(true, config.stopwords_exclude_data);
        CommunitySection c;
        c.variant = v;
        c.seed = partition.seed;
        c.resolution = partition.resolution;
        c.count = partition.community_count;
        c.modularity = partition.modularity;
        c.levels = partition.levels;
        c.sizes = partition.sizes();
        c.summaries = summarize_communities(partition, *direct, closed, out.records, stopwords, config.summary);
        if (config.stability_runs > 0) {
            std::vector<std::uint64_t> seeds(config.stability_runs);
            for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = config.community_seed + i;
            c.stability = louvain_stability(ug, seeds, config.resolution, config.threads);
        }
        if (out.records.empty()) rep.warnings.push_back("no package descriptions available; keywords are empty");
        rep.communities = std::move(c);
        out.community_graph = target;
        out.assignment = std::move(partition.assignment);
    }

    if (!config.output_dir.empty()) emit_tables(out, config.output_dir, config.write_tsv, config.write_json);
    return out;
}

// ---------------------------------------------------------------- JSON

namespace {

// Non-finite numbers have no JSON form; they travel as strings.
json num(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double get_num(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }
    return j.get<double>();
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

Variant get_variant(const json& j) {
    auto v = variant_from_string(j.get<std::string>());
    if (!v) throw ParseError("unknown variant '" + j.get<std::string>() + "' in report", 0);
    return *v;
}

DegreeKind get_kind(const json& j) {
    const auto s = j.get<std::string>();
    if (s == "in") return DegreeKind::In;
    if (s == "out") return DegreeKind::Out;
    return DegreeKind::Total;
}

json fit_json(const std::optional<PowerLawFit>& f) {
    if (!f) return nullptr;
    return {{"gamma", f->gamma},          {"xmin", f->xmin},
            {"ks", f->ks},                {"n_tail", f->n_tail},
            {"gamma_approx", num(f->gamma_approx)}, {"loglog_slope", num(f->loglog_slope)}};
}

std::optional<PowerLawFit> fit_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    PowerLawFit f;
    f.gamma = j.at("gamma").get<double>();
    f.xmin = j.at("xmin").get<std::uint64_t>();
    f.ks = j.at("ks").get<double>();
    f.n_tail = j.at("n_tail").get<std::size_t>();
    f.gamma_approx = get_num(j.at("gamma_approx"));
    f.loglog_slope = get_num(j.at("loglog_slope"));
    return f;
}

json points_json(const std::vector<DegreePoint>& pts) {
    json a = json::array();
    for (const auto& p : pts) a.push_back({{"k", p.k}, {"pdf", p.pdf}, {"ccdf", p.ccdf}});
    return a;
}

std::vector<DegreePoint> points_from(const json& a) {
    std::vector<DegreePoint> out;
    for (const auto& p : a) out.push_back({p.at("k").get<std::uint64_t>(), p.at("pdf").get<double>(),
                                          p.at("ccdf").get<double>()});
    return out;
}

json structure_json(const StructureReport& r) {
    return {
        {"variant", to_string(r.variant)},
        {"n", r.n},
        {"e", r.e},
        {"avg_degree", r.avg_degree},
        {"avg_in_degree", r.avg_in_degree},
        {"avg_out_degree", r.avg_out_degree},
        {"gamma_kind", to_string(r.gamma_kind)},
        {"fit_total", fit_json(r.fit_total)},
        {"fit_in", fit_json(r.fit_in)},
        {"fit_out", fit_json(r.fit_out)},
        {"fit_errors", r.fit_errors},
        {"clustering", r.clustering},
        {"clustering_er", r.clustering_er},
        {"clustering_analytic", r.clustering_analytic},
        {"path", {{"mean", r.path.mean}, {"std_error", r.path.std_error}, {"sampled", r.path.sampled},
                  {"sources", r.path.sources}}},
        {"path_er", opt(r.path_er)},
        {"density", r.density},
        {"driver_fraction", r.driver_fraction},
        {"driver_count", r.driver_count},
        {"small_world", opt(r.small_world)},
        {"clustering_ratio", num(r.clustering_ratio)},
        {"path_ratio", opt(r.path_ratio)},
        {"thresholds", {{"clustering_factor", r.thresholds.clustering_factor},
                        {"path_factor", r.thresholds.path_factor}}},
        {"er_seed", r.er_seed},
        {"er_trials", r.er_trials},
        {"path_seed", r.path_seed},
        {"max_in_degree", r.max_in_degree},
        {"max_out_degree", r.max_out_degree},
        {"warnings", r.warnings},
    };
}

StructureReport structure_from(const json& j) {
    StructureReport r;
    r.variant = get_variant(j.at("variant"));
    r.n = j.at("n").get<std::size_t>();
    r.e = j.at("e").get<std::size_t>();
    r.avg_degree = j.at("avg_degree").get<double>();
    r.avg_in_degree = j.at("avg_in_degree").get<double>();
    r.avg_out_degree = j.at("avg_out_degree").get<double>();
    r.gamma_kind = get_kind(j.at("gamma_kind"));
    r.fit_total = fit_from(j.at("fit_total"));
    r.fit_in = fit_from(j.at("fit_in"));
    r.fit_out = fit_from(j.at("fit_out"));
    r.fit_errors = j.at("fit_errors").get<std::vector<std::string>>();
    r.clustering = j.at("clustering").get<double>();
    r.clustering_er = j.at("clustering_er").get<double>();
    r.clustering_analytic = j.at("clustering_analytic").get<double>();
    const auto& p = j.at("path");
    r.path = {p.at("mean").get<double>(), p.at("std_error").get<double>(), p.at("sampled").get<bool>(),
              p.at("sources").get<std::size_t>()};
    if (!j.at("path_er").is_null()) r.path_er = j.at("path_er").get<double>();
    r.density = j.at("density").get<double>();
    r.driver_fraction = j.at("driver_fraction").get<double>();
    r.driver_count = j.at("driver_count").get<std::size_t>();
    if (!j.at("small_world").is_null()) r.small_world = j.at("small_world").get<bool>();
    r.clustering_ratio = get_num(j.at("clustering_ratio"));
    if (!j.at("path_ratio").is_null()) r.path_ratio = j.at("path_ratio").get<double>();
    r.thresholds = {j.at("thresholds").at("clustering_factor").get<double>(),
                    j.at("thresholds").at("path_factor").get<double>()};
    r.er_seed = j.at("er_seed").get<std::uint64_t>();
    r.er_trials = j.at("er_trials").get<std::size_t>();
    r.path_seed = j.at("path_seed").get<std::uint64_t>();
    r.max_in_degree = j.at("max_in_degree").get<std::size_t>();
    r.max_out_degree = j.at("max_out_degree").get<std::size_t>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

json row_json(const NodeScoreRow& r) {
    return {{"package", r.package},
            {"dd", r.dd},
            {"td", r.td},
            {"centrality", r.centrality},
            {"vulnerability", r.vulnerability},
            {"out_direct", r.out_direct},
            {"out_transitive", r.out_transitive},
            {"inverse_vulnerability", r.inverse_vulnerability},
            {"is_base", r.is_base},
            {"is_recommended", r.is_recommended}};
}

NodeScoreRow row_from(const json& j) {
    NodeScoreRow r;
    r.package = j.at("package").get<std::string>();
    r.dd = j.at("dd").get<std::size_t>();
    r.td = j.at("td").get<std::size_t>();
    r.centrality = j.at("centrality").get<double>();
    r.vulnerability = j.at("vulnerability").get<double>();
    r.out_direct = j.at("out_direct").get<std::size_t>();
    r.out_transitive = j.at("out_transitive").get<std::size_t>();
    r.inverse_vulnerability = j.at("inverse_vulnerability").get<double>();
    r.is_base = j.at("is_base").get<bool>();
    r.is_recommended = j.at("is_recommended").get<bool>();
    return r;
}

json rows_json(const std::vector<NodeScoreRow>& rows) {
    json a = json::array();
    for (const auto& r : rows) a.push_back(row_json(r));
    return a;
}

std::vector<NodeScoreRow> rows_from(const json& a) {
    std::vector<NodeScoreRow> out;
    for (const auto& r : a) out.push_back(row_from(r));
    return out;
}

json summary_json(const CommunitySummary& s) {
    return {{"id", s.id},
            {"other", s.other},
            {"size", s.size},
            {"share", s.share},
            {"sample_packages", s.sample_packages},
            {"critical_packages", s.critical_packages},
            {"keywords", s.keywords}};
}

CommunitySummary summary_from(const json& j) {
    CommunitySummary s;
    s.id = j.at("id").get<std::uint32_t>();
    s.other = j.at("other").get<bool>();
    s.size = j.at("size").get<std::size_t>();
    s.share = j.at("share").get<double>();
    s.sample_packages = j.at("sample_packages").get<std::vector<std::string>>();
    s.critical_packages = j.at("critical_packages").get<std::vector<std::string>>();
    s.keywords = j.at("keywords").get<std::vector<std::string>>();
    return s;
}

} // namespace

std::string report_to_json(const EcosystemReport& rep) {
    json j;
    j["tool"] = {{"name", "ecograph"}, {"version", rep.tool_version}};

    json warnings = json::array();
    for (const auto& w : rep.input.parse_warnings) warnings.push_back({{"line", w.line}, {"message", w.message}});
    j["input"] = {{"source", rep.input.source},   {"format", rep.input.format},
                  {"checksum", rep.input.checksum}, {"captured_at", rep.input.captured_at},
                  {"stale", rep.input.stale},     {"from_cache", rep.input.from_cache},
                  {"records", rep.input.records}, {"parse_warnings", warnings}};

    const auto& s = rep.settings;
    j["settings"] = {{"er_seed", s.er_seed},
                     {"er_trials", s.er_trials},
                     {"path_mode", s.path_mode},
                     {"path_seed", s.path_seed},
                     {"gamma_kind", to_string(s.gamma_kind)},
                     {"thresholds", {{"clustering_factor", s.thresholds.clustering_factor},
                                     {"path_factor", s.thresholds.path_factor}}},
                     {"top", s.top},
                     {"exclude_base", s.exclude_base},
                     {"out_degree_threshold", s.out_degree_threshold},
                     {"community_seed", s.community_seed},
                     {"resolution", s.resolution},
                     {"min_share", s.min_share},
                     {"top_words", s.top_words},
                     {"stability_runs", s.stability_runs},
                     {"base", s.base},
                     {"recommended", s.recommended}};

    j["network"] = json::array();
    for (const auto& r : rep.network) {
        j["network"].push_back({{"variant", to_string(r.variant)}, {"n", r.n}, {"e", r.e},
                                {"avg_degree", r.avg_degree}});
    }
    j["structure"] = json::array();
    for (const auto& r : rep.structure) j["structure"].push_back(structure_json(r));

    if (rep.distributions) {
        const auto& d = *rep.distributions;
        j["degree_distribution"] = {{"variant", to_string(d.variant)},
                                    {"total", points_json(d.total)},
                                    {"in", points_json(d.in)},
                                    {"out", points_json(d.out)}};
    } else {
        j["degree_distribution"] = nullptr;
    }

    j["nodes"] = json::array();
    for (const auto& n : rep.nodes) {
        j["nodes"].push_back({{"variant", to_string(n.variant)},
                              {"rows", rows_json(n.rows)},
                              {"influential", rows_json(n.influential)},
                              {"heavy", rows_json(n.heavy)}});
    }

    if (rep.communities) {
        const auto& c = *rep.communities;
        json sums = json::array();
        for (const auto& x : c.summaries) sums.push_back(summary_json(x));
        json stab = nullptr;
        if (c.stability) {
            json hist = json::array();
            for (const auto& [count, runs] : c.stability->count_histogram) {
                hist.push_back({{"communities", count}, {"runs", runs}});
            }
            stab = {{"seeds", c.stability->seeds},
                    {"community_counts", c.stability->community_counts},
                    {"modularities", c.stability->modularities},
                    {"histogram", hist}};
        }
        j["communities"] = {{"variant", to_string(c.variant)},
                            {"seed", c.seed},
                            {"resolution", c.resolution},
                            {"count", c.count},
                            {"modularity", c.modularity},
                            {"levels", c.levels},
                            {"sizes", c.sizes},
                            {"summaries", sums},
                            {"stability", stab}};
    } else {
        j["communities"] = nullptr;
    }
    j["warnings"] = rep.warnings;
    return j.dump(2) + "\n";
}

EcosystemReport report_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what(), e.byte);
    }
    try {
        EcosystemReport rep;
        rep.tool_version = j.at("tool").at("version").get<std::string>();
        const auto& in = j.at("input");
        rep.input.source = in.at("source").get<std::string>();
        rep.input.format = in.at("format").get<std::string>();
        rep.input.checksum = in.at("checksum").get<std::string>();
        rep.input.captured_at = in.at("captured_at").get<std::string>();
        rep.input.stale = in.at("stale").get<bool>();
        rep.input.from_cache = in.at("from_cache").get<bool>();
        rep.input.records = in.at("records").get<std::size_t>();
        for (const auto& w : in.at("parse_warnings")) {
            rep.input.parse_warnings.push_back({w.at("line").get<std::size_t>(), w.at("message").get<std::string>()});
        }

        const auto& s = j.at("settings");
        auto& st = rep.settings;
        st.er_seed = s.at("er_seed").get<std::uint64_t>();
        st.er_trials = s.at("er_trials").get<std::size_t>();
        st.path_mode = s.at("path_mode").get<std::string>();
        st.path_seed = s.at("path_seed").get<std::uint64_t>();
        st.gamma_kind = get_kind(s.at("gamma_kind"));
        st.thresholds = {s.at("thresholds").at("clustering_factor").get<double>(),
                         s.at("thresholds").at("path_factor").get<double>()};
        st.top = s.at("top").get<std::size_t>();
        st.exclude_base = s.at("exclude_base").get<bool>();
        st.out_degree_threshold = s.at("out_degree_threshold").get<std::size_t>();
        st.community_seed = s.at("community_seed").get<std::uint64_t>();
        st.resolution = s.at("resolution").get<double>();
        st.min_share = s.at("min_share").get<double>();
        st.top_words = s.at("top_words").get<std::size_t>();
        st.stability_runs = s.at("stability_runs").get<std::size_t>();
        st.base = s.at("base").get<std::vector<std::string>>();
        st.recommended = s.at("recommended").get<std::vector<std::string>>();

        for (const auto& r : j.at("network")) {
            rep.network.push_back({get_variant(r.at("variant")), r.at("n").get<std::size_t>(),
                                   r.at("e").get<std::size_t>(), r.at("avg_degree").get<double>()});
        }
        for (const auto& r : j.at("structure")) rep.structure.push_back(structure_from(r));
        if (const auto& d = j.at("degree_distribution"); !d.is_null()) {
            rep.distributions = DistributionSection{get_variant(d.at("variant")), points_from(d.at("total")),
                                                    points_from(d.at("in")), points_from(d.at("out"))};
        }
        for (const auto& n : j.at("nodes")) {
            rep.nodes.push_back({get_variant(n.at("variant")), rows_from(n.at("rows")),
                                 rows_from(n.at("influential")), rows_from(n.at("heavy"))});
        }
        if (const auto& c = j.at("communities"); !c.is_null()) {
            CommunitySection sec;
            sec.variant = get_variant(c.at("variant"));
            sec.seed = c.at("seed").get<std::uint64_t>();
            sec.resolution = c.at("resolution").get<double>();
            sec.count = c.at("count").get<std::size_t>();
            sec.modularity = c.at("modularity").get<double>();
            sec.levels = c.at("levels").get<std::vector<double>>();
            sec.sizes = c.at("sizes").get<std::vector<std::size_t>>();
            for (const auto& x : c.at("summaries")) sec.summaries.push_back(summary_from(x));
            if (const auto& st2 = c.at("stability"); !st2.is_null()) {
                StabilityReport sr;
                sr.seeds = st2.at("seeds").get<std::vector<std::uint64_t>>();
                sr.community_counts = st2.at("community_counts").get<std::vector<std::size_t>>();
                sr.modularities = st2.at("modularities").get<std::vector<double>>();
                for (const auto& h : st2.at("histogram")) {
                    sr.count_histogram[h.at("communities").get<std::size_t>()] = h.at("runs").get<std::size_t>();
                }
                sec.stability = std::move(sr);
            }
            rep.communities = std::move(sec);
        }
        rep.warnings = j.at("warnings").get<std::vector<std::string>>();
        return rep;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what(), 0);
    }
}

// ---------------------------------------------------------------- tables

namespace {

std::string fixed(double x, int digits) {
    if (!std::isfinite(x)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string general(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cli-report", "cannot write " + path.string(), "check the output directory permissions");
    f << text;
    if (!f.flush()) throw IoError("cli-report", "write failed for " + path.string());
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

std::string degree_tsv(const std::vector<DegreePoint>& pts) {
    std::string out = "k\tpdf\tccdf\n";
    for (const auto& p : pts) out += std::to_string(p.k) + '\t' + general(p.pdf) + '\t' + general(p.ccdf) + '\n';
    return out;
}

} // namespace

void emit_tables(const PipelineResult& result, const fs::path& dir, bool tsv, bool json_out) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cli-report", "cannot create output directory " + dir.string(), ec.message());
    }
    const auto& rep = result.report;

    if (tsv) {
        std::string net = "variant\tN\tE\tk\n";
        for (const auto& r : rep.network) {
            net += std::string(to_string(r.variant)) + '\t' + std::to_string(r.n) + '\t' + std::to_string(r.e) +
                   '\t' + fixed(r.avg_degree, 3) + '\n';
        }
        write_file(dir / "network.tsv", net);

        std::string st = "variant\tgamma\tC\tC_er\tl\tl_er\tD\tnd\n";
        for (const auto& r : rep.structure) {
            const auto& fit = r.gamma_fit();
            st += std::string(to_string(r.variant)) + '\t' + (fit ? fixed(fit->gamma, 3) : "NA") + '\t' +
                  fixed(r.clustering, 4) + '\t' + fixed(r.clustering_er, 4) + '\t' + fixed(r.path.mean, 2) + '\t' +
                  (r.path_er ? fixed(*r.path_er, 2) : "NA") + '\t' + general(r.density) + '\t' +
                  fixed(100.0 * r.driver_fraction, 1) + '\n';
        }
        write_file(dir / "structure.tsv", st);

        std::string inf = "variant\trank\tpackage\tDD\tTD\tDC\tv\n";
        std::string heavy = "variant\tpackage\timports\ttransitive\tinverse_v\n";
        for (const auto& n : rep.nodes) {
            const std::string v{to_string(n.variant)};
            for (std::size_t i = 0; i < n.influential.size(); ++i) {
                const auto& r = n.influential[i];
                inf += v + '\t' + std::to_string(i + 1) + '\t' + r.package + '\t' + std::to_string(r.dd) + '\t' +
                       std::to_string(r.td) + '\t' + fixed(r.centrality, 4) + '\t' + fixed(100.0 * r.vulnerability, 1) +
                       '\n';
            }
            for (const auto& r : n.heavy) {
                heavy += v + '\t' + r.package + '\t' + std::to_string(r.out_direct) + '\t' +
                         std::to_string(r.out_transitive) + '\t' + fixed(100.0 * r.inverse_vulnerability, 2) + '\n';
            }
        }
        write_file(dir / "influential.tsv", inf);
        write_file(dir / "heavy.tsv", heavy);

        if (rep.communities) {
            std::string cm = "community\tsize\tshare\tsample_packages\tcritical_packages\tkeywords\n";
            for (const auto& s : rep.communities->summaries) {
                cm += (s.other ? std::string("other") : std::to_string(s.id)) + '\t' + std::to_string(s.size) + '\t' +
                      fixed(100.0 * s.share, 1) + '\t' + join(s.sample_packages, ",") + '\t' +
                      join(s.critical_packages, ",") + '\t' + join(s.keywords, ",") + '\n';
            }
            write_file(dir / "communities.tsv", cm);
        }
        if (rep.distributions) {
            write_file(dir / "degree_total.tsv", degree_tsv(rep.distributions->total));
            write_file(dir / "degree_in.tsv", degree_tsv(rep.distributions->in));
            write_file(dir / "degree_out.tsv", degree_tsv(rep.distributions->out));
        }
    }

    // Graph exports are always written so later stages can resume from them.
    {
        std::ostringstream edges;
        write_edges_csv(edges, result.full);
        write_file(dir / "edges.csv", edges.str());

        std::ostringstream nodes;
        if (result.community_graph) {
            std::vector<std::uint32_t> column(result.full.node_count(), kNoCommunity);
            const auto& cg = *result.community_graph;
            for (NodeId i = 0; i < cg.node_count(); ++i) {
                if (auto id = result.full.find(cg.node(i).name)) column[*id] = result.assignment[i];
            }
            std::string pcsv = "package,community\n";
            for (NodeId i = 0; i < cg.node_count(); ++i) {
                pcsv += csv_field(cg.node(i).name) + ',' + std::to_string(result.assignment[i]) + '\n';
            }
            write_file(dir / "partition.csv", pcsv);
            write_nodes_csv(nodes, result.full, std::span<const std::uint32_t>{column});
        } else {
            write_nodes_csv(nodes, result.full);
        }
        write_file(dir / "nodes.csv", nodes.str());
        write_file(dir / "build.log", result.build_log.to_text());
    }

    if (json_out) write_file(dir / "report.json", report_to_json(rep));
}

} // namespace ecograph
