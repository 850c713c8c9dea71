// Python bindings for the ecograph core.
#include "ecograph/community.hpp"
#include "ecograph/error.hpp"
#include "ecograph/graph.hpp"
#include "ecograph/graph_io.hpp"
#include "ecograph/ingest.hpp"
#include "ecograph/node_metrics.hpp"
#include "ecograph/pipeline.hpp"
#include "ecograph/structure.hpp"

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace ecograph;

namespace {

PyObject* g_error = nullptr;
PyObject* g_parse = nullptr;
PyObject* g_graph = nullptr;
PyObject* g_fit = nullptr;
PyObject* g_io = nullptr;

PyObject* new_exception(py::module_& m, const char* name, PyObject* base) {
    std::string qualified = std::string("ecograph.") + name;
    PyObject* type = PyErr_NewException(qualified.c_str(), base, nullptr);
    if (!type) throw py::error_already_set();
    m.add_object(name, py::handle(type));
    return type;
}

void raise(const Error& e) {
    PyObject* type = g_error;
    switch (e.kind()) {
    case ErrorKind::Parse: type = g_parse; break;
    case ErrorKind::Graph: type = g_graph; break;
    case ErrorKind::Fit: type = g_fit; break;
    case ErrorKind::Io: type = g_io; break;
    }
    py::object inst = py::reinterpret_borrow<py::object>(type)(e.what());
    inst.attr("module") = e.module();
    inst.attr("hint") = e.hint();
    inst.attr("exit_code") = e.exit_code();
    PyErr_SetObject(type, inst.ptr());
}

NodeSetConfig node_sets(std::optional<std::vector<std::string>> base,
                        std::optional<std::vector<std::string>> recommended) {
    NodeSetConfig c = NodeSetConfig::defaults();
    if (base) c.base = std::move(*base);
    if (recommended) c.recommended = std::move(*recommended);
    c.validate();
    return c;
}

template <class E>
E parse_enum(const std::string& text, std::optional<E> (*from)(std::string_view), const char* what) {
    auto v = from(text);
    if (!v) throw Error(ErrorKind::Parse, "python", std::string("unknown ") + what + " '" + text + "'");
    return *v;
}

std::optional<DegreeKind> kind_from_string(std::string_view s) {
    if (s == "total") return DegreeKind::Total;
    if (s == "in") return DegreeKind::In;
    if (s == "out") return DegreeKind::Out;
    return std::nullopt;
}

py::object json_loads(const std::string& text) {
    return py::module_::import("json").attr("loads")(text);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dependency-network analysis of package registries";
    m.attr("__version__") = ECOGRAPH_VERSION;

    g_error = new_exception(m, "EcographError", PyExc_RuntimeError);
    g_parse = new_exception(m, "ParseError", g_error);
    g_graph = new_exception(m, "GraphError", g_error);
    g_fit = new_exception(m, "FitError", g_error);
    g_io = new_exception(m, "IoError", g_error);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            raise(e);
        }
    });

    // ------------------------------------------------------------ ingest

    py::class_<PackageRecord>(m, "PackageRecord")
        .def(py::init<>())
        .def(py::init([](std::string name, std::vector<std::string> imports, std::vector<std::string> depends,
                         std::string description) {
                 PackageRecord r;
                 r.name = std::move(name);
                 r.imports = std::move(imports);
                 r.depends = std::move(depends);
                 r.description = std::move(description);
                 return r;
             }),
             py::arg("name"), py::arg("imports") = std::vector<std::string>{},
             py::arg("depends") = std::vector<std::string>{}, py::arg("description") = "")
        .def_readwrite("name", &PackageRecord::name)
        .def_readwrite("version", &PackageRecord::version)
        .def_readwrite("imports", &PackageRecord::imports)
        .def_readwrite("depends", &PackageRecord::depends)
        .def_readwrite("suggests", &PackageRecord::suggests)
        .def_readwrite("description", &PackageRecord::description)
        .def_readwrite("published", &PackageRecord::published)
        .def_property(
            "origin", [](const PackageRecord& r) { return std::string(to_string(r.origin)); },
            [](PackageRecord& r, const std::string& s) { r.origin = origin_from_string(s); })
        .def(py::self == py::self)
        .def("__repr__", [](const PackageRecord& r) { return "<PackageRecord " + r.name + ">"; });

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("records", &Snapshot::records)
        .def_property_readonly("warnings",
                               [](const Snapshot& s) {
                                   std::vector<std::pair<std::size_t, std::string>> out;
                                   for (const auto& w : s.warnings) out.emplace_back(w.line, w.message);
                                   return out;
                               })
        .def_readonly("captured_at", &Snapshot::captured_at)
        .def_readonly("source", &Snapshot::source)
        .def_readonly("checksum", &Snapshot::checksum)
        .def_readonly("stale", &Snapshot::stale)
        .def_readonly("from_cache", &Snapshot::from_cache)
        .def_readonly("network_reads", &Snapshot::network_reads);

    m.def(
        "parse_dcf",
        [](py::bytes raw) {
            ParseResult r = parse_dcf(std::string(raw));
            std::vector<std::pair<std::size_t, std::string>> warnings;
            for (const auto& w : r.warnings) warnings.emplace_back(w.line, w.message);
            return py::make_tuple(r.records, warnings);
        },
        py::arg("raw"), "Parse PACKAGES bytes; returns (records, [(line, message), ...]).");
    m.def(
        "load_snapshot",
        [](const std::filesystem::path& path, const std::string& format) {
            return load_snapshot_file(path, parse_enum<InputFormat>(format, input_format_from_string, "format"));
        },
        py::arg("path"), py::arg("format") = "dcf");
    m.def("fetch_snapshot", &fetch_snapshot, py::arg("url"), py::arg("cache_dir"),
          py::call_guard<py::gil_scoped_release>());

    // ------------------------------------------------------------ graphs

    py::class_<DependencyGraph>(m, "Graph")
        .def(py::init([](const std::vector<std::string>& names,
                         const std::vector<std::pair<std::string, std::string>>& edges,
                         std::optional<std::vector<std::string>> base,
                         std::optional<std::vector<std::string>> recommended) {
                 const NodeSetConfig sets = node_sets(std::move(base), std::move(recommended));
                 std::vector<NodeInfo> nodes;
                 std::unordered_map<std::string, NodeId> index;
                 for (const auto& n : names) {
                     if (index.contains(n)) throw GraphError("python", "duplicate node '" + n + "'");
                     index.emplace(n, static_cast<NodeId>(nodes.size()));
                     NodeInfo info;
                     info.name = n;
                     info.is_base = sets.is_base(n);
                     info.is_recommended = sets.is_recommended(n);
                     nodes.push_back(std::move(info));
                 }
                 std::vector<Edge> out;
                 for (const auto& [s, t] : edges) {
                     auto a = index.find(s), b = index.find(t);
                     if (a == index.end() || b == index.end()) {
                         throw GraphError("python", "edge " + s + " -> " + t + " names an unknown node");
                     }
                     out.push_back({a->second, b->second});
                 }
                 return DependencyGraph(std::move(nodes), std::move(out), Variant::Full);
             }),
             py::arg("names"), py::arg("edges"), py::arg("base") = py::none(), py::arg("recommended") = py::none(),
             "Directed graph; an edge (a, b) means a depends on b.")
        .def_property_readonly("variant", [](const DependencyGraph& g) { return std::string(to_string(g.variant())); })
        .def("node_count", &DependencyGraph::node_count)
        .def("edge_count", &DependencyGraph::edge_count)
        .def("__len__", &DependencyGraph::node_count)
        .def("__contains__", [](const DependencyGraph& g, const std::string& n) { return g.find(n).has_value(); })
        .def("names",
             [](const DependencyGraph& g) {
                 std::vector<std::string> out;
                 for (const auto& n : g.nodes()) out.push_back(n.name);
                 return out;
             })
        .def("edges",
             [](const DependencyGraph& g) {
                 std::vector<std::pair<std::string, std::string>> out;
                 for (const auto& e : g.edges()) out.emplace_back(g.node(e.source).name, g.node(e.target).name);
                 return out;
             })
        .def("in_degree",
             [](const DependencyGraph& g, const std::string& n) {
                 auto id = g.find(n);
                 if (!id) throw py::key_error(n);
                 return g.in_degree(*id);
             })
        .def("out_degree",
             [](const DependencyGraph& g, const std::string& n) {
                 auto id = g.find(n);
                 if (!id) throw py::key_error(n);
                 return g.out_degree(*id);
             })
        .def("has_edge",
             [](const DependencyGraph& g, const std::string& a, const std::string& b) {
                 auto s = g.find(a), t = g.find(b);
                 return s && t && g.has_edge(*s, *t);
             })
        .def("degrees",
             [](const DependencyGraph& g, const std::string& kind) {
                 return degree_sequence(g, parse_enum<DegreeKind>(kind, kind_from_string, "degree kind"));
             },
             py::arg("kind") = "total")
        .def("__repr__", [](const DependencyGraph& g) {
            return "<Graph " + std::string(to_string(g.variant())) + " n=" + std::to_string(g.node_count()) +
                   " e=" + std::to_string(g.edge_count()) + ">";
        });

    m.def(
        "build_graph",
        [](const std::vector<PackageRecord>& records, std::optional<std::vector<std::string>> base,
           std::optional<std::vector<std::string>> recommended) {
            return build_graph(records, node_sets(std::move(base), std::move(recommended)));
        },
        py::arg("records"), py::arg("base") = py::none(), py::arg("recommended") = py::none());
    m.def("read_edges", [](const std::filesystem::path& edges, std::optional<std::filesystem::path> nodes) {
        return read_graph_csv_files(edges, nodes, NodeSetConfig::defaults());
    }, py::arg("edges"), py::arg("nodes") = py::none());
    m.def("giant_component", &giant_component, py::arg("graph"));
    m.def("transitive_closure", &transitive_closure, py::arg("graph"), py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("is_transitively_closed", &is_transitively_closed, py::arg("graph"));
    m.def(
        "remove_base",
        [](const DependencyGraph& closed, std::optional<std::vector<std::string>> base,
           std::optional<std::vector<std::string>> recommended) {
            return remove_node_sets(closed, node_sets(std::move(base), std::move(recommended)));
        },
        py::arg("closed"), py::arg("base") = py::none(), py::arg("recommended") = py::none());

    // ------------------------------------------------------------ structure

    py::class_<PowerLawFit>(m, "PowerLawFit")
        .def_readonly("gamma", &PowerLawFit::gamma)
        .def_readonly("xmin", &PowerLawFit::xmin)
        .def_readonly("ks", &PowerLawFit::ks)
        .def_readonly("n_tail", &PowerLawFit::n_tail)
        .def_readonly("gamma_approx", &PowerLawFit::gamma_approx)
        .def_readonly("loglog_slope", &PowerLawFit::loglog_slope)
        .def("__repr__", [](const PowerLawFit& f) {
            return "<PowerLawFit gamma=" + std::to_string(f.gamma) + " xmin=" + std::to_string(f.xmin) + ">";
        });
    m.def(
        "fit_power_law", [](const std::vector<std::uint64_t>& samples) { return fit_power_law(samples); },
        py::arg("samples"));

    py::class_<PathLength>(m, "PathLength")
        .def_readonly("mean", &PathLength::mean)
        .def_readonly("std_error", &PathLength::std_error)
        .def_readonly("sampled", &PathLength::sampled)
        .def_readonly("sources", &PathLength::sources);

    py::class_<StructureReport>(m, "StructureReport")
        .def_property_readonly("variant", [](const StructureReport& r) { return std::string(to_string(r.variant)); })
        .def_readonly("n", &StructureReport::n)
        .def_readonly("e", &StructureReport::e)
        .def_readonly("avg_degree", &StructureReport::avg_degree)
        .def_readonly("avg_in_degree", &StructureReport::avg_in_degree)
        .def_readonly("avg_out_degree", &StructureReport::avg_out_degree)
        .def_readonly("fit_total", &StructureReport::fit_total)
        .def_readonly("fit_in", &StructureReport::fit_in)
        .def_readonly("fit_out", &StructureReport::fit_out)
        .def_readonly("fit_errors", &StructureReport::fit_errors)
        .def_readonly("clustering", &StructureReport::clustering)
        .def_readonly("clustering_er", &StructureReport::clustering_er)
        .def_readonly("clustering_analytic", &StructureReport::clustering_analytic)
        .def_readonly("path", &StructureReport::path)
        .def_readonly("path_er", &StructureReport::path_er)
        .def_readonly("density", &StructureReport::density)
        .def_readonly("driver_fraction", &StructureReport::driver_fraction)
        .def_readonly("driver_count", &StructureReport::driver_count)
        .def_readonly("small_world", &StructureReport::small_world)
        .def_readonly("clustering_ratio", &StructureReport::clustering_ratio)
        .def_readonly("path_ratio", &StructureReport::path_ratio)
        .def_readonly("er_seed", &StructureReport::er_seed)
        .def_readonly("er_trials", &StructureReport::er_trials)
        .def_readonly("max_in_degree", &StructureReport::max_in_degree)
        .def_readonly("max_out_degree", &StructureReport::max_out_degree)
        .def_readonly("warnings", &StructureReport::warnings)
        .def_property_readonly("gamma", [](const StructureReport& r) -> std::optional<double> {
            const auto& f = r.gamma_fit();
            return f ? std::optional<double>(f->gamma) : std::nullopt;
        });

    m.def(
        "structure_report",
        [](const DependencyGraph& g, std::uint64_t seed, std::size_t er_trials, std::optional<std::size_t> samples,
           const std::string& gamma_kind, unsigned threads) {
            StructureOptions o;
            o.er_seed = seed;
            o.er_trials = er_trials;
            o.path.seed = seed;
            o.path.sampled = samples.has_value();
            if (samples) o.path.samples = *samples;
            o.path.threads = threads;
            o.threads = threads;
            o.gamma_kind = parse_enum<DegreeKind>(gamma_kind, kind_from_string, "degree kind");
            py::gil_scoped_release release;
            return structure_report(g, o);
        },
        py::arg("graph"), py::arg("seed") = 42, py::arg("er_trials") = 10, py::arg("samples") = py::none(),
        py::arg("gamma_kind") = "total", py::arg("threads") = 0,
        "Structure metrics for a connected variant; samples=M switches to sampled path lengths.");

    py::class_<ControllabilityEstimate>(m, "ControllabilityEstimate")
        .def_readonly("gamma", &ControllabilityEstimate::gamma)
        .def_readonly("avg_degree", &ControllabilityEstimate::avg_degree)
        .def_readonly("raw_fraction", &ControllabilityEstimate::raw_fraction)
        .def_readonly("fraction", &ControllabilityEstimate::fraction)
        .def_readonly("count", &ControllabilityEstimate::count)
        .def_readonly("clamped", &ControllabilityEstimate::clamped)
        .def_readonly("warning", &ControllabilityEstimate::warning);
    m.def("driver_nodes", &driver_nodes, py::arg("gamma"), py::arg("avg_degree"), py::arg("n"));

    // ------------------------------------------------------------ node scores

    py::class_<NodeScoreRow>(m, "NodeScore")
        .def_readonly("package", &NodeScoreRow::package)
        .def_readonly("dd", &NodeScoreRow::dd)
        .def_readonly("td", &NodeScoreRow::td)
        .def_readonly("centrality", &NodeScoreRow::centrality)
        .def_readonly("vulnerability", &NodeScoreRow::vulnerability)
        .def_readonly("out_direct", &NodeScoreRow::out_direct)
        .def_readonly("out_transitive", &NodeScoreRow::out_transitive)
        .def_readonly("inverse_vulnerability", &NodeScoreRow::inverse_vulnerability)
        .def_readonly("is_base", &NodeScoreRow::is_base)
        .def_readonly("is_recommended", &NodeScoreRow::is_recommended)
        .def("__repr__", [](const NodeScoreRow& r) {
            return "<NodeScore " + r.package + " v=" + std::to_string(r.vulnerability) + ">";
        });
    m.def("vulnerability_table", &vulnerability_table, py::arg("direct"), py::arg("closed"));
    m.def(
        "top_influential",
        [](const std::vector<NodeScoreRow>& rows, std::size_t k, bool exclude_base) {
            const NodeSetConfig sets = NodeSetConfig::defaults();
            return top_influential(rows, k, exclude_base ? &sets : nullptr);
        },
        py::arg("rows"), py::arg("k") = 10, py::arg("exclude_base") = false);
    m.def("heavy_dependents", &heavy_dependents, py::arg("rows"), py::arg("threshold") = 200);

    // ------------------------------------------------------------ communities

    py::class_<CommunityPartition>(m, "Partition")
        .def_readonly("assignment", &CommunityPartition::assignment)
        .def_readonly("community_count", &CommunityPartition::community_count)
        .def_readonly("modularity", &CommunityPartition::modularity)
        .def_readonly("seed", &CommunityPartition::seed)
        .def_readonly("resolution", &CommunityPartition::resolution)
        .def_readonly("levels", &CommunityPartition::levels)
        .def("sizes", &CommunityPartition::sizes);
    m.def(
        "louvain",
        [](const DependencyGraph& g, std::uint64_t seed, double resolution) {
            py::gil_scoped_release release;
            return louvain(undirected_projection(g), seed, resolution);
        },
        py::arg("graph"), py::arg("seed") = 1, py::arg("resolution") = 1.0,
        "Louvain on the undirected projection; assignment follows the graph's node order.");
    m.def(
        "modularity",
        [](const DependencyGraph& g, const std::vector<std::uint32_t>& assignment, double resolution) {
            return modularity(undirected_projection(g), assignment, resolution);
        },
        py::arg("graph"), py::arg("assignment"), py::arg("resolution") = 1.0);
    m.def("tokenize", &tokenize, py::arg("text"));

    // ------------------------------------------------------------ pipeline

    m.def(
        "run",
        [](std::optional<std::filesystem::path> input, std::optional<std::string> url,
           std::optional<std::string> input_format, std::optional<std::filesystem::path> nodes,
           std::optional<std::filesystem::path> metadata, std::filesystem::path cache_dir,
           std::optional<std::filesystem::path> out, std::uint64_t seed, std::size_t er_trials,
           std::optional<std::size_t> samples, const std::string& community_variant, double resolution,
           std::size_t stability_runs, std::size_t top, bool exclude_base, unsigned threads) {
            RunConfig c;
            c.input_path = std::move(input);
            c.url = std::move(url);
            c.cache_dir = std::move(cache_dir);
            if (input_format) {
                c.format = parse_enum<InputFormat>(*input_format, input_format_from_string, "format");
            } else if (c.input_path) {
                const auto ext = c.input_path->extension();
                c.format = ext == ".json" ? InputFormat::Json : ext == ".csv" ? InputFormat::Edges : InputFormat::Dcf;
            }
            c.nodes_path = std::move(nodes);
            if (metadata) {
                c.metadata_format = metadata->extension() == ".json" ? InputFormat::Json : InputFormat::Dcf;
                c.metadata_path = std::move(metadata);
            }
            if (out) c.output_dir = *out;
            c.set_seed(seed);
            c.structure.er_trials = er_trials;
            c.structure.path.sampled = samples.has_value();
            if (samples) c.structure.path.samples = *samples;
            c.community_variant = parse_enum<Variant>(community_variant, variant_from_string, "variant");
            c.resolution = resolution;
            c.stability_runs = stability_runs;
            c.top = top;
            c.exclude_base = exclude_base;
            c.threads = threads;
            std::string text;
            {
                py::gil_scoped_release release;
                text = report_to_json(run_pipeline(c).report);
            }
            return json_loads(text);
        },
        py::kw_only(), py::arg("input") = py::none(), py::arg("url") = py::none(),
        py::arg("input_format") = py::none(), py::arg("nodes") = py::none(), py::arg("metadata") = py::none(),
        py::arg("cache_dir") = std::filesystem::path(".ecograph-cache"), py::arg("out") = py::none(),
        py::arg("seed") = 42, py::arg("er_trials") = 10, py::arg("samples") = py::none(),
        py::arg("community_variant") = "GC", py::arg("resolution") = 1.0, py::arg("stability_runs") = 0,
        py::arg("top") = 10, py::arg("exclude_base") = false, py::arg("threads") = 0,
        "Full analysis; returns the report as the dict written to report.json.");
}
