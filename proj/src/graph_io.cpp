#include "ecograph/graph_io.hpp"

#include "ecograph/error.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

namespace ecograph {

namespace {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string{s};
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

bool parse_bool(std::string_view s) { return s == "1" || s == "true" || s == "TRUE"; }

bool getline_trimmed(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

} // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

void write_edges_csv(std::ostream& out, const DependencyGraph& g) {
    out << "source,target\n";
    for (const auto& e : g.edges()) {
        out << csv_field(g.node(e.source).name) << ',' << csv_field(g.node(e.target).name) << '\n';
    }
}

void write_nodes_csv(std::ostream& out, const DependencyGraph& g,
                     std::optional<std::span<const std::uint32_t>> community) {
    if (community && community->size() != g.node_count()) {
        throw GraphError("graph-core", "community column length does not match the node count");
    }
    out << "name,is_base,is_recommended,origin" << (community ? ",community" : "") << '\n';
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const auto& n = g.node(i);
        out << csv_field(n.name) << ',' << (n.is_base ? 1 : 0) << ',' << (n.is_recommended ? 1 : 0) << ','
            << to_string(n.origin);
        if (community) {
            out << ',';
            if ((*community)[i] != kNoCommunity) out << (*community)[i];
        }
        out << '\n';
    }
}

DependencyGraph read_graph_csv(std::istream& edges, std::istream* nodes, const NodeSetConfig& config) {
    std::vector<NodeInfo> infos;
    std::unordered_map<std::string, NodeId> index;
    std::string line;
    std::size_t line_no = 0;

    if (nodes) {
        if (!getline_trimmed(*nodes, line)) throw ParseError("node table is empty", 0, "expected a header line");
        auto header = split_csv_line(line);
        if (header.size() < 4 || header[0] != "name") {
            throw ParseError("node table header must start with name,is_base,is_recommended,origin", 0);
        }
        line_no = 1;
        while (getline_trimmed(*nodes, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto f = split_csv_line(line);
            if (f.size() < 4 || f[0].empty()) {
                throw ParseError("malformed node table line " + std::to_string(line_no), line_no);
            }
            if (index.contains(f[0])) continue;
            index.emplace(f[0], static_cast<NodeId>(infos.size()));
            infos.push_back({f[0], parse_bool(f[1]), parse_bool(f[2]), origin_from_string(f[3]),
                             origin_from_string(f[3]) == Origin::Unknown});
        }
    }

    auto intern = [&](const std::string& name) {
        auto [it, inserted] = index.emplace(name, static_cast<NodeId>(infos.size()));
        if (inserted) {
            infos.push_back({name, config.is_base(name), config.is_recommended(name),
                             nodes ? Origin::Unknown : Origin::MainRegistry, nodes != nullptr});
        }
        return it->second;
    };

    if (!getline_trimmed(edges, line)) throw ParseError("edge list is empty", 0, "expected a source,target header");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "source" || header[1] != "target") {
        throw ParseError("edge list header must be source,target", 0);
    }
    std::vector<Edge> list;
    line_no = 1;
    while (getline_trimmed(edges, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() < 2 || f[0].empty() || f[1].empty()) {
            throw ParseError("malformed edge on line " + std::to_string(line_no), line_no);
        }
        NodeId s = intern(f[0]);
        NodeId t = intern(f[1]);
        list.push_back({s, t});
    }
    return DependencyGraph(std::move(infos), std::move(list), Variant::Full);
}

DependencyGraph read_graph_csv_files(const std::filesystem::path& edges_path,
                                     const std::optional<std::filesystem::path>& nodes_path,
                                     const NodeSetConfig& config) {
    std::ifstream edges(edges_path);
    if (!edges) throw IoError("graph-core", "cannot read " + edges_path.string());
    if (!nodes_path) return read_graph_csv(edges, nullptr, config);
    std::ifstream nodes(*nodes_path);
    if (!nodes) throw IoError("graph-core", "cannot read " + nodes_path->string());
    return read_graph_csv(edges, &nodes, config);
}

} // namespace ecograph
