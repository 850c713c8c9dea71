#include "ecograph/ingest.hpp"

#include "ecograph/error.hpp"

#include <json.hpp>

#include <algorithm>

namespace ecograph {

namespace {

using nlohmann::json;

std::vector<std::string> dependency_list(const json& obj, const char* key, const std::string& self) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    std::string joined;
    if (it->is_string()) {
        joined = it->get<std::string>();
    } else if (it->is_array()) {
        for (const auto& item : *it) {
            if (!item.is_string()) continue;
            if (!joined.empty()) joined += ',';
            joined += item.get<std::string>();
        }
    }
    return split_dependency_field(joined, self);
}

std::string string_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) return {};
    return it->get<std::string>();
}

std::string collapse(std::string_view s) {
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
            pending = !out.empty();
            continue;
        }
        if (pending) out.push_back(' ');
        pending = false;
        out.push_back(c);
    }
    return out;
}

} // namespace

ParseResult parse_manifest_json(std::string_view raw) {
    json doc;
    try {
        doc = json::parse(raw.begin(), raw.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string{"invalid JSON manifest: "} + e.what(), e.byte,
                         "manifest must be a JSON array of package objects");
    }
    if (!doc.is_array()) {
        throw ParseError("JSON manifest top level must be an array", 0,
                         "wrap package objects in [ ... ]");
    }

    ParseResult result;
    std::size_t index = 0;
    for (const auto& entry : doc) {
        ++index;
        if (!entry.is_object()) {
            result.warnings.push_back({index, "manifest entry is not an object"});
            continue;
        }
        std::string name = string_field(entry, "name");
        if (name.empty() || std::any_of(name.begin(), name.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; })) {
            result.warnings.push_back({index, "manifest entry without a valid name skipped"});
            continue;
        }
        PackageRecord rec;
        rec.name = name;
        rec.version = collapse(string_field(entry, "version"));
        rec.imports = dependency_list(entry, "imports", name);
        rec.depends = dependency_list(entry, "depends", name);
        rec.suggests = dependency_list(entry, "suggests", name);
        rec.description = collapse(string_field(entry, "description"));
        if (auto p = collapse(string_field(entry, "published")); !p.empty()) rec.published = p;
        if (auto o = string_field(entry, "origin"); !o.empty()) rec.origin = origin_from_string(o);
        result.records.push_back(std::move(rec));
    }
    deduplicate_records(result);
    return result;
}

} // namespace ecograph
