#include "ecograph/ingest.hpp"

#include "ecograph/error.hpp"

#include <algorithm>
#include <unordered_set>

namespace ecograph {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\n'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending = false;
    for (char c : trim(s)) {
        if (is_space(c)) {
            pending = true;
            continue;
        }
        if (pending) out.push_back(' ');
        pending = false;
        out.push_back(c);
    }
    return out;
}

bool is_valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t extra = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
            extra = 3;
        } else {
            return false;
        }
        if (i + extra >= s.size()) return false;
        for (std::size_t k = 1; k <= extra; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
        }
        i += extra + 1;
    }
    return true;
}

std::string latin1_to_utf8(std::string_view s) {
    std::string out;
    out.reserve(s.size() + s.size() / 8);
    for (char ch : s) {
        auto c = static_cast<unsigned char>(ch);
        if (c < 0x80) {
            out.push_back(ch);
        } else {
            out.push_back(static_cast<char>(0xC0 | (c >> 6)));
            out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
        }
    }
    return out;
}

void check_text_bytes(std::string_view raw) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto c = static_cast<unsigned char>(raw[i]);
        if ((c < 0x20 && c != '\t' && c != '\n' && c != '\r' && c != '\f') || c == 0x7F) {
            throw ParseError("undecodable byte 0x" + std::string{"0123456789abcdef"[c >> 4]} +
                                 std::string{"0123456789abcdef"[c & 0xF]} + " at offset " + std::to_string(i),
                             i, "input must be a text DCF index; check that the file is not compressed");
        }
    }
}

struct Field {
    std::string key;
    std::string value;
};

struct Stanza {
    std::size_t first_line = 0;
    std::vector<Field> fields;
};

const Field* find_field(const Stanza& stanza, std::string_view key) {
    for (const auto& f : stanza.fields) {
        if (f.key == key) return &f;
    }
    return nullptr;
}

Origin origin_from_repository(std::string_view repo) {
    if (repo.empty() || repo == "CRAN") return Origin::MainRegistry;
    if (repo == "BioC" || repo == "Bioconductor" || repo == "bioconductor") return Origin::CompanionRegistry;
    return Origin::Unknown;
}

PackageRecord record_from_stanza(const Stanza& stanza, std::string name) {
    PackageRecord rec;
    rec.name = std::move(name);
    auto get = [&](std::string_view key) -> std::string_view {
        const Field* f = find_field(stanza, key);
        return f ? std::string_view{f->value} : std::string_view{};
    };
    rec.version = collapse_whitespace(get("Version"));
    rec.imports = split_dependency_field(get("Imports"), rec.name);
    rec.depends = split_dependency_field(get("Depends"), rec.name);
    rec.suggests = split_dependency_field(get("Suggests"), rec.name);
    if (const Field* d = find_field(stanza, "Description")) {
        rec.description = collapse_whitespace(d->value);
    } else if (const Field* t = find_field(stanza, "Title")) {
        rec.description = collapse_whitespace(t->value);
    }
    for (std::string_view key : {"Date/Publication", "Published"}) {
        if (const Field* p = find_field(stanza, key)) {
            auto v = collapse_whitespace(p->value);
            if (!v.empty()) {
                rec.published = std::move(v);
                break;
            }
        }
    }
    rec.origin = origin_from_repository(trim(get("Repository")));
    return rec;
}

} // namespace

std::string_view to_string(Origin origin) {
    switch (origin) {
    case Origin::MainRegistry: return "main-registry";
    case Origin::CompanionRegistry: return "companion-registry";
    case Origin::Unknown: return "unknown";
    }
    return "unknown";
}

Origin origin_from_string(std::string_view text) {
    if (text == "main-registry") return Origin::MainRegistry;
    if (text == "companion-registry") return Origin::CompanionRegistry;
    return Origin::Unknown;
}

std::vector<std::string> split_dependency_field(std::string_view value, std::string_view self) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        if (comma == std::string_view::npos) comma = value.size();
        std::string_view piece = value.substr(start, comma - start);
        start = comma + 1;

        // Drop "(>= 1.2)" style qualifiers, including an unterminated one.
        std::string cleaned;
        int depth = 0;
        for (char c : piece) {
            if (c == '(') {
                ++depth;
            } else if (c == ')') {
                if (depth > 0) --depth;
            } else if (depth == 0) {
                cleaned.push_back(c);
            }
        }
        std::string_view name = trim(cleaned);
        auto ws = std::find_if(name.begin(), name.end(), is_space);
        name = name.substr(0, static_cast<std::size_t>(ws - name.begin()));
        if (name.empty() || name == "R" || name == self) continue;
        std::string owned{name};
        if (seen.insert(owned).second) out.push_back(std::move(owned));
    }
    return out;
}

void deduplicate_records(ParseResult& result) {
    std::unordered_set<std::string> seen;
    std::vector<PackageRecord> kept;
    kept.reserve(result.records.size());
    for (auto& rec : result.records) {
        if (!seen.insert(rec.name).second) {
            result.warnings.push_back({0, "duplicate package '" + rec.name + "' ignored"});
            continue;
        }
        kept.push_back(std::move(rec));
    }
    result.records = std::move(kept);
}

ParseResult parse_dcf(std::string_view raw) {
    check_text_bytes(raw);

    ParseResult result;
    std::vector<Stanza> stanzas;
    Stanza current;
    bool in_stanza = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    std::size_t stanza_begin = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stanza_spans;

    auto flush = [&](std::size_t end) {
        if (in_stanza) {
            stanza_spans.emplace_back(stanza_begin, end);
            stanzas.push_back(std::move(current));
        }
        current = Stanza{};
        in_stanza = false;
    };

    while (pos < raw.size()) {
        std::size_t nl = raw.find('\n', pos);
        std::size_t end = nl == std::string_view::npos ? raw.size() : nl;
        std::string_view line = raw.substr(pos, end - pos);
        ++line_no;
        if (trim(line).empty()) {
            flush(pos);
        } else if (!in_stanza) {
            in_stanza = true;
            stanza_begin = pos;
            current.first_line = line_no;
        }
        pos = nl == std::string_view::npos ? raw.size() : nl + 1;
    }
    flush(raw.size());

    for (std::size_t s = 0; s < stanzas.size(); ++s) {
        auto [begin, end] = stanza_spans[s];
        std::string_view bytes = raw.substr(begin, end - begin);
        // Latin-1 fallback per stanza.
        std::string decoded = is_valid_utf8(bytes) ? std::string{bytes} : latin1_to_utf8(bytes);

        Stanza stanza;
        stanza.first_line = stanzas[s].first_line;
        std::size_t lp = 0;
        std::size_t ln = stanza.first_line;
        std::string_view text{decoded};
        while (lp < text.size()) {
            std::size_t nl = text.find('\n', lp);
            std::size_t le = nl == std::string_view::npos ? text.size() : nl;
            std::string_view line = text.substr(lp, le - lp);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (!trim(line).empty() && line.front() != '#') {
                if (is_space(line.front())) {
                    if (stanza.fields.empty()) {
                        result.warnings.push_back({ln, "continuation line without a field"});
                    } else {
                        auto& value = stanza.fields.back().value;
                        value.push_back('\n');
                        value.append(trim(line));
                    }
                } else {
                    std::size_t colon = line.find(':');
                    if (colon == std::string_view::npos || colon == 0) {
                        result.warnings.push_back({ln, "malformed field line ignored"});
                    } else {
                        stanza.fields.push_back(
                            {std::string{trim(line.substr(0, colon))}, std::string{trim(line.substr(colon + 1))}});
                    }
                }
            }
            ++ln;
            lp = nl == std::string_view::npos ? text.size() : nl + 1;
        }

        const Field* pkg = find_field(stanza, "Package");
        if (pkg == nullptr) {
            result.warnings.push_back({stanza.first_line, "stanza without Package field skipped"});
            continue;
        }
        std::string_view name = trim(pkg->value);
        if (name.empty() || std::any_of(name.begin(), name.end(), is_space)) {
            result.warnings.push_back({stanza.first_line, "invalid package name '" + std::string{name} + "' skipped"});
            continue;
        }
        result.records.push_back(record_from_stanza(stanza, std::string{name}));
    }
    deduplicate_records(result);
    return result;
}

std::string serialize_dcf(const std::vector<PackageRecord>& records) {
    std::string out;
    auto join = [](const std::vector<std::string>& items) {
        std::string s;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) s += ", ";
            s += items[i];
        }
        return s;
    };
    for (const auto& rec : records) {
        out += "Package: " + rec.name + "\n";
        if (!rec.version.empty()) out += "Version: " + rec.version + "\n";
        if (!rec.depends.empty()) out += "Depends: " + join(rec.depends) + "\n";
        if (!rec.imports.empty()) out += "Imports: " + join(rec.imports) + "\n";
        if (!rec.suggests.empty()) out += "Suggests: " + join(rec.suggests) + "\n";
        if (!rec.description.empty()) out += "Description: " + rec.description + "\n";
        if (rec.published) out += "Date/Publication: " + *rec.published + "\n";
        if (rec.origin == Origin::CompanionRegistry) out += "Repository: BioC\n";
        if (rec.origin == Origin::Unknown) out += "Repository: unknown\n";
        out += "\n";
    }
    return out;
}

} // namespace ecograph
