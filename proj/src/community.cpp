#include "ecograph/community.hpp"

#include "ecograph/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace ecograph {

namespace detail {
extern const char* const kEnglishStopwords;
}

namespace {

void add_lines(std::unordered_set<std::string>& out, std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (auto& token : tokenize(line)) out.insert(std::move(token));
    }
}

// Ranks members by in-degree on `g` (ties by name) and keeps the first k.
std::vector<std::string> top_by_in_degree(const std::vector<NodeId>& members, const DependencyGraph& g, std::size_t k,
                                          bool skip_core) {
    std::vector<NodeId> pool;
    for (NodeId u : members) {
        const auto& info = g.node(u);
        if (skip_core && (info.is_base || info.is_recommended)) continue;
        pool.push_back(u);
    }
    auto better = [&](NodeId a, NodeId b) {
        if (g.in_degree(a) != g.in_degree(b)) return g.in_degree(a) > g.in_degree(b);
        return g.node(a).name < g.node(b).name;
    };
    const std::size_t take = std::min(k, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(), better);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < take; ++i) out.push_back(g.node(pool[i]).name);
    return out;
}

} // namespace

Stopwords Stopwords::defaults(bool ecosystem_terms, bool exclude_data) {
    std::unordered_set<std::string> words;
    std::istringstream in{detail::kEnglishStopwords};
    add_lines(words, in);
    if (ecosystem_terms) {
        for (const char* w : {"package", "packages", "functions", "function", "provides", "implementation", "based",
                              "using", "r"}) {
            words.insert(w);
        }
    }
    if (exclude_data) words.insert("data");
    return Stopwords{std::move(words)};
}

Stopwords Stopwords::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("community", "cannot read stopword list " + path.string());
    std::unordered_set<std::string> words;
    add_lines(words, in);
    return Stopwords{std::move(words)};
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            cur.push_back(static_cast<char>(c));
        } else if (c >= 'A' && c <= 'Z') {
            cur.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::vector<std::string> top_terms(std::span<const std::string> texts, const Stopwords& stopwords, std::size_t k) {
    std::unordered_map<std::string, std::size_t> freq;
    for (const auto& text : texts) {
        for (auto& token : tokenize(text)) {
            if (!stopwords.contains(token)) ++freq[std::move(token)];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) out.push_back(ranked[i].first);
    return out;
}

std::vector<CommunitySummary> summarize_communities(const CommunityPartition& partition, const DependencyGraph& direct,
                                                    const DependencyGraph* closed,
                                                    std::span<const PackageRecord> records,
                                                    const Stopwords& stopwords, const SummaryOptions& options) {
    const std::size_t n = direct.node_count();
    if (partition.assignment.size() != n) {
        throw GraphError("community", "partition has " + std::to_string(partition.assignment.size()) +
                                          " nodes, graph has " + std::to_string(n));
    }
    if (closed && closed->node_count() != n) {
        throw GraphError("community", "closure node set does not match the partitioned graph");
    }
    const DependencyGraph& ranked_on = closed ? *closed : direct;

    std::unordered_map<std::string_view, const std::string*> descriptions;
    for (const auto& r : records) descriptions.emplace(r.name, &r.description);

    std::vector<std::vector<NodeId>> members(partition.community_count);
    for (NodeId u = 0; u < n; ++u) members.at(partition.assignment[u]).push_back(u);

    auto summarize = [&](const std::vector<NodeId>& group) {
        CommunitySummary s;
        s.size = group.size();
        s.share = n ? static_cast<double>(group.size()) / static_cast<double>(n) : 0.0;
        s.sample_packages = top_by_in_degree(group, direct, options.top_packages, true);
        s.critical_packages = top_by_in_degree(group, ranked_on, options.top_packages, false);
        std::vector<std::string> texts;
        for (NodeId u : group) {
            auto it = descriptions.find(direct.node(u).name);
            if (it != descriptions.end() && !it->second->empty()) texts.push_back(*it->second);
        }
        s.keywords = top_terms(texts, stopwords, options.top_words);
        return s;
    };

    std::vector<CommunitySummary> out;
    std::vector<NodeId> rest;
    for (std::uint32_t c = 0; c < members.size(); ++c) {
        const double share = n ? static_cast<double>(members[c].size()) / static_cast<double>(n) : 0.0;
        if (share >= options.min_share) {
            auto s = summarize(members[c]);
            s.id = c;
            out.push_back(std::move(s));
        } else {
            rest.insert(rest.end(), members[c].begin(), members[c].end());
        }
    }
    if (!rest.empty()) {
        std::sort(rest.begin(), rest.end());
        auto s = summarize(rest);
        s.id = static_cast<std::uint32_t>(members.size());
        s.other = true;
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace ecograph
