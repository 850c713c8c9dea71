#include <httplib.h>

#include "ecograph/ingest.hpp"

#include "ecograph/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

namespace ecograph {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::optional<InputFormat> input_format_from_string(std::string_view text) {
    if (text == "dcf") return InputFormat::Dcf;
    if (text == "json") return InputFormat::Json;
    if (text == "edges") return InputFormat::Edges;
    return std::nullopt;
}

namespace {

std::string read_file(const fs::path& path, const char* module) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(module, "cannot read " + path.string(), "check the path and permissions");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write-then-rename so concurrent readers never observe a partial file.
void write_atomic(const fs::path& path, std::string_view bytes) {
    std::random_device rd;
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("registry-ingest", "cannot write " + tmp.string(), "check cache directory permissions");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("registry-ingest", "short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string utc_now(const char* format) {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, format, &tm);
    return buf;
}

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw IoError("registry-ingest", "not an http(s) URL: " + url, "use http://... or https://...");
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

json load_index(const fs::path& cache_dir) {
    fs::path p = cache_dir / "index.json";
    if (!fs::exists(p)) return json{{"entries", json::array()}};
    try {
        return json::parse(read_file(p, "registry-ingest"));
    } catch (const json::exception&) {
        return json{{"entries", json::array()}};
    }
}

// Newest usable cache entry for `url`, validated against the bytes on disk.
std::optional<json> newest_entry(const json& index, const fs::path& cache_dir, const std::string& url) {
    std::optional<json> best;
    for (const auto& e : index["entries"]) {
        if (e.value("url", "") != url) continue;
        fs::path file = cache_dir / e.value("date", "") / (e.value("checksum", "") + ".dcf");
        if (!fs::exists(file)) continue;
        if (!best || e.value("fetched_at", "") >= best->value("fetched_at", "")) best = e;
    }
    return best;
}

Snapshot snapshot_from_bytes(const std::string& bytes, std::string source, std::string captured_at) {
    auto parsed = parse_dcf(bytes);
    Snapshot snap;
    snap.records = std::move(parsed.records);
    snap.warnings = std::move(parsed.warnings);
    snap.source = std::move(source);
    snap.captured_at = std::move(captured_at);
    snap.checksum = sha256_hex(bytes);
    return snap;
}

Snapshot from_cache(const json& entry, const fs::path& cache_dir, const std::string& url) {
    fs::path file = cache_dir / entry.value("date", "") / (entry.value("checksum", "") + ".dcf");
    std::string bytes = read_file(file, "registry-ingest");
    Snapshot snap = snapshot_from_bytes(bytes, url, entry.value("fetched_at", ""));
    snap.from_cache = true;
    if (snap.checksum != entry.value("checksum", "")) {
        snap.warnings.push_back({0, "cached file " + file.string() + " does not match its recorded checksum"});
    }
    return snap;
}

} // namespace

Snapshot load_snapshot_file(const fs::path& path, InputFormat format) {
    std::string bytes = read_file(path, "registry-ingest");
    Snapshot snap;
    if (format == InputFormat::Dcf || format == InputFormat::Json) {
        auto parsed = format == InputFormat::Dcf ? parse_dcf(bytes) : parse_manifest_json(bytes);
        snap.records = std::move(parsed.records);
        snap.warnings = std::move(parsed.warnings);
    }
    snap.source = path.string();
    snap.checksum = sha256_hex(bytes);
    return snap;
}

Snapshot fetch_snapshot(const std::string& url, const fs::path& cache_dir) {
    fs::create_directories(cache_dir);
    json index = load_index(cache_dir);
    auto cached = newest_entry(index, cache_dir, url);

    auto [origin, path] = split_url(url);
    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);

    auto head = client.Head(path);
    if (!head || head->status >= 400) {
        if (cached) {
            Snapshot snap = from_cache(*cached, cache_dir, url);
            snap.stale = true;
            snap.warnings.push_back({0, "registry unreachable; using cached snapshot from " + cached->value("date", "")});
            return snap;
        }
        std::string why = head ? "HTTP " + std::to_string(head->status) : httplib::to_string(head.error());
        throw IoError("registry-ingest", "cannot reach " + url + " (" + why + ") and the cache at " +
                                             cache_dir.string() + " is empty",
                      "check network access or pass a local PACKAGES file instead");
    }

    std::string etag = head->get_header_value("ETag");
    std::string last_modified = head->get_header_value("Last-Modified");
    std::string length = head->get_header_value("Content-Length");
    bool has_validator = !etag.empty() || !last_modified.empty();
    if (cached && has_validator && cached->value("etag", "") == etag &&
        cached->value("last_modified", "") == last_modified && cached->value("content_length", "") == length) {
        return from_cache(*cached, cache_dir, url);
    }

    auto got = client.Get(path);
    if (!got || got->status >= 400) {
        if (cached) {
            Snapshot snap = from_cache(*cached, cache_dir, url);
            snap.stale = true;
            snap.warnings.push_back({0, "download failed; using cached snapshot from " + cached->value("date", "")});
            return snap;
        }
        throw IoError("registry-ingest", "download of " + url + " failed and the cache is empty",
                      "retry later or pass a local PACKAGES file instead");
    }

    const std::string& bytes = got->body;
    std::string fetched_at = utc_now("%Y-%m-%dT%H:%M:%SZ");
    std::string date = fetched_at.substr(0, 10);
    Snapshot snap = snapshot_from_bytes(bytes, url, fetched_at);
    snap.network_reads = 1;
    if (cached && cached->value("checksum", "") != snap.checksum) {
        snap.warnings.push_back({0, "remote content changed since " + cached->value("date", "") +
                                        "; previous copy retained, newest used"});
    }

    fs::path dir = cache_dir / date;
    fs::create_directories(dir);
    fs::path file = dir / (snap.checksum + ".dcf");
    if (!fs::exists(file)) write_atomic(file, bytes);

    index["entries"].push_back({{"url", url},
                                {"date", date},
                                {"checksum", snap.checksum},
                                {"fetched_at", fetched_at},
                                {"etag", etag},
                                {"last_modified", last_modified},
                                {"content_length", length}});
    write_atomic(cache_dir / "index.json", index.dump(2));
    return snap;
}

} // namespace ecograph
