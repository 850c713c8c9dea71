#include "ecograph/error.hpp"
#include "ecograph/pipeline.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace ecograph;
namespace fs = std::filesystem;

namespace {

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& tag) {
    auto dir = fs::temp_directory_path() / ("ecograph-pipeline-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

RunConfig fixture_config(const fs::path& out) {
    RunConfig c;
    c.input_path = ECOGRAPH_TEST_DATA "/sample_PACKAGES";
    c.output_dir = out;
    c.structure.er_trials = 3;
    c.stability_runs = 3;
    return c;
}

} // namespace

TEST_CASE("three-package chain gives a complete report") {
    RunConfig c;
    c.input_path = ECOGRAPH_TEST_DATA "/chain.json";
    c.format = InputFormat::Json;
    c.structure.er_trials = 2;
    auto result = run_pipeline(c);
    const auto& rep = result.report;
    REQUIRE(rep.network.size() == 4);
    CHECK(rep.network[0].n == 3);
    CHECK(rep.network[1].n == 3);  // GC = FULL
    CHECK(rep.network[1].e == 2);
    CHECK(rep.network[2].e == 3);  // closure adds a -> c
    REQUIRE(rep.communities.has_value());
    CHECK(rep.communities->count == 1);
    CHECK(rep.structure.size() == 3);
    REQUIRE(rep.nodes.size() == 2);
    CHECK(rep.nodes[0].influential.front().package == "c");
    CHECK(rep.input.records == 3);
}

TEST_CASE("same configuration twice gives byte-identical report.json") {
    auto a = scratch("a"), b = scratch("b");
    run_pipeline(fixture_config(a));
    run_pipeline(fixture_config(b));
    const auto ja = read_all(a / "report.json");
    CHECK(!ja.empty());
    CHECK(ja == read_all(b / "report.json"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("report.json parses back to the in-memory report") {
    auto out = scratch("roundtrip");
    auto result = run_pipeline(fixture_config(out));
    const auto text = read_all(out / "report.json");
    CHECK(report_from_json(text) == result.report);
    CHECK(report_to_json(report_from_json(text)) == text);
    fs::remove_all(out);
}

TEST_CASE("emitted tables have the documented layouts") {
    auto out = scratch("tables");
    auto result = run_pipeline(fixture_config(out));
    for (const char* name : {"network.tsv", "structure.tsv", "influential.tsv", "heavy.tsv", "communities.tsv",
                             "degree_total.tsv", "degree_in.tsv", "degree_out.tsv", "report.json", "partition.csv",
                             "nodes.csv", "edges.csv", "build.log"}) {
        CHECK_MESSAGE(fs::exists(out / name), name);
    }
    const auto structure = read_all(out / "structure.tsv");
    CHECK(structure.substr(0, structure.find('\n')) == "variant\tgamma\tC\tC_er\tl\tl_er\tD\tnd");
    const auto degree = read_all(out / "degree_in.tsv");
    CHECK(degree.substr(0, degree.find('\n')) == "k\tpdf\tccdf");
    const auto partition = read_all(out / "partition.csv");
    CHECK(partition.rfind("package,community\n", 0) == 0);
    const auto nodes = read_all(out / "nodes.csv");
    CHECK(nodes.rfind("name,is_base,is_recommended,origin,community\n", 0) == 0);

    // The top TC row carries the ranking's leader.
    const auto influential = read_all(out / "influential.tsv");
    const auto first_row = influential.substr(influential.find('\n') + 1);
    CHECK(first_row.rfind("TC\t1\t" + result.report.nodes[0].influential.front().package + "\t", 0) == 0);
    fs::remove_all(out);
}

TEST_CASE("exported graph resumes through the edges format") {
    auto out = scratch("resume");
    auto full = run_pipeline(fixture_config(out));

    RunConfig c;
    c.input_path = out / "edges.csv";
    c.nodes_path = out / "nodes.csv";
    c.format = InputFormat::Edges;
    c.metadata_path = ECOGRAPH_TEST_DATA "/sample_PACKAGES";
    c.structure.er_trials = 3;
    c.stability_runs = 3;
    auto resumed = run_pipeline(c);
    CHECK(resumed.report.network == full.report.network);
    CHECK(resumed.report.structure == full.report.structure);
    CHECK(resumed.report.nodes == full.report.nodes);
    CHECK(resumed.report.communities == full.report.communities);
    fs::remove_all(out);
}

TEST_CASE("configuration errors and exit codes") {
    RunConfig none;
    CHECK_THROWS_AS(run_pipeline(none), Error);

    RunConfig both;
    both.input_path = "x";
    both.url = "http://example.invalid/PACKAGES";
    try {
        both.validate();
        FAIL("expected a configuration error");
    } catch (const Error& e) {
        CHECK(e.exit_code() == 2);
    }

    RunConfig missing;
    missing.input_path = "/nonexistent/PACKAGES";
    try {
        run_pipeline(missing);
        FAIL("expected an I/O error");
    } catch (const Error& e) {
        CHECK(e.exit_code() == 5);
    }

    auto empty = scratch("empty");
    fs::create_directories(empty);
    std::ofstream(empty / "PACKAGES") << "\n";
    RunConfig blank;
    blank.input_path = empty / "PACKAGES";
    try {
        run_pipeline(blank);
        FAIL("expected a graph error");
    } catch (const Error& e) {
        CHECK(e.exit_code() == 3);
    }
    fs::remove_all(empty);
}

TEST_CASE("seeds are recorded and steer the random parts") {
    RunConfig c = fixture_config({});
    c.set_seed(1234);
    auto rep = run_pipeline(c).report;
    CHECK(rep.settings.er_seed == 1234);
    CHECK(rep.settings.community_seed == 1234);
    CHECK(rep.communities->seed == 1234);
    for (const auto& s : rep.structure) CHECK(s.er_seed == 1234);
    CHECK(rep.communities->stability->seeds == std::vector<std::uint64_t>{1234, 1235, 1236});
}
