#include "doctest.h"

#include "fondsp/bench.hpp"
#include "support/corpus.hpp"

#include <filesystem>
#include <fstream>

using namespace fondsp;
using namespace fondsp::testing;

namespace {

std::string summary_row(const std::string &table, const std::string &label) {
    std::istringstream in(table);
    for (std::string line; std::getline(in, line);)
        if (line.rfind(label, 0) == 0)
            return line;
    return "";
}

std::filesystem::path write_manifest(const std::string &name, const std::string &body) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("manifest entries resolve relative to the manifest") {
    auto entries = load_manifest(corpus_path("suite.manifest"));
    REQUIRE(entries.size() == 9);
    CHECK(std::filesystem::exists(entries[0].domain_file));
    CHECK(std::filesystem::exists(entries[0].problem_file));
    CHECK_THROWS(load_manifest(corpus_path("missing.manifest")));
}

TEST_CASE("all-solvable domain reports zero proven failures") {
    std::string dir = corpus_path("tireworld");
    std::string body;
    for (int i = 0; i < 5; ++i)
        body += dir + "/domain.pddl " + dir + (i % 2 ? "/p01.pddl" : "/p02.pddl") + "\n";
    auto manifest = write_manifest("fondsp-five.manifest", body);
    SuiteReport report = run_suite(load_manifest(manifest.string()), BenchConfig{});
    std::filesystem::remove(manifest);
    std::string row = summary_row(report.summary_table(), "tire (5)");
    REQUIRE_FALSE(row.empty());
    CHECK(row.find("5 (0)") != std::string::npos);
}

TEST_CASE("suite reports the unsolvable miniature in brackets") {
    BenchConfig config;
    config.jobs = 3;
    SuiteReport report = run_suite(load_manifest(corpus_path("suite.manifest")), config);
    std::string total = summary_row(report.summary_table(), "total (9)");
    CHECK(total.find("8 (1)") != std::string::npos);
    std::size_t proven = 0;
    for (const auto &r : report.records) {
        CHECK(r.status != RunStatus::failure);
        proven += r.status == RunStatus::proven_no_solution;
    }
    CHECK(proven == 1);
    CHECK(report.cactus_csv().rfind("seconds,solved\n", 0) == 0);
    auto doc = report.to_json();
    CHECK(doc.size() == 9);
}

TEST_CASE("broken inputs become failure rows") {
    std::string dir = corpus_path("tireworld");
    auto manifest = write_manifest("fondsp-broken.manifest",
                                   dir + "/domain.pddl " + dir + "/nope.pddl\n" +
                                       dir + "/domain.pddl " + dir + "/p01.pddl\n");
    SuiteReport report = run_suite(load_manifest(manifest.string()), BenchConfig{});
    std::filesystem::remove(manifest);
    REQUIRE(report.records.size() == 2);
    CHECK(report.records[0].status == RunStatus::failure);
    CHECK_FALSE(report.records[0].error.empty());
    CHECK(report.records[1].status == RunStatus::solved);
}

TEST_CASE("runs are deterministic apart from timing") {
    auto entries = load_manifest(corpus_path("suite.manifest"));
    BenchConfig config;
    config.jobs = 2;
    SuiteReport a = run_suite(entries, config);
    SuiteReport b = run_suite(entries, config);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].status == b.records[i].status);
        CHECK(a.records[i].policy_size == b.records[i].policy_size);
        CHECK(a.records[i].trace.planner_calls == b.records[i].trace.planner_calls);
    }
    CHECK(a.summary_table() == b.summary_table());
}
