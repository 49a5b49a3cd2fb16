#pragma once

#include "fondsp/determinizer.hpp"
#include "fondsp/grounder.hpp"
#include "fondsp/safe_planner.hpp"

#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fondsp {

struct SuiteEntry {
    std::string domain_file;
    std::string problem_file;
};

// One "domain.pddl problem.pddl" pair per line, relative to the manifest's
// directory. Blank lines and '#' comments are ignored.
std::vector<SuiteEntry> load_manifest(const std::string &path);

struct BenchConfig {
    GroundOptions ground;
    DeterminizeOptions determinize;
    SolveOptions solve;
    std::size_t jobs = 1;
    std::string external_planner;  // empty: embedded strategies only
};

enum class RunStatus { solved, proven_no_solution, budget_exhausted, failure };

std::string_view to_string(RunStatus status);

struct RunRecord {
    std::string domain;
    std::string problem;
    RunStatus status = RunStatus::failure;
    std::size_t policy_size = 0;
    SolveTrace trace;
    std::string error;  // set for failure rows
    std::string config;
};

// Parses, grounds, solves and (for solved rows) re-validates one problem.
// Never throws; errors become failure rows.
RunRecord run_problem(const SuiteEntry &entry, const BenchConfig &config);

struct SuiteReport {
    std::vector<RunRecord> records;  // manifest order

    // Per-domain "solved (proven-no-solution)" counts plus a total row.
    std::string summary_table() const;
    // "seconds,solved" rows: cumulative solved count against solve time.
    std::string cactus_csv() const;
    nlohmann::json to_json() const;
};

SuiteReport run_suite(const std::vector<SuiteEntry> &entries, const BenchConfig &config);

std::string describe(const BenchConfig &config);

}  // namespace fondsp
