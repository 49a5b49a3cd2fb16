#include "fondsp/bench.hpp"

#include "fondsp/external_planner.hpp"
#include "fondsp/policy_io.hpp"
#include "fondsp/validator.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace fondsp {

namespace fs = std::filesystem;

std::string_view to_string(RunStatus status) {
    switch (status) {
    case RunStatus::solved:
        return "solved";
    case RunStatus::proven_no_solution:
        return "proven-no-solution";
    case RunStatus::budget_exhausted:
        return "budget-exhausted";
    case RunStatus::failure:
        return "failure";
    }
    return "?";
}

std::vector<SuiteEntry> load_manifest(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open manifest " + path);
    fs::path base = fs::path(path).parent_path();
    std::vector<SuiteEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        std::string domain, problem;
        if (!(fields >> domain))
            continue;
        if (!(fields >> problem))
            throw std::runtime_error("manifest line without problem file: " + line);
        entries.push_back({(base / domain).string(), (base / problem).string()});
    }
    return entries;
}

std::string describe(const BenchConfig &config) {
    std::ostringstream os;
    os << "ordering=" << (config.determinize.ordering == Ordering::descending ? "desc" : "asc")
       << " cap=" << config.determinize.cap << (config.determinize.ndp2 ? " ndp2" : "")
       << " strategies=";
    for (std::size_t i = 0; i < config.solve.strategies.size(); ++i)
        os << (i ? "," : "") << config.solve.strategies[i].name();
    os << " budget=" << config.solve.time_limit.count() << "ms";
    return os.str();
}

RunRecord run_problem(const SuiteEntry &entry, const BenchConfig &config) {
    RunRecord record;
    record.domain = fs::path(entry.domain_file).stem().string();
    record.problem = fs::path(entry.problem_file).stem().string();
    record.config = describe(config);
    try {
        pddl::Domain domain = pddl::load_domain(entry.domain_file);
        pddl::Problem problem = pddl::load_problem(entry.problem_file, domain);
        record.domain = domain.name;
        record.problem = problem.name;
        GroundTask task = ground(domain, problem, config.ground);
        DeterminizationSet delta(task, config.determinize);
        SolveOptions options = config.solve;
        std::optional<ExternalPlanner> external;
        if (!config.external_planner.empty()) {
            external.emplace(config.external_planner, domain, problem);
            options.strategies.push_back({StrategyKind::external, std::nullopt, &*external});
        }
        SolveResult result = solve(task, delta, options);
        record.trace = result.trace;
        switch (result.status) {
        case SolveStatus::solved: {
            PolicyVerdict verdict = classify(result.policy, task);
            if (verdict.is_strong()) {
                record.status = RunStatus::solved;
                record.policy_size = result.policy.size();
            } else {
                record.status = RunStatus::failure;
                record.error = "policy rejected by validator: " + verdict.reason;
            }
            break;
        }
        case SolveStatus::no_solution:
            record.status = RunStatus::proven_no_solution;
            break;
        case SolveStatus::budget_exhausted:
            record.status = RunStatus::budget_exhausted;
            break;
        }
    } catch (const std::exception &e) {
        record.status = RunStatus::failure;
        record.error = e.what();
    }
    return record;
}

SuiteReport run_suite(const std::vector<SuiteEntry> &entries, const BenchConfig &config) {
    SuiteReport report;
    report.records.resize(entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < entries.size(); i = next++)
            report.records[i] = run_problem(entries[i], config);
    };
    std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, entries.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }
    return report;
}

std::string SuiteReport::summary_table() const {
    struct Row {
        std::size_t problems = 0, solved = 0, proven = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, Row> rows;
    Row total;
    for (const auto &r : records) {
        if (!rows.contains(r.domain))
            order.push_back(r.domain);
        Row &row = rows[r.domain];
        for (Row *x : {&row, &total}) {
            ++x->problems;
            x->solved += r.status == RunStatus::solved;
            x->proven += r.status == RunStatus::proven_no_solution;
        }
    }
    std::ostringstream os;
    auto line = [&](const std::string &name, const Row &row) {
        std::string label = name + " (" + std::to_string(row.problems) + ")";
        os << std::left << std::setw(28) << label << row.solved << " (" << row.proven << ")\n";
    };
    os << std::left << std::setw(28) << "domain (#problems)" << "solved (no-solution)\n";
    for (const auto &name : order)
        line(name, rows[name]);
    line("total", total);
    return os.str();
}

std::string SuiteReport::cactus_csv() const {
    std::vector<double> times;
    for (const auto &r : records)
        if (r.status == RunStatus::solved)
            times.push_back(r.trace.wall_seconds);
    std::sort(times.begin(), times.end());
    std::ostringstream os;
    os << "seconds,solved\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        os << times[i] << ',' << (i + 1) << '\n';
    return os.str();
}

nlohmann::json SuiteReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : records) {
        rows.push_back({{"domain", r.domain},
                        {"problem", r.problem},
                        {"status", std::string(to_string(r.status))},
                        {"policy_size", r.policy_size},
                        {"trace", trace_to_json(r.trace)},
                        {"config", r.config},
                        {"error", r.error}});
    }
    return rows;
}

}  // namespace fondsp
