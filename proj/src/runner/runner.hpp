#pragma once
#include <string>
#include <vector>

#include "config/assertions.hpp"
#include "config/scenario.hpp"
#include "metrics/report.hpp"

namespace orchsim::runner {

struct ExecutionResult {
    metrics::RunReport report;
    std::vector<config::AssertionResult> assertions;
    // per-run dispatch logs, only kept when the scenario asks for them
    std::vector<std::pair<std::string, std::string>> dispatch_logs;  // label -> lines

    bool all_assertions_passed() const;
};

// Runs every (arm|strategy, seed) combination sequentially; each run owns all
// of its state, so the order carries no information.
ExecutionResult execute(const config::Scenario& scenario);

// Convenience: execute + write reports (and dispatch logs when enabled).
ExecutionResult execute_and_write(const config::Scenario& scenario, const std::string& out_dir);

}  // namespace orchsim::runner
