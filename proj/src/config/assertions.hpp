#pragma once
#include <string>
#include <vector>

#include "config/scenario.hpp"

namespace orchsim::config {

struct AssertionResult {
    std::string text;
    bool passed = false;
};

// Evaluates the scenario's bundled assertions against the collected runs.
std::vector<AssertionResult> evaluate_assertions(
    const Scenario& scenario, const std::vector<batch::BatchRunResult>& batch_runs,
    const std::vector<serving::ServingRunResult>& serving_runs);

}  // namespace orchsim::config
