#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "batch/experiment.hpp"
#include "serving/engine.hpp"

namespace orchsim::config {

// Invalid or inconsistent configuration; maps to exit status 2 at the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Batch, Serving, Overhead };

const char* to_string(ExperimentKind kind);

// A fully-resolved experiment description. Every field is explicit; parsing
// rejects unknown keys, missing keys and infeasible combinations, so a
// Scenario always round-trips bit-exactly through canonical_json().
struct Scenario {
    std::string name;
    ExperimentKind kind = ExperimentKind::Batch;
    std::vector<std::uint64_t> seeds;

    batch::BatchExperimentConfig batch;

    serving::ServingConfig serving;
    std::vector<serving::Strategy> strategies;

    nlohmann::json assertions = nlohmann::json::array();

    bool emit_dispatch_log = false;  // runtime flag, not part of the document

    nlohmann::json to_json() const;
    std::string canonical_json() const { return to_json().dump(2); }
    std::string config_digest() const;
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

}  // namespace orchsim::config
