#include "runner/runner.hpp"

#include <filesystem>
#include <fstream>

#include "batch/calibration.hpp"

namespace orchsim::runner {

bool ExecutionResult::all_assertions_passed() const {
    for (const auto& a : assertions) {
        if (!a.passed) {
            return false;
        }
    }
    return true;
}

ExecutionResult execute(const config::Scenario& scenario) {
    ExecutionResult out;
    out.report.scenario_name = scenario.name;
    out.report.resolved_scenario_json = scenario.canonical_json();
    out.report.config_digest = scenario.config_digest();
    out.report.seeds = scenario.seeds;

    const auto run_label = [](const std::string& arm, std::uint64_t seed) {
        return arm + ".seed" + std::to_string(seed);
    };

    if (scenario.kind == config::ExperimentKind::Batch) {
        out.report.calibration_digest = batch::calibration_digest(scenario.batch.calibration);
        for (const auto& arm : scenario.batch.arms) {
            for (std::uint64_t seed : scenario.seeds) {
                std::string log;
                std::function<void(const std::string&)> sink;
                if (scenario.emit_dispatch_log) {
                    sink = [&log](const std::string& line) {
                        log += line;
                        log += '\n';
                    };
                }
                batch::BatchRunResult run = batch::run_batch_arm(scenario.batch, arm, seed, sink);
                out.report.dispatch_digests.emplace_back(run_label(arm.label, seed),
                                                         run.dispatch_digest);
                if (scenario.emit_dispatch_log) {
                    out.dispatch_logs.emplace_back(run_label(arm.label, seed), std::move(log));
                }
                out.report.batch_runs.push_back(std::move(run));
            }
        }
    } else {
        out.report.calibration_digest = "-";
        for (serving::Strategy strategy : scenario.strategies) {
            for (std::uint64_t seed : scenario.seeds) {
                std::string log;
                std::function<void(const std::string&)> sink;
                if (scenario.emit_dispatch_log) {
                    sink = [&log](const std::string& line) {
                        log += line;
                        log += '\n';
                    };
                }
                serving::ServingRunResult run =
                    serving::run_serving_arm(scenario.serving, strategy, seed, sink);
                out.report.dispatch_digests.emplace_back(
                    run_label(serving::to_string(strategy), seed), run.dispatch_digest);
                if (scenario.emit_dispatch_log) {
                    out.dispatch_logs.emplace_back(run_label(serving::to_string(strategy), seed),
                                                   std::move(log));
                }
                out.report.serving_runs.push_back(std::move(run));
            }
        }
    }

    out.assertions =
        config::evaluate_assertions(scenario, out.report.batch_runs, out.report.serving_runs);
    return out;
}

ExecutionResult execute_and_write(const config::Scenario& scenario, const std::string& out_dir) {
    ExecutionResult result = execute(scenario);
    metrics::write_reports(result.report, out_dir);
    for (const auto& [label, lines] : result.dispatch_logs) {
        const std::string path = out_dir + "/dispatch_" + label + ".log";
        std::ofstream log(path, std::ios::binary);
        if (!log) {
            throw std::runtime_error("cannot write " + path);
        }
        log << lines;
    }
    return result;
}

}  // namespace orchsim::runner
