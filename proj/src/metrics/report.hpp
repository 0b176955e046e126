#pragma once
#include <optional>
#include <string>
#include <vector>

#include "batch/experiment.hpp"
#include "serving/engine.hpp"

namespace orchsim::metrics {

struct BatchConfigAggregate {
    std::string config;
    double makespan_median_ms = 0.0;
    double makespan_min_ms = 0.0;
    double makespan_max_ms = 0.0;
    double queue_median_ms = 0.0;
    double queue_p95_ms = 0.0;
    double exec_median_ms = 0.0;
    double medium_queue_median_ms = 0.0;
    double medium_exec_median_ms = 0.0;
    double large_queue_median_ms = 0.0;
    double large_exec_median_ms = 0.0;
    int peak_concurrent_jobs = 0;
    double mean_compute_occupancy = 0.0;
    double mean_memory_occupancy = 0.0;
};

struct ServingAggregate {
    std::string strategy;
    std::string concurrency;  // level as text, or "all" for the pooled row
    std::size_t count = 0;
    double ttft_mean_ms = 0.0;
    double ttft_p99_ms = 0.0;
    double ttft_ci95_ms = 0.0;
    double e2e_mean_ms = 0.0;
    double e2e_p99_ms = 0.0;
    double e2e_ci95_ms = 0.0;
};

// Per-configuration rows with the reference table's column semantics:
// makespan median and min-max over seeds, queue/exec medians and queue P95
// pooled over every job of every seed, plus per-class medians.
std::vector<BatchConfigAggregate> summarize_batch(const std::vector<batch::BatchRunResult>& runs);

std::vector<ServingAggregate> summarize_serving(const std::vector<serving::ServingRunResult>& runs);

struct RunReport {
    std::string scenario_name;
    std::string resolved_scenario_json;  // canonical, reparseable
    std::string config_digest;
    std::string calibration_digest;
    std::vector<std::uint64_t> seeds;
    std::vector<batch::BatchRunResult> batch_runs;
    std::vector<serving::ServingRunResult> serving_runs;
    std::vector<std::pair<std::string, std::uint64_t>> dispatch_digests;  // run label -> digest
};

// Writes batch.csv / serving.csv / serving_requests.csv (as applicable),
// summary.txt, resolved_scenario.json and run_meta.txt; returns the file
// names written.
std::vector<std::string> write_reports(const RunReport& report, const std::string& out_dir);

}  // namespace orchsim::metrics
