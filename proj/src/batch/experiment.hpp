#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "accel/fleet.hpp"
#include "batch/calibration.hpp"
#include "batch/trace.hpp"
#include "core/time.hpp"
#include "queueing/engine.hpp"

namespace orchsim::batch {

struct FleetConfig {
    int devices = 8;
    int compute_units_per_device = 7;
    int memory_units_per_device = 8;
    accel::PlacementPolicy placement = accel::PlacementPolicy::FirstFit;
    std::map<std::string, accel::MigProfile> profiles;

    const accel::MigProfile& profile(const std::string& name) const;
};

struct QueueTopologyConfig {
    std::vector<queueing::ResourceFlavor> flavors;
    std::vector<queueing::ClusterQueueSpec> cluster_queues;
    std::vector<queueing::LocalQueueSpec> local_queues;
    std::map<std::string, std::string> local_queue_by_class;  // model class -> local queue
    std::map<std::string, int> priority_by_class;
};

enum class SchedulerMode { Baseline, Kueue };

// One experiment arm: a scheduler and device-shape choice run against the
// shared trace and fleet.
struct BatchArmConfig {
    std::string label;
    SchedulerMode scheduler = SchedulerMode::Baseline;
    bool slicing_enabled = false;
    std::map<std::string, std::string> profile_by_class;  // model class -> profile name
    QueueTopologyConfig topology;                         // kueue mode only
};

struct JobRecord {
    std::string job_id;
    ModelClass model_class = ModelClass::Medium;
    TimeMs created_ms = 0;
    TimeMs pod_created_ms = 0;
    TimeMs start_ms = 0;
    TimeMs finished_ms = 0;
    TimeMs queue_ms = 0;
    TimeMs exec_ms = 0;
    int restarts = 0;
};

struct BatchRunResult {
    std::string arm_label;
    std::uint64_t seed = 0;
    std::vector<JobRecord> jobs;        // submission order
    std::vector<JobSpec> trace;         // submission order
    TimeMs makespan_ms = 0;
    int peak_concurrent_jobs = 0;
    std::vector<accel::DeviceUsage> peak_layout;
    accel::OccupancyMeans occupancy;
    TimeMs total_slice_busy_ms = 0;
    std::vector<std::string> admission_order;  // kueue: admissions; baseline: starts
    std::uint64_t dispatch_digest = 0;
    std::uint64_t borrow_admissions = 0;
    std::uint64_t preemptions = 0;
    // true if some interval saturated fleet memory units while compute units
    // were stranded (slice padding)
    bool padding_witness = false;
};

struct BatchExperimentConfig {
    FleetConfig fleet;
    TraceSpec trace;
    CalibrationParams calibration;
    TimeMs submission_gap_ms = 0;
    std::vector<BatchArmConfig> arms;
};

// Runs one arm for one seed: submits the whole trace at the configured gap,
// drives admission/slicing/execution to completion and records per-job
// lifecycle timestamps plus run-level aggregates.
BatchRunResult run_batch_arm(const BatchExperimentConfig& config, const BatchArmConfig& arm,
                             std::uint64_t seed,
                             const std::function<void(const std::string&)>& log_sink = {});

}  // namespace orchsim::batch
