#include "batch/experiment.hpp"

#include <algorithm>
#include <stdexcept>

#include "core/event_queue.hpp"
#include "queueing/baseline.hpp"

namespace orchsim::batch {

const accel::MigProfile& FleetConfig::profile(const std::string& name) const {
    auto it = profiles.find(name);
    if (it == profiles.end()) {
        throw std::invalid_argument("unknown device profile: " + name);
    }
    return it->second;
}

namespace {

bool has_padding_witness(const accel::Fleet& fleet) {
    for (const accel::OccupancySample& s : fleet.samples()) {
        if (s.allocated_memory_fraction >= 1.0 && s.allocated_compute_fraction < 1.0) {
            return true;
        }
    }
    return false;
}

struct JobRuntime {
    const JobSpec* spec = nullptr;
    std::uint64_t slice = 0;
    bool has_slice = false;
    EventHandle finish_event = 0;
    TimeMs started_at = 0;
    JobRecord record;
};

struct Driver {
    const BatchExperimentConfig& config;
    const BatchArmConfig& arm;
    EventQueue kernel;
    accel::Fleet fleet;
    std::map<std::string, JobRuntime> jobs;
    std::vector<std::string> admission_order;

    Driver(const BatchExperimentConfig& cfg, const BatchArmConfig& a)
        : config(cfg),
          arm(a),
          fleet(cfg.fleet.devices, cfg.fleet.compute_units_per_device,
                cfg.fleet.memory_units_per_device, cfg.fleet.placement) {}

    const std::string& profile_name(const JobSpec& job) const {
        auto it = arm.profile_by_class.find(to_string(job.model_class));
        if (it == arm.profile_by_class.end()) {
            throw std::invalid_argument(std::string("no profile mapped for class ") +
                                        to_string(job.model_class));
        }
        return it->second;
    }

    TimeMs duration_of(const JobSpec& job) const {
        return exec_duration_ms(job, profile_name(job), config.calibration);
    }

    void start_job(JobRuntime& rt, TimeMs now, std::function<void(TimeMs)> on_finish) {
        const accel::MigProfile& prof = config.fleet.profile(profile_name(*rt.spec));
        auto slice = fleet.allocate(prof, rt.spec->job_id, now);
        if (!slice) {
            throw std::logic_error("placement vanished between feasibility check and start for " +
                                   rt.spec->job_id);
        }
        rt.slice = *slice;
        rt.has_slice = true;
        rt.started_at = now;
        rt.finish_event = kernel.schedule(now + duration_of(*rt.spec), EventKind::JobFinished,
                                          rt.spec->job_id, std::move(on_finish));
    }
};

queueing::ResourceUnits request_for(const BatchArmConfig& arm, const FleetConfig& fleet,
                                    const JobSpec& job, const std::string& profile_name) {
    queueing::ResourceUnits request;
    if (arm.slicing_enabled) {
        const accel::MigProfile& prof = fleet.profile(profile_name);
        request["compute-unit"] = prof.compute_units;
        request["memory-unit"] = prof.memory_units;
    } else {
        request["gpu"] = 1;
    }
    return request;
}

BatchRunResult run_kueue_arm(const BatchExperimentConfig& config, const BatchArmConfig& arm,
                             std::uint64_t seed, const std::vector<JobSpec>& trace,
                             Driver& driver) {
    queueing::AdmissionEngine engine(arm.topology.flavors, arm.topology.cluster_queues,
                                     arm.topology.local_queues);
    EventQueue& kernel = driver.kernel;

    queueing::ScanHooks hooks;
    hooks.can_place = [&](const queueing::WorkloadEntry& entry,
                          const std::vector<std::string>& victims) {
        const JobRuntime& rt = driver.jobs.at(entry.job_id);
        const accel::MigProfile& prof = config.fleet.profile(driver.profile_name(*rt.spec));
        if (victims.empty()) {
            return driver.fleet.can_place_anywhere(prof);
        }
        const accel::Fleet::Snapshot snap = driver.fleet.snapshot();
        for (const std::string& victim : victims) {
            driver.fleet.free(driver.jobs.at(victim).slice, kernel.now());
        }
        const bool ok = driver.fleet.can_place_anywhere(prof);
        driver.fleet.restore(snap);
        return ok;
    };
    hooks.on_evict = [&](const std::string& job_id, TimeMs now) {
        JobRuntime& rt = driver.jobs.at(job_id);
        kernel.cancel(rt.finish_event);
        driver.fleet.free(rt.slice, now);
        rt.has_slice = false;
        // marker event so evictions appear in the dispatch log
        kernel.schedule(now, EventKind::Preemption, job_id, [](TimeMs) {});
    };
    hooks.on_admit = [&](const std::string& job_id, TimeMs now) {
        JobRuntime& rt = driver.jobs.at(job_id);
        engine.mark_running(job_id);
        driver.start_job(rt, now, [&, job_id](TimeMs t) {
            JobRuntime& done = driver.jobs.at(job_id);
            driver.fleet.free(done.slice, t);
            done.has_slice = false;
            engine.finish(job_id, t);
            kernel.schedule(t, EventKind::AdmitScan, "after-finish",
                            [&](TimeMs st) { engine.scan(st, hooks); });
        });
        driver.admission_order.push_back(job_id);
    };

    // Creations are chained so each workload's admission scan runs before the
    // next object arrives, the way back-to-back job creation behaves.
    std::function<void(std::size_t, TimeMs)> submit_from = [&](std::size_t index, TimeMs now) {
        if (index >= trace.size()) {
            return;
        }
        const JobSpec& job = trace[index];
        kernel.schedule(std::max<TimeMs>(now, config.submission_gap_ms * job.submit_index),
                        EventKind::JobCreated, job.job_id, [&, index, &job = job](TimeMs t) {
                            queueing::WorkloadEntry entry;
                            entry.job_id = job.job_id;
                            entry.priority = 0;
                            if (auto it = arm.topology.priority_by_class.find(
                                    to_string(job.model_class));
                                it != arm.topology.priority_by_class.end()) {
                                entry.priority = it->second;
                            }
                            entry.profile = driver.profile_name(job);
                            entry.request = request_for(arm, config.fleet, job, entry.profile);
                            auto lq = arm.topology.local_queue_by_class.find(
                                to_string(job.model_class));
                            if (lq == arm.topology.local_queue_by_class.end()) {
                                throw std::invalid_argument(
                                    std::string("no local queue mapped for class ") +
                                    to_string(job.model_class));
                            }
                            engine.submit(std::move(entry), lq->second, t);
                            // scans that find nothing admissible are harmless no-ops
                            kernel.schedule(t, EventKind::AdmitScan, "after-submit",
                                            [&](TimeMs st) { engine.scan(st, hooks); });
                            submit_from(index + 1, t);
                        });
    };
    submit_from(0, 0);

    const TimeMs end = kernel.run_to_completion();
    if (!engine.all_finished()) {
        throw std::logic_error("batch run ended with unfinished workloads");
    }

    BatchRunResult result;
    result.arm_label = arm.label;
    result.seed = seed;
    result.trace = trace;
    TimeMs first_created = trace.empty() ? 0 : config.submission_gap_ms * trace.front().submit_index;
    for (const JobSpec& job : trace) {
        const queueing::WorkloadEntry& w = engine.workload(job.job_id);
        JobRecord rec;
        rec.job_id = job.job_id;
        rec.model_class = job.model_class;
        rec.created_ms = w.created_at;
        rec.pod_created_ms = *w.admitted_at;  // pod exists once admitted
        rec.start_ms = *w.admitted_at;
        rec.finished_ms = *w.finished_at;
        rec.queue_ms = *w.admitted_at - w.created_at;
        rec.exec_ms = *w.finished_at - rec.pod_created_ms;
        rec.restarts = w.restart_count;
        result.jobs.push_back(rec);
        first_created = std::min(first_created, w.created_at);
        result.makespan_ms = std::max(result.makespan_ms, *w.finished_at - first_created);
    }
    result.peak_concurrent_jobs = driver.fleet.peak_running_jobs();
    result.peak_layout = driver.fleet.peak_layout();
    result.occupancy = accel::occupancy_timeline(driver.fleet.samples(), end);
    result.total_slice_busy_ms = driver.fleet.total_slice_busy_ms();
    result.admission_order = driver.admission_order;
    result.dispatch_digest = kernel.dispatch_digest();
    result.borrow_admissions = engine.borrow_admissions();
    result.preemptions = engine.preemptions();
    result.padding_witness = has_padding_witness(driver.fleet);
    return result;
}

BatchRunResult run_baseline_arm(const BatchExperimentConfig& config, const BatchArmConfig& arm,
                                std::uint64_t seed, const std::vector<JobSpec>& trace,
                                Driver& driver) {
    EventQueue& kernel = driver.kernel;
    RngStream rng(seed, "baseline-sched");

    struct PodState {
        TimeMs created = 0;
        TimeMs started = 0;
        TimeMs finished = 0;
        bool done = false;
    };
    std::map<std::string, PodState> pods;
    queueing::BaselinePodSet pod_set;

    const auto can_start = [&](const std::string& job_id) {
        const JobRuntime& rt = driver.jobs.at(job_id);
        return driver.fleet.can_place_anywhere(config.fleet.profile(driver.profile_name(*rt.spec)));
    };

    std::function<void(TimeMs)> scan = [&](TimeMs now) {
        pod_set.start_scan(rng, can_start, [&](const std::string& job_id) {
            JobRuntime& rt = driver.jobs.at(job_id);
            pods[job_id].started = now;
            driver.start_job(rt, now, [&, job_id](TimeMs t) {
                JobRuntime& done_rt = driver.jobs.at(job_id);
                driver.fleet.free(done_rt.slice, t);
                done_rt.has_slice = false;
                pods[job_id].finished = t;
                pods[job_id].done = true;
                kernel.schedule(t, EventKind::AdmitScan, "baseline-after-finish",
                                [&](TimeMs st) { scan(st); });
            });
            driver.admission_order.push_back(job_id);
        });
    };

    std::function<void(std::size_t, TimeMs)> submit_from = [&](std::size_t index, TimeMs now) {
        if (index >= trace.size()) {
            return;
        }
        const JobSpec& job = trace[index];
        kernel.schedule(std::max<TimeMs>(now, config.submission_gap_ms * job.submit_index),
                        EventKind::JobCreated, job.job_id, [&, index, &job = job](TimeMs t) {
                            pods[job.job_id].created = t;
                            pod_set.add_pod(job.job_id);
                            kernel.schedule(t, EventKind::AdmitScan, "baseline-after-submit",
                                            [&](TimeMs st) { scan(st); });
                            submit_from(index + 1, t);
                        });
    };
    submit_from(0, 0);

    const TimeMs end = kernel.run_to_completion();

    BatchRunResult result;
    result.arm_label = arm.label;
    result.seed = seed;
    result.trace = trace;
    TimeMs first_created = 0;
    for (const JobSpec& job : trace) {
        const PodState& pod = pods.at(job.job_id);
        if (!pod.done) {
            throw std::logic_error("baseline run ended with unfinished pod " + job.job_id);
        }
        JobRecord rec;
        rec.job_id = job.job_id;
        rec.model_class = job.model_class;
        rec.created_ms = pod.created;
        rec.pod_created_ms = pod.created;  // pods are created immediately
        rec.start_ms = pod.started;
        rec.finished_ms = pod.finished;
        rec.queue_ms = 0;  // queueing time is folded into exec in this mode
        rec.exec_ms = pod.finished - pod.created;
        result.jobs.push_back(rec);
        result.makespan_ms = std::max(result.makespan_ms, pod.finished - first_created);
    }
    result.peak_concurrent_jobs = driver.fleet.peak_running_jobs();
    result.peak_layout = driver.fleet.peak_layout();
    result.occupancy = accel::occupancy_timeline(driver.fleet.samples(), end);
    result.total_slice_busy_ms = driver.fleet.total_slice_busy_ms();
    result.admission_order = driver.admission_order;
    result.dispatch_digest = kernel.dispatch_digest();
    result.padding_witness = has_padding_witness(driver.fleet);
    return result;
}

}  // namespace

BatchRunResult run_batch_arm(const BatchExperimentConfig& config, const BatchArmConfig& arm,
                             std::uint64_t seed,
                             const std::function<void(const std::string&)>& log_sink) {
    RngStream trace_rng(seed, "trace");
    const std::vector<JobSpec> trace = generate_trace(config.trace, trace_rng);

    Driver driver(config, arm);
    if (log_sink) {
        driver.kernel.set_log_sink(log_sink);
    }
    for (const JobSpec& job : trace) {
        JobRuntime rt;
        rt.spec = &job;
        driver.jobs.emplace(job.job_id, rt);
    }

    if (arm.scheduler == SchedulerMode::Kueue) {
        return run_kueue_arm(config, arm, seed, trace, driver);
    }
    return run_baseline_arm(config, arm, seed, trace, driver);
}

}  // namespace orchsim::batch
