#include "config/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "core/hash.hpp"

namespace orchsim::config {

using nlohmann::json;

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Batch: return "batch";
        case ExperimentKind::Serving: return "serving";
        case ExperimentKind::Overhead: return "overhead";
    }
    return "unknown";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

const json& member(const json& obj, const std::string& path, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path, "missing required key '" + key + "'");
    }
    return *it;
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (allowed.find(key) == allowed.end()) {
            fail(path, "unknown key '" + key + "'");
        }
    }
}

double get_double(const json& obj, const std::string& path, const std::string& key) {
    const json& v = member(obj, path, key);
    if (!v.is_number()) {
        fail(path + "." + key, "expected a number");
    }
    return v.get<double>();
}

std::int64_t get_int(const json& obj, const std::string& path, const std::string& key) {
    const json& v = member(obj, path, key);
    if (!v.is_number_integer()) {
        fail(path + "." + key, "expected an integer");
    }
    return v.get<std::int64_t>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key) {
    const json& v = member(obj, path, key);
    if (!v.is_boolean()) {
        fail(path + "." + key, "expected a boolean");
    }
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key) {
    const json& v = member(obj, path, key);
    if (!v.is_string()) {
        fail(path + "." + key, "expected a string");
    }
    return v.get<std::string>();
}

const json& get_object(const json& obj, const std::string& path, const std::string& key) {
    const json& v = member(obj, path, key);
    if (!v.is_object()) {
        fail(path + "." + key, "expected an object");
    }
    return v;
}

const json& get_array(const json& obj, const std::string& path, const std::string& key) {
    const json& v = member(obj, path, key);
    if (!v.is_array()) {
        fail(path + "." + key, "expected an array");
    }
    return v;
}

batch::ClassDistribution parse_distribution(const json& obj, const std::string& path) {
    reject_unknown(obj, path, {"mean_s", "sd_s", "min_s", "max_s"});
    batch::ClassDistribution dist;
    dist.mean_s = get_double(obj, path, "mean_s");
    dist.sd_s = get_double(obj, path, "sd_s");
    dist.min_s = get_double(obj, path, "min_s");
    dist.max_s = get_double(obj, path, "max_s");
    if (dist.mean_s <= 0 || dist.sd_s < 0 || dist.min_s <= 0 || dist.max_s < dist.min_s) {
        fail(path, "invalid distribution parameters");
    }
    return dist;
}

batch::TraceSpec parse_trace(const json& obj, const std::string& path) {
    reject_unknown(obj, path,
                   {"mode", "jobs_per_class", "submission_order", "medium", "large", "file"});
    batch::TraceSpec trace;
    const std::string mode = get_string(obj, path, "mode");
    if (mode == "synthetic") {
        trace.mode = batch::TraceSpec::Mode::Synthetic;
    } else if (mode == "file") {
        trace.mode = batch::TraceSpec::Mode::File;
    } else {
        fail(path + ".mode", "expected 'synthetic' or 'file'");
    }
    trace.jobs_per_class = static_cast<int>(get_int(obj, path, "jobs_per_class"));
    if (trace.jobs_per_class < 1) {
        fail(path + ".jobs_per_class", "must be >= 1");
    }
    const std::string order = get_string(obj, path, "submission_order");
    if (order == "medium-first") {
        trace.order = batch::SubmissionOrder::MediumFirst;
    } else if (order == "large-first") {
        trace.order = batch::SubmissionOrder::LargeFirst;
    } else {
        fail(path + ".submission_order", "expected 'medium-first' or 'large-first'");
    }
    trace.medium = parse_distribution(get_object(obj, path, "medium"), path + ".medium");
    trace.large = parse_distribution(get_object(obj, path, "large"), path + ".large");
    trace.file_path = get_string(obj, path, "file");
    if (trace.mode == batch::TraceSpec::Mode::File && trace.file_path.empty()) {
        fail(path + ".file", "file mode requires a path");
    }
    return trace;
}

batch::FleetConfig parse_fleet(const json& obj, const std::string& path) {
    reject_unknown(obj, path,
                   {"devices", "compute_units_per_device", "memory_units_per_device",
                    "placement_policy", "profiles"});
    batch::FleetConfig fleet;
    fleet.devices = static_cast<int>(get_int(obj, path, "devices"));
    fleet.compute_units_per_device =
        static_cast<int>(get_int(obj, path, "compute_units_per_device"));
    fleet.memory_units_per_device =
        static_cast<int>(get_int(obj, path, "memory_units_per_device"));
    if (fleet.devices < 1 || fleet.compute_units_per_device < 1 ||
        fleet.memory_units_per_device < 1) {
        fail(path, "devices and per-device units must be >= 1");
    }
    const std::string policy = get_string(obj, path, "placement_policy");
    if (policy == "first-fit") {
        fleet.placement = accel::PlacementPolicy::FirstFit;
    } else if (policy == "best-fit") {
        fleet.placement = accel::PlacementPolicy::BestFit;
    } else {
        fail(path + ".placement_policy", "expected 'first-fit' or 'best-fit'");
    }
    const json& profiles = get_object(obj, path, "profiles");
    for (const auto& [name, body] : profiles.items()) {
        const std::string ppath = path + ".profiles." + name;
        reject_unknown(body, ppath, {"compute_units", "memory_units"});
        accel::MigProfile profile;
        profile.name = name;
        profile.compute_units = static_cast<int>(get_int(body, ppath, "compute_units"));
        profile.memory_units = static_cast<int>(get_int(body, ppath, "memory_units"));
        if (profile.compute_units < 1 || profile.memory_units < 1) {
            fail(ppath, "profile units must be >= 1");
        }
        if (profile.compute_units > fleet.compute_units_per_device ||
            profile.memory_units > fleet.memory_units_per_device) {
            fail(ppath, "profile does not fit on a device");
        }
        fleet.profiles.emplace(name, profile);
    }
    if (fleet.profiles.empty()) {
        fail(path + ".profiles", "at least one profile is required");
    }
    return fleet;
}

batch::CalibrationParams parse_calibration(const json& obj, const std::string& path) {
    reject_unknown(obj, path, {"rtf", "startup_overhead_s"});
    batch::CalibrationParams calib;
    calib.startup_overhead_s = get_double(obj, path, "startup_overhead_s");
    const json& rtf = get_object(obj, path, "rtf");
    for (const auto& [klass, entries] : rtf.items()) {
        if (klass != "medium" && klass != "large") {
            fail(path + ".rtf", "unknown model class '" + klass + "'");
        }
        if (!entries.is_object()) {
            fail(path + ".rtf." + klass, "expected an object of device-class entries");
        }
        for (const auto& [device_class, value] : entries.items()) {
            if (!value.is_number()) {
                fail(path + ".rtf." + klass + "." + device_class, "expected a number");
            }
            calib.rtf[{klass, device_class}] = value.get<double>();
        }
    }
    try {
        calib.validate();
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return calib;
}

batch::QueueTopologyConfig parse_topology(const json& obj, const std::string& path) {
    reject_unknown(obj, path,
                   {"flavors", "cluster_queues", "local_queues", "local_queue_by_class",
                    "priority_by_class"});
    batch::QueueTopologyConfig topo;
    for (const auto& [name, body] : get_object(obj, path, "flavors").items()) {
        queueing::ResourceFlavor flavor;
        flavor.name = name;
        if (!body.is_object() || body.empty()) {
            fail(path + ".flavors." + name, "expected resource -> units");
        }
        for (const auto& [res, units] : body.items()) {
            if (!units.is_number_integer()) {
                fail(path + ".flavors." + name + "." + res, "expected integer units");
            }
            flavor.capacities[res] = units.get<std::int64_t>();
        }
        topo.flavors.push_back(std::move(flavor));
    }
    for (const auto& [name, body] : get_object(obj, path, "cluster_queues").items()) {
        const std::string qpath = path + ".cluster_queues." + name;
        reject_unknown(body, qpath, {"cohort", "quota", "borrowing_enabled", "preemption_enabled"});
        queueing::ClusterQueueSpec cq;
        cq.name = name;
        cq.cohort = get_string(body, qpath, "cohort");
        cq.borrowing_enabled = get_bool(body, qpath, "borrowing_enabled");
        cq.preemption_enabled = get_bool(body, qpath, "preemption_enabled");
        for (const auto& [flavor, quota] : get_object(body, qpath, "quota").items()) {
            if (!quota.is_object()) {
                fail(qpath + ".quota." + flavor, "expected resource -> units");
            }
            for (const auto& [res, units] : quota.items()) {
                if (!units.is_number_integer()) {
                    fail(qpath + ".quota." + flavor + "." + res, "expected integer units");
                }
                cq.nominal_quota[flavor][res] = units.get<std::int64_t>();
            }
        }
        topo.cluster_queues.push_back(std::move(cq));
    }
    for (const auto& [name, body] : get_object(obj, path, "local_queues").items()) {
        const std::string qpath = path + ".local_queues." + name;
        reject_unknown(body, qpath, {"namespace", "cluster_queue"});
        queueing::LocalQueueSpec lq;
        lq.name = name;
        lq.ns = get_string(body, qpath, "namespace");
        lq.cluster_queue = get_string(body, qpath, "cluster_queue");
        topo.local_queues.push_back(std::move(lq));
    }
    for (const auto& [klass, lq] : get_object(obj, path, "local_queue_by_class").items()) {
        if (!lq.is_string()) {
            fail(path + ".local_queue_by_class." + klass, "expected a local queue name");
        }
        topo.local_queue_by_class[klass] = lq.get<std::string>();
    }
    for (const auto& [klass, prio] : get_object(obj, path, "priority_by_class").items()) {
        if (!prio.is_number_integer()) {
            fail(path + ".priority_by_class." + klass, "expected an integer priority");
        }
        topo.priority_by_class[klass] = prio.get<int>();
    }
    return topo;
}

batch::BatchArmConfig parse_arm(const json& obj, const std::string& path,
                                const batch::FleetConfig& fleet) {
    reject_unknown(obj, path,
                   {"label", "scheduler", "slicing_enabled", "profile_by_class", "topology"});
    batch::BatchArmConfig arm;
    arm.label = get_string(obj, path, "label");
    const std::string scheduler = get_string(obj, path, "scheduler");
    if (scheduler == "baseline") {
        arm.scheduler = batch::SchedulerMode::Baseline;
    } else if (scheduler == "kueue") {
        arm.scheduler = batch::SchedulerMode::Kueue;
    } else {
        fail(path + ".scheduler", "expected 'baseline' or 'kueue'");
    }
    arm.slicing_enabled = get_bool(obj, path, "slicing_enabled");
    for (const auto& [klass, profile] : get_object(obj, path, "profile_by_class").items()) {
        if (klass != "medium" && klass != "large") {
            fail(path + ".profile_by_class", "unknown model class '" + klass + "'");
        }
        if (!profile.is_string()) {
            fail(path + ".profile_by_class." + klass, "expected a profile name");
        }
        const std::string name = profile.get<std::string>();
        if (fleet.profiles.find(name) == fleet.profiles.end()) {
            fail(path + ".profile_by_class." + klass, "unknown profile '" + name + "'");
        }
        if (!arm.slicing_enabled) {
            const accel::MigProfile& p = fleet.profiles.at(name);
            if (p.compute_units != fleet.compute_units_per_device ||
                p.memory_units != fleet.memory_units_per_device) {
                fail(path + ".profile_by_class." + klass,
                     "sliced profile '" + name + "' requires slicing_enabled");
            }
        }
        arm.profile_by_class[klass] = name;
    }
    if (arm.profile_by_class.find("medium") == arm.profile_by_class.end() ||
        arm.profile_by_class.find("large") == arm.profile_by_class.end()) {
        fail(path + ".profile_by_class", "both 'medium' and 'large' must be mapped");
    }
    if (arm.scheduler == batch::SchedulerMode::Kueue) {
        arm.topology = parse_topology(get_object(obj, path, "topology"), path + ".topology");
    } else if (obj.find("topology") != obj.end()) {
        fail(path + ".topology", "baseline arms take no queue topology");
    }
    return arm;
}

serving::CorpusSpec parse_corpus(const json& obj, const std::string& path) {
    reject_unknown(obj, path,
                   {"mode", "prompts", "mean_tokens", "jitter_tokens", "repeats",
                    "max_output_tokens", "fixed_output_tokens", "file"});
    serving::CorpusSpec corpus;
    const std::string mode = get_string(obj, path, "mode");
    if (mode == "synthetic") {
        corpus.mode = serving::CorpusSpec::Mode::Synthetic;
    } else if (mode == "file") {
        corpus.mode = serving::CorpusSpec::Mode::File;
    } else {
        fail(path + ".mode", "expected 'synthetic' or 'file'");
    }
    corpus.prompts = static_cast<int>(get_int(obj, path, "prompts"));
    corpus.mean_tokens = static_cast<int>(get_int(obj, path, "mean_tokens"));
    corpus.jitter_tokens = static_cast<int>(get_int(obj, path, "jitter_tokens"));
    corpus.repeats = static_cast<int>(get_int(obj, path, "repeats"));
    corpus.max_output_tokens = static_cast<int>(get_int(obj, path, "max_output_tokens"));
    const json& fixed = member(obj, path, "fixed_output_tokens");
    if (fixed.is_null()) {
        corpus.fixed_output_tokens.reset();
    } else if (fixed.is_number_integer()) {
        corpus.fixed_output_tokens = fixed.get<int>();
    } else {
        fail(path + ".fixed_output_tokens", "expected an integer or null");
    }
    corpus.file_path = get_string(obj, path, "file");
    if (corpus.mode == serving::CorpusSpec::Mode::File && corpus.file_path.empty()) {
        fail(path + ".file", "file mode requires a path");
    }
    return corpus;
}

serving::LatencyParams parse_latency(const json& obj, const std::string& path) {
    reject_unknown(obj, path,
                   {"gateway_overhead_ms", "epp_overhead_ms", "prefill_ms_per_token",
                    "ttft_floor_ms", "decode_ms_per_token"});
    serving::LatencyParams latency;
    for (const auto& [strategy, ms] : get_object(obj, path, "gateway_overhead_ms").items()) {
        serving::strategy_from(strategy);  // validates the name
        if (!ms.is_number() || ms.get<double>() < 0) {
            fail(path + ".gateway_overhead_ms." + strategy, "expected a non-negative number");
        }
        latency.gateway_overhead_ms[strategy] = ms.get<double>();
    }
    const json& table = get_array(obj, path, "epp_overhead_ms");
    int previous = 0;
    for (const json& pair : table) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number()) {
            fail(path + ".epp_overhead_ms", "expected [concurrency, ms] pairs");
        }
        const int breakpoint = pair[0].get<int>();
        const double ms = pair[1].get<double>();
        if (breakpoint <= previous && !latency.epp_overhead_ms.empty()) {
            fail(path + ".epp_overhead_ms", "breakpoints must be strictly increasing");
        }
        if (ms < 0) {
            fail(path + ".epp_overhead_ms", "overheads must be non-negative");
        }
        latency.epp_overhead_ms.emplace_back(breakpoint, ms);
        previous = breakpoint;
    }
    if (latency.epp_overhead_ms.empty()) {
        fail(path + ".epp_overhead_ms", "at least one entry is required");
    }
    latency.prefill_ms_per_token = get_double(obj, path, "prefill_ms_per_token");
    latency.ttft_floor_ms = get_double(obj, path, "ttft_floor_ms");
    latency.decode_ms_per_token = get_double(obj, path, "decode_ms_per_token");
    if (latency.prefill_ms_per_token < 0 || latency.ttft_floor_ms < 0 ||
        latency.decode_ms_per_token < 0) {
        fail(path, "latency parameters must be non-negative");
    }
    return latency;
}

void validate_serving(const Scenario& scenario) {
    const serving::ServingConfig& cfg = scenario.serving;
    if (cfg.replicas < 1) {
        throw ConfigError("serving.replicas: must be >= 1");
    }
    if (cfg.block_size_tokens < 1 || cfg.kv_capacity_tokens < cfg.block_size_tokens) {
        throw ConfigError("serving: kv capacity must hold at least one block");
    }
    for (int level : cfg.concurrency_levels) {
        if (level < 1) {
            throw ConfigError("serving.concurrency_levels: levels must be >= 1");
        }
    }
    for (serving::Strategy s : scenario.strategies) {
        cfg.latency.gateway_overhead_for(s);  // must be configured
    }
    // picker-backed modes must sit 3-11 ms above the plain paths at every
    // tested level
    for (serving::Strategy epp : scenario.strategies) {
        if (!serving::uses_endpoint_picker(epp)) {
            continue;
        }
        for (serving::Strategy plain : scenario.strategies) {
            if (serving::uses_endpoint_picker(plain)) {
                continue;
            }
            for (int level : cfg.concurrency_levels) {
                const double gap = cfg.latency.gateway_overhead_for(epp) +
                                   cfg.latency.epp_overhead_for(level) -
                                   cfg.latency.gateway_overhead_for(plain);
                if (gap < 3.0 || gap > 11.0) {
                    throw ConfigError(
                        "serving.latency: picker overhead over the plain path must stay "
                        "within [3, 11] ms across the tested levels");
                }
            }
        }
    }
}

const std::set<std::string> kAssertionChecks = {
    "queue_time_zero",
    "makespan_median_minutes",
    "exec_median_minutes",
    "admission_order_prefix",
    "peak_concurrency_between",
    "mean_completion_ratio_between",
    "mean_completion_reduction_pct",
    "p95_completion_reduction_pct",
    "preemptions_occur",
    "borrowing_occurs",
    "slice_padding_witness",
    "trace_class_mean_within_pct",
    "trace_within_bounds",
    "ttft_gap_band_per_level",
    "ttft_gap_similar",
    "ttft_mean_band_ms",
    "ttft_mean_ratio_min",
    "ttft_p99_ratio_min",
    "e2e_mean_gap_min_ms",
    "e2e_p99_gap_min_ms",
    "hit_rate_min",
    "hit_rate_max",
    "ttft_dominance_per_level",
};

void validate_assertions(const json& assertions) {
    if (!assertions.is_array()) {
        throw ConfigError("assertions: expected an array");
    }
    for (const json& a : assertions) {
        if (!a.is_object() || a.find("check") == a.end() || !a["check"].is_string()) {
            throw ConfigError("assertions: every entry needs a 'check' name");
        }
        const std::string check = a["check"].get<std::string>();
        if (kAssertionChecks.find(check) == kAssertionChecks.end()) {
            throw ConfigError("assertions: unknown check '" + check + "'");
        }
    }
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    reject_unknown(doc, "scenario",
                   {"name", "experiment", "seeds", "batch", "serving", "assertions"});
    Scenario scenario;
    scenario.name = get_string(doc, "scenario", "name");
    const std::string kind = get_string(doc, "scenario", "experiment");
    if (kind == "batch") {
        scenario.kind = ExperimentKind::Batch;
    } else if (kind == "serving") {
        scenario.kind = ExperimentKind::Serving;
    } else if (kind == "overhead") {
        scenario.kind = ExperimentKind::Overhead;
    } else {
        fail("scenario.experiment", "expected 'batch', 'serving' or 'overhead'");
    }
    const json& seeds = get_array(doc, "scenario", "seeds");
    if (seeds.empty()) {
        fail("scenario.seeds", "at least one seed is required");
    }
    for (const json& s : seeds) {
        if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
            fail("scenario.seeds", "seeds must be non-negative integers");
        }
        scenario.seeds.push_back(s.get<std::uint64_t>());
    }

    if (scenario.kind == ExperimentKind::Batch) {
        if (doc.find("serving") != doc.end()) {
            fail("scenario.serving", "not valid for a batch experiment");
        }
        const json& b = get_object(doc, "scenario", "batch");
        reject_unknown(b, "batch",
                       {"submission_gap_ms", "fleet", "trace", "calibration", "arms"});
        scenario.batch.submission_gap_ms = get_int(b, "batch", "submission_gap_ms");
        if (scenario.batch.submission_gap_ms < 0) {
            fail("batch.submission_gap_ms", "must be non-negative");
        }
        scenario.batch.fleet = parse_fleet(get_object(b, "batch", "fleet"), "batch.fleet");
        scenario.batch.trace = parse_trace(get_object(b, "batch", "trace"), "batch.trace");
        scenario.batch.calibration =
            parse_calibration(get_object(b, "batch", "calibration"), "batch.calibration");
        const json& arms = get_array(b, "batch", "arms");
        if (arms.empty()) {
            fail("batch.arms", "at least one arm is required");
        }
        for (std::size_t i = 0; i < arms.size(); ++i) {
            scenario.batch.arms.push_back(parse_arm(
                arms[i], "batch.arms[" + std::to_string(i) + "]", scenario.batch.fleet));
        }
        for (const auto& arm : scenario.batch.arms) {
            for (const auto& [klass, profile] : arm.profile_by_class) {
                try {
                    // every mapped device class must be calibrated
                    scenario.batch.calibration.rtf_for(
                        klass == "medium" ? batch::ModelClass::Medium : batch::ModelClass::Large,
                        profile);
                } catch (const std::exception& e) {
                    fail("batch.calibration", e.what());
                }
            }
        }
    } else {
        if (doc.find("batch") != doc.end()) {
            fail("scenario.batch", "not valid for a serving experiment");
        }
        const json& s = get_object(doc, "scenario", "serving");
        reject_unknown(s, "serving",
                       {"replicas", "kv_capacity_tokens", "block_size_tokens",
                        "concurrency_levels", "strategies", "corpus", "latency"});
        scenario.serving.replicas = static_cast<int>(get_int(s, "serving", "replicas"));
        scenario.serving.kv_capacity_tokens = get_int(s, "serving", "kv_capacity_tokens");
        scenario.serving.block_size_tokens =
            static_cast<int>(get_int(s, "serving", "block_size_tokens"));
        scenario.serving.concurrency_levels.clear();
        for (const json& level : get_array(s, "serving", "concurrency_levels")) {
            if (!level.is_number_integer()) {
                fail("serving.concurrency_levels", "expected integers");
            }
            scenario.serving.concurrency_levels.push_back(level.get<int>());
        }
        for (const json& name : get_array(s, "serving", "strategies")) {
            if (!name.is_string()) {
                fail("serving.strategies", "expected strategy names");
            }
            scenario.strategies.push_back(serving::strategy_from(name.get<std::string>()));
        }
        if (scenario.strategies.empty()) {
            fail("serving.strategies", "at least one strategy is required");
        }
        scenario.serving.corpus = parse_corpus(get_object(s, "serving", "corpus"),
                                               "serving.corpus");
        scenario.serving.latency = parse_latency(get_object(s, "serving", "latency"),
                                                 "serving.latency");
        try {
            validate_serving(scenario);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail("serving", e.what());
        }
    }

    scenario.assertions = doc.contains("assertions") ? doc["assertions"] : json::array();
    validate_assertions(scenario.assertions);
    return scenario;
}

Scenario parse_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

namespace {

json distribution_json(const batch::ClassDistribution& dist) {
    return json{{"mean_s", dist.mean_s}, {"sd_s", dist.sd_s}, {"min_s", dist.min_s},
                {"max_s", dist.max_s}};
}

}  // namespace

json Scenario::to_json() const {
    json doc;
    doc["name"] = name;
    doc["experiment"] = config::to_string(kind);
    doc["seeds"] = seeds;
    doc["assertions"] = assertions;

    if (kind == ExperimentKind::Batch) {
        json b;
        b["submission_gap_ms"] = batch.submission_gap_ms;
        json fleet;
        fleet["devices"] = batch.fleet.devices;
        fleet["compute_units_per_device"] = batch.fleet.compute_units_per_device;
        fleet["memory_units_per_device"] = batch.fleet.memory_units_per_device;
        fleet["placement_policy"] =
            batch.fleet.placement == accel::PlacementPolicy::FirstFit ? "first-fit" : "best-fit";
        json profiles = json::object();
        for (const auto& [name_, p] : batch.fleet.profiles) {
            profiles[name_] = json{{"compute_units", p.compute_units},
                                   {"memory_units", p.memory_units}};
        }
        fleet["profiles"] = profiles;
        b["fleet"] = fleet;

        json trace;
        trace["mode"] = batch.trace.mode == batch::TraceSpec::Mode::Synthetic ? "synthetic"
                                                                              : "file";
        trace["jobs_per_class"] = batch.trace.jobs_per_class;
        trace["submission_order"] =
            batch.trace.order == batch::SubmissionOrder::MediumFirst ? "medium-first"
                                                                     : "large-first";
        trace["medium"] = distribution_json(batch.trace.medium);
        trace["large"] = distribution_json(batch.trace.large);
        trace["file"] = batch.trace.file_path;
        b["trace"] = trace;

        json calib;
        calib["startup_overhead_s"] = batch.calibration.startup_overhead_s;
        json rtf = json::object();
        for (const auto& [key, value] : batch.calibration.rtf) {
            rtf[key.first][key.second] = value;
        }
        calib["rtf"] = rtf;
        b["calibration"] = calib;

        json arms = json::array();
        for (const auto& arm : batch.arms) {
            json a;
            a["label"] = arm.label;
            a["scheduler"] = arm.scheduler == batch::SchedulerMode::Kueue ? "kueue" : "baseline";
            a["slicing_enabled"] = arm.slicing_enabled;
            a["profile_by_class"] = arm.profile_by_class;
            if (arm.scheduler == batch::SchedulerMode::Kueue) {
                json topo;
                json flavors = json::object();
                for (const auto& flavor : arm.topology.flavors) {
                    flavors[flavor.name] = flavor.capacities;
                }
                topo["flavors"] = flavors;
                json cqs = json::object();
                for (const auto& cq : arm.topology.cluster_queues) {
                    json q;
                    q["cohort"] = cq.cohort;
                    q["borrowing_enabled"] = cq.borrowing_enabled;
                    q["preemption_enabled"] = cq.preemption_enabled;
                    q["quota"] = cq.nominal_quota;
                    cqs[cq.name] = q;
                }
                topo["cluster_queues"] = cqs;
                json lqs = json::object();
                for (const auto& lq : arm.topology.local_queues) {
                    lqs[lq.name] = json{{"namespace", lq.ns}, {"cluster_queue", lq.cluster_queue}};
                }
                topo["local_queues"] = lqs;
                topo["local_queue_by_class"] = arm.topology.local_queue_by_class;
                topo["priority_by_class"] = arm.topology.priority_by_class;
                a["topology"] = topo;
            }
            arms.push_back(a);
        }
        b["arms"] = arms;
        doc["batch"] = b;
    } else {
        json s;
        s["replicas"] = serving.replicas;
        s["kv_capacity_tokens"] = serving.kv_capacity_tokens;
        s["block_size_tokens"] = serving.block_size_tokens;
        s["concurrency_levels"] = serving.concurrency_levels;
        json strategy_names = json::array();
        for (serving::Strategy strategy : strategies) {
            strategy_names.push_back(serving::to_string(strategy));
        }
        s["strategies"] = strategy_names;
        json corpus;
        corpus["mode"] =
            serving.corpus.mode == serving::CorpusSpec::Mode::Synthetic ? "synthetic" : "file";
        corpus["prompts"] = serving.corpus.prompts;
        corpus["mean_tokens"] = serving.corpus.mean_tokens;
        corpus["jitter_tokens"] = serving.corpus.jitter_tokens;
        corpus["repeats"] = serving.corpus.repeats;
        corpus["max_output_tokens"] = serving.corpus.max_output_tokens;
        corpus["fixed_output_tokens"] =
            serving.corpus.fixed_output_tokens ? json(*serving.corpus.fixed_output_tokens)
                                               : json(nullptr);
        corpus["file"] = serving.corpus.file_path;
        s["corpus"] = corpus;
        json latency;
        latency["gateway_overhead_ms"] = serving.latency.gateway_overhead_ms;
        json table = json::array();
        for (const auto& [breakpoint, ms] : serving.latency.epp_overhead_ms) {
            table.push_back(json::array({breakpoint, ms}));
        }
        latency["epp_overhead_ms"] = table;
        latency["prefill_ms_per_token"] = serving.latency.prefill_ms_per_token;
        latency["ttft_floor_ms"] = serving.latency.ttft_floor_ms;
        latency["decode_ms_per_token"] = serving.latency.decode_ms_per_token;
        s["latency"] = latency;
        doc["serving"] = s;
    }
    return doc;
}

std::string Scenario::config_digest() const {
    std::ostringstream out;
    out << std::hex << fnv1a64(canonical_json());
    return out.str();
}

}  // namespace orchsim::config
