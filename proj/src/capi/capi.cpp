#include "orchsim.h"

#include <fstream>
#include <string>

#include "config/presets.hpp"
#include "config/scenario.hpp"
#include "runner/runner.hpp"

using orchsim::config::ConfigError;

struct orchsim_scenario {
    orchsim::config::Scenario scenario;
    mutable std::string json_cache;
};

struct orchsim_result {
    orchsim::runner::ExecutionResult result;
};

namespace {

thread_local std::string g_last_error;

orchsim_status fail(orchsim_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
orchsim_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        return fail(ORCHSIM_ERROR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(ORCHSIM_ERROR_INTERNAL, e.what());
    }
}

}  // namespace

extern "C" {

const char* orchsim_version(void) { return "0.1.0"; }

const char* orchsim_last_error(void) { return g_last_error.c_str(); }

size_t orchsim_preset_count(void) { return orchsim::config::preset_list().size(); }

const char* orchsim_preset_name(size_t index) {
    const auto& presets = orchsim::config::preset_list();
    return index < presets.size() ? presets[index].name.c_str() : nullptr;
}

const char* orchsim_preset_description(size_t index) {
    const auto& presets = orchsim::config::preset_list();
    return index < presets.size() ? presets[index].description.c_str() : nullptr;
}

orchsim_status orchsim_scenario_from_preset(const char* name, orchsim_scenario** out) {
    if (name == nullptr || out == nullptr) {
        return fail(ORCHSIM_ERROR_INVALID_ARGUMENT, "name and out must be non-null");
    }
    return guarded([&] {
        auto* handle = new orchsim_scenario{orchsim::config::preset_scenario(name), {}};
        *out = handle;
        return ORCHSIM_OK;
    });
}

orchsim_status orchsim_scenario_from_file(const char* path, orchsim_scenario** out) {
    if (path == nullptr || out == nullptr) {
        return fail(ORCHSIM_ERROR_INVALID_ARGUMENT, "path and out must be non-null");
    }
    return guarded([&] {
        auto* handle = new orchsim_scenario{orchsim::config::parse_scenario_file(path), {}};
        *out = handle;
        return ORCHSIM_OK;
    });
}

const char* orchsim_scenario_name(const orchsim_scenario* scenario) {
    return scenario ? scenario->scenario.name.c_str() : nullptr;
}

const char* orchsim_scenario_json(const orchsim_scenario* scenario) {
    if (scenario == nullptr) {
        return nullptr;
    }
    scenario->json_cache = scenario->scenario.canonical_json();
    return scenario->json_cache.c_str();
}

orchsim_status orchsim_scenario_set_seeds(orchsim_scenario* scenario, const long long* seeds,
                                          size_t count) {
    if (scenario == nullptr || seeds == nullptr || count == 0) {
        return fail(ORCHSIM_ERROR_INVALID_ARGUMENT, "a non-empty seed list is required");
    }
    for (size_t i = 0; i < count; ++i) {
        if (seeds[i] < 0) {
            return fail(ORCHSIM_ERROR_CONFIG, "seeds must be non-negative");
        }
    }
    scenario->scenario.seeds.assign(seeds, seeds + count);
    return ORCHSIM_OK;
}

orchsim_status orchsim_scenario_load_calibration(orchsim_scenario* scenario, const char* path) {
    if (scenario == nullptr || path == nullptr) {
        return fail(ORCHSIM_ERROR_INVALID_ARGUMENT, "scenario and path must be non-null");
    }
    if (scenario->scenario.kind != orchsim::config::ExperimentKind::Batch) {
        return fail(ORCHSIM_ERROR_CONFIG, "calibration applies to batch scenarios only");
    }
    return guarded([&] {
        try {
            scenario->scenario.batch.calibration = orchsim::batch::load_calibration_file(path);
        } catch (const std::exception& e) {
            return fail(ORCHSIM_ERROR_CONFIG, e.what());
        }
        return ORCHSIM_OK;
    });
}

orchsim_status orchsim_scenario_set_dispatch_log(orchsim_scenario* scenario, int enabled) {
    if (scenario == nullptr) {
        return fail(ORCHSIM_ERROR_INVALID_ARGUMENT, "scenario must be non-null");
    }
    scenario->scenario.emit_dispatch_log = enabled != 0;
    return ORCHSIM_OK;
}

void orchsim_scenario_free(orchsim_scenario* scenario) { delete scenario; }

orchsim_status orchsim_run(const orchsim_scenario* scenario, orchsim_result** out) {
    if (scenario == nullptr || out == nullptr) {
        return fail(ORCHSIM_ERROR_INVALID_ARGUMENT, "scenario and out must be non-null");
    }
    return guarded([&] {
        auto* handle = new orchsim_result{orchsim::runner::execute(scenario->scenario)};
        *out = handle;
        return ORCHSIM_OK;
    });
}

orchsim_status orchsim_result_write_reports(const orchsim_result* result, const char* out_dir) {
    if (result == nullptr || out_dir == nullptr) {
        return fail(ORCHSIM_ERROR_INVALID_ARGUMENT, "result and out_dir must be non-null");
    }
    return guarded([&] {
        try {
            orchsim::metrics::write_reports(result->result.report, out_dir);
            for (const auto& [label, lines] : result->result.dispatch_logs) {
                const std::string path = std::string(out_dir) + "/dispatch_" + label + ".log";
                std::ofstream log(path, std::ios::binary);
                if (!log) {
                    throw std::runtime_error("cannot write " + path);
                }
                log << lines;
            }
        } catch (const std::exception& e) {
            return fail(ORCHSIM_ERROR_IO, e.what());
        }
        return ORCHSIM_OK;
    });
}

size_t orchsim_result_assertion_count(const orchsim_result* result) {
    return result ? result->result.assertions.size() : 0;
}

const char* orchsim_result_assertion_text(const orchsim_result* result, size_t index) {
    if (result == nullptr || index >= result->result.assertions.size()) {
        return nullptr;
    }
    return result->result.assertions[index].text.c_str();
}

int orchsim_result_assertion_passed(const orchsim_result* result, size_t index) {
    if (result == nullptr || index >= result->result.assertions.size()) {
        return 0;
    }
    return result->result.assertions[index].passed ? 1 : 0;
}

int orchsim_result_all_assertions_passed(const orchsim_result* result) {
    return result && result->result.all_assertions_passed() ? 1 : 0;
}

void orchsim_result_free(orchsim_result* result) { delete result; }

}  // extern "C"
