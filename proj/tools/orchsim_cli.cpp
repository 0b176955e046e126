// Command-line front end for the simulator; talks to the core exclusively
// through the C API in orchsim.h.
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orchsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertionFailure = 1;
constexpr int kExitConfigError = 2;

int status_to_exit(orchsim_status status) {
    switch (status) {
        case ORCHSIM_OK: return kExitOk;
        case ORCHSIM_ERROR_ASSERTION: return kExitAssertionFailure;
        default: return kExitConfigError;
    }
}

struct ScenarioHandle {
    orchsim_scenario* ptr = nullptr;
    ~ScenarioHandle() { orchsim_scenario_free(ptr); }
};

struct ResultHandle {
    orchsim_result* ptr = nullptr;
    ~ResultHandle() { orchsim_result_free(ptr); }
};

orchsim_status load_scenario(const std::string& target, ScenarioHandle& scenario) {
    if (std::filesystem::exists(target)) {
        return orchsim_scenario_from_file(target.c_str(), &scenario.ptr);
    }
    return orchsim_scenario_from_preset(target.c_str(), &scenario.ptr);
}

int cmd_list_presets() {
    for (size_t i = 0; i < orchsim_preset_count(); ++i) {
        std::printf("%-18s %s\n", orchsim_preset_name(i), orchsim_preset_description(i));
    }
    return kExitOk;
}

int cmd_validate(const std::string& target) {
    ScenarioHandle scenario;
    const orchsim_status status = load_scenario(target, scenario);
    if (status != ORCHSIM_OK) {
        std::fprintf(stderr, "invalid: %s\n", orchsim_last_error());
        return kExitConfigError;
    }
    std::printf("ok: %s\n", orchsim_scenario_name(scenario.ptr));
    return kExitOk;
}

int cmd_run(const std::string& target, const std::vector<long long>& seeds,
            const std::string& out_dir, const std::string& calibration, bool dispatch_log) {
    ScenarioHandle scenario;
    orchsim_status status = load_scenario(target, scenario);
    if (status != ORCHSIM_OK) {
        std::fprintf(stderr, "error: %s\n", orchsim_last_error());
        return status_to_exit(status);
    }
    if (!seeds.empty()) {
        status = orchsim_scenario_set_seeds(scenario.ptr, seeds.data(), seeds.size());
        if (status != ORCHSIM_OK) {
            std::fprintf(stderr, "error: %s\n", orchsim_last_error());
            return status_to_exit(status);
        }
    }
    if (!calibration.empty()) {
        status = orchsim_scenario_load_calibration(scenario.ptr, calibration.c_str());
        if (status != ORCHSIM_OK) {
            std::fprintf(stderr, "error: %s\n", orchsim_last_error());
            return status_to_exit(status);
        }
    }
    orchsim_scenario_set_dispatch_log(scenario.ptr, dispatch_log ? 1 : 0);

    ResultHandle result;
    status = orchsim_run(scenario.ptr, &result.ptr);
    if (status != ORCHSIM_OK) {
        std::fprintf(stderr, "error: %s\n", orchsim_last_error());
        return status_to_exit(status);
    }

    const std::string dir =
        out_dir.empty() ? std::string("orchsim-out/") + orchsim_scenario_name(scenario.ptr)
                        : out_dir;
    status = orchsim_result_write_reports(result.ptr, dir.c_str());
    if (status != ORCHSIM_OK) {
        std::fprintf(stderr, "error: %s\n", orchsim_last_error());
        return status_to_exit(status);
    }

    const size_t count = orchsim_result_assertion_count(result.ptr);
    for (size_t i = 0; i < count; ++i) {
        std::printf("%s  %s\n", orchsim_result_assertion_passed(result.ptr, i) ? "pass" : "FAIL",
                    orchsim_result_assertion_text(result.ptr, i));
    }
    std::printf("reports written to %s\n", dir.c_str());
    if (!orchsim_result_all_assertions_passed(result.ptr)) {
        return kExitAssertionFailure;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orchsim - deterministic simulator of a GPU batch + serving stack"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a preset or scenario file");
    std::string target;
    std::vector<long long> seeds;
    std::string out_dir;
    std::string calibration;
    bool dispatch_log = false;
    run->add_option("target", target, "preset name or scenario file path")->required();
    run->add_option("--seeds", seeds, "seeds to run (defaults to the scenario's list)")
        ->delimiter(',');
    run->add_option("--out", out_dir, "output directory (default orchsim-out/<name>)");
    run->add_option("--calibration", calibration, "calibration file overriding the scenario");
    run->add_flag("--emit-dispatch-log", dispatch_log, "write per-run dispatch logs");

    auto* list = app.add_subcommand("list-presets", "list the bundled experiment presets");

    auto* validate = app.add_subcommand("validate", "parse and validate a scenario");
    std::string validate_target;
    validate->add_option("target", validate_target, "preset name or scenario file path")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    if (list->parsed()) {
        return cmd_list_presets();
    }
    if (validate->parsed()) {
        return cmd_validate(validate_target);
    }
    return cmd_run(target, seeds, out_dir, calibration, dispatch_log);
}
