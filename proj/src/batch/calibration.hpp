#pragma once
#include <map>
#include <string>

#include "batch/trace.hpp"
#include "core/time.hpp"

namespace orchsim::batch {

// Real-time-factor model: execution seconds per second of input audio for a
// (model class, device class) pair, plus a per-job startup constant covering
// container and model-load time.
struct CalibrationParams {
    // key: (model class name, device class name)
    std::map<std::pair<std::string, std::string>, double> rtf;
    double startup_overhead_s = 0.0;

    double rtf_for(ModelClass c, const std::string& device_class) const;
    void validate() const;
};

CalibrationParams default_calibration();

// Flat key-value text: `rtf.<class>.<device-class>=<value>` and
// `startup_overhead_s=<value>`; '#' starts a comment.
CalibrationParams load_calibration_file(const std::string& path);

std::string calibration_digest(const CalibrationParams& calib);

TimeMs exec_duration_ms(const JobSpec& job, const std::string& device_class,
                        const CalibrationParams& calib);

}  // namespace orchsim::batch
