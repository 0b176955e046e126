#include "batch/calibration.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "core/hash.hpp"

namespace orchsim::batch {

double CalibrationParams::rtf_for(ModelClass c, const std::string& device_class) const {
    auto it = rtf.find({to_string(c), device_class});
    if (it == rtf.end()) {
        throw std::invalid_argument(std::string("no calibration entry for rtf.") + to_string(c) +
                                    "." + device_class);
    }
    return it->second;
}

void CalibrationParams::validate() const {
    if (startup_overhead_s < 0.0) {
        throw std::invalid_argument("startup_overhead_s must be non-negative");
    }
    for (const auto& [key, value] : rtf) {
        if (!(value > 0.0)) {
            throw std::invalid_argument("rtf." + key.first + "." + key.second +
                                        " must be positive");
        }
        // larger model never transcribes faster on the same device class
        if (key.first == "medium") {
            auto large = rtf.find({"large", key.second});
            if (large != rtf.end() && large->second <= value) {
                throw std::invalid_argument("rtf.large." + key.second +
                                            " must exceed rtf.medium." + key.second);
            }
        }
        // a slice never beats the full device for the same class
        if (key.second != "full") {
            auto full = rtf.find({key.first, "full"});
            if (full != rtf.end() && value <= full->second) {
                throw std::invalid_argument("rtf." + key.first + "." + key.second +
                                            " must exceed rtf." + key.first + ".full");
            }
        }
    }
}

CalibrationParams default_calibration() {
    // Fitted once against the reference deployment's class-median run times
    // (full GPU), with a uniform 1.21x slowdown for the sliced device classes
    // and a 60 s per-job startup constant.
    CalibrationParams calib;
    calib.rtf[{"medium", "full"}] = 0.118632;
    calib.rtf[{"medium", "1g.5gb"}] = 0.143545;
    calib.rtf[{"large", "full"}] = 0.342324;
    calib.rtf[{"large", "3g.20gb"}] = 0.414212;
    calib.startup_overhead_s = 60.0;
    calib.validate();
    return calib;
}

CalibrationParams load_calibration_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open calibration file: " + path);
    }
    CalibrationParams calib;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const double value = std::stod(line.substr(eq + 1));
        if (key == "startup_overhead_s") {
            calib.startup_overhead_s = value;
        } else if (key.rfind("rtf.", 0) == 0) {
            const std::string rest = key.substr(4);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": expected rtf.<class>.<device-class>");
            }
            // device class names may themselves contain dots (e.g. 1g.5gb)
            calib.rtf[{rest.substr(0, dot), rest.substr(dot + 1)}] = value;
        } else {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown key '" +
                                     key + "'");
        }
    }
    calib.validate();
    return calib;
}

std::string calibration_digest(const CalibrationParams& calib) {
    std::ostringstream text;
    for (const auto& [key, value] : calib.rtf) {
        text << "rtf." << key.first << "." << key.second << "=" << value << "\n";
    }
    text << "startup_overhead_s=" << calib.startup_overhead_s << "\n";
    std::ostringstream out;
    out << std::hex << fnv1a64(text.str());
    return out.str();
}

TimeMs exec_duration_ms(const JobSpec& job, const std::string& device_class,
                        const CalibrationParams& calib) {
    const double rtf = calib.rtf_for(job.model_class, device_class);
    const double seconds = job.audio_seconds * rtf + calib.startup_overhead_s;
    return static_cast<TimeMs>(std::llround(seconds)) * 1000;
}

}  // namespace orchsim::batch
