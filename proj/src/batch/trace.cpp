#include "batch/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace orchsim::batch {

const char* to_string(ModelClass c) {
    return c == ModelClass::Medium ? "medium" : "large";
}

ModelClass model_class_from(const std::string& name) {
    if (name == "medium") return ModelClass::Medium;
    if (name == "large") return ModelClass::Large;
    throw std::invalid_argument("unknown model class: " + name);
}

namespace {

std::vector<double> sample_class(const ClassDistribution& dist, int count, RngStream& rng) {
    if (dist.mean_s <= 0 || dist.sd_s < 0 || dist.min_s <= 0 || dist.max_s < dist.min_s) {
        throw std::invalid_argument("invalid trace distribution parameters");
    }
    // log-normal fitted by moments
    const double cv2 = (dist.sd_s / dist.mean_s) * (dist.sd_s / dist.mean_s);
    const double sigma = std::sqrt(std::log(1.0 + cv2));
    const double mu = std::log(dist.mean_s) - 0.5 * sigma * sigma;

    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<double> samples(static_cast<std::size_t>(count));
        double sum = 0.0;
        for (double& s : samples) {
            s = std::clamp(rng.lognormal(mu, sigma), dist.min_s, dist.max_s);
            sum += s;
        }
        const double mean = sum / count;
        if (std::abs(mean - dist.mean_s) <= 0.10 * dist.mean_s) {
            return samples;
        }
    }
    throw std::runtime_error("trace generation failed to match the class mean within 10%");
}

}  // namespace

std::vector<JobSpec> generate_trace(const TraceSpec& spec, RngStream& rng) {
    if (spec.mode == TraceSpec::Mode::File) {
        return load_trace_file(spec.file_path, spec.jobs_per_class);
    }
    const std::vector<double> medium = sample_class(spec.medium, spec.jobs_per_class, rng);
    const std::vector<double> large = sample_class(spec.large, spec.jobs_per_class, rng);

    std::vector<JobSpec> trace;
    trace.reserve(static_cast<std::size_t>(2 * spec.jobs_per_class));
    for (int i = 0; i < spec.jobs_per_class; ++i) {
        JobSpec m{"medium-" + std::to_string(i), ModelClass::Medium,
                  medium[static_cast<std::size_t>(i)], 0};
        JobSpec l{"large-" + std::to_string(i), ModelClass::Large,
                  large[static_cast<std::size_t>(i)], 0};
        if (spec.order == SubmissionOrder::MediumFirst) {
            trace.push_back(m);
            trace.push_back(l);
        } else {
            trace.push_back(l);
            trace.push_back(m);
        }
    }
    for (std::size_t i = 0; i < trace.size(); ++i) {
        trace[i].submit_index = static_cast<int>(i);
    }
    return trace;
}

std::vector<JobSpec> load_trace_file(const std::string& path, int expected_jobs_per_class) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open trace file: " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != "job_id,model_class,audio_seconds") {
        throw std::runtime_error("trace file " + path +
                                 ": expected header 'job_id,model_class,audio_seconds'");
    }
    std::vector<JobSpec> trace;
    int counts[2] = {0, 0};
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string job_id, klass, audio;
        if (!std::getline(row, job_id, ',') || !std::getline(row, klass, ',') ||
            !std::getline(row, audio, ',')) {
            throw std::runtime_error("trace file " + path + ": malformed row '" + line + "'");
        }
        JobSpec job;
        job.job_id = job_id;
        job.model_class = model_class_from(klass);
        job.audio_seconds = std::stod(audio);
        if (!(job.audio_seconds > 0.0)) {
            throw std::runtime_error("trace file " + path + ": non-positive duration for " +
                                     job_id);
        }
        job.submit_index = static_cast<int>(trace.size());
        counts[job.model_class == ModelClass::Medium ? 0 : 1] += 1;
        trace.push_back(std::move(job));
    }
    if (counts[0] != expected_jobs_per_class || counts[1] != expected_jobs_per_class) {
        throw std::runtime_error("trace file " + path + ": expected " +
                                 std::to_string(expected_jobs_per_class) +
                                 " jobs per class, got " + std::to_string(counts[0]) +
                                 " medium / " + std::to_string(counts[1]) + " large");
    }
    return trace;
}

TraceClassStats trace_stats(const std::vector<JobSpec>& trace, ModelClass c) {
    TraceClassStats stats;
    double sum = 0.0;
    for (const JobSpec& job : trace) {
        if (job.model_class != c) {
            continue;
        }
        if (stats.count == 0) {
            stats.min_s = stats.max_s = job.audio_seconds;
        }
        stats.min_s = std::min(stats.min_s, job.audio_seconds);
        stats.max_s = std::max(stats.max_s, job.audio_seconds);
        sum += job.audio_seconds;
        stats.count += 1;
    }
    if (stats.count > 0) {
        stats.mean_s = sum / stats.count;
    }
    return stats;
}

}  // namespace orchsim::batch
