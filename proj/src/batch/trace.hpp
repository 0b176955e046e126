#pragma once
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace orchsim::batch {

enum class ModelClass { Medium, Large };

const char* to_string(ModelClass c);
ModelClass model_class_from(const std::string& name);

// One transcription job: which model serves it and how much audio it carries.
struct JobSpec {
    std::string job_id;  // e.g. "medium-7"
    ModelClass model_class = ModelClass::Medium;
    double audio_seconds = 0.0;
    int submit_index = 0;
};

struct ClassDistribution {
    double mean_s = 0.0;
    double sd_s = 0.0;
    double min_s = 0.0;
    double max_s = 0.0;
};

enum class SubmissionOrder { MediumFirst, LargeFirst };

struct TraceSpec {
    enum class Mode { Synthetic, File };
    Mode mode = Mode::Synthetic;
    int jobs_per_class = 16;
    SubmissionOrder order = SubmissionOrder::MediumFirst;
    ClassDistribution medium;
    ClassDistribution large;
    std::string file_path;
};

// Synthetic mode draws audio durations from a log-normal fitted to each
// class's (mean, sd), clipped to [min, max], resampling the class until its
// empirical mean lands within 10% of the configured mean. File mode reads
// durations verbatim (CSV: job_id,model_class,audio_seconds).
std::vector<JobSpec> generate_trace(const TraceSpec& spec, RngStream& rng);

std::vector<JobSpec> load_trace_file(const std::string& path, int expected_jobs_per_class);

struct TraceClassStats {
    double mean_s = 0.0;
    double min_s = 0.0;
    double max_s = 0.0;
    int count = 0;
};
TraceClassStats trace_stats(const std::vector<JobSpec>& trace, ModelClass c);

}  // namespace orchsim::batch
