#include "metrics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "metrics/stats.hpp"

namespace orchsim::metrics {

namespace {

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

std::vector<std::string> arm_order(const std::vector<batch::BatchRunResult>& runs) {
    std::vector<std::string> order;
    for (const auto& run : runs) {
        if (std::find(order.begin(), order.end(), run.arm_label) == order.end()) {
            order.push_back(run.arm_label);
        }
    }
    return order;
}

}  // namespace

std::vector<BatchConfigAggregate> summarize_batch(const std::vector<batch::BatchRunResult>& runs) {
    std::vector<BatchConfigAggregate> out;
    for (const std::string& label : arm_order(runs)) {
        BatchConfigAggregate agg;
        agg.config = label;
        std::vector<double> makespans;
        std::vector<double> queue, exec, mq, me, lq, le;
        double occ_c = 0.0, occ_m = 0.0;
        int seeds = 0;
        for (const auto& run : runs) {
            if (run.arm_label != label) {
                continue;
            }
            makespans.push_back(static_cast<double>(run.makespan_ms));
            agg.peak_concurrent_jobs = std::max(agg.peak_concurrent_jobs,
                                                run.peak_concurrent_jobs);
            occ_c += run.occupancy.compute;
            occ_m += run.occupancy.memory;
            ++seeds;
            for (const auto& job : run.jobs) {
                if (job.finished_ms < job.pod_created_ms) {
                    throw std::invalid_argument("summarize_batch: unfinished job " + job.job_id);
                }
                queue.push_back(static_cast<double>(job.queue_ms));
                exec.push_back(static_cast<double>(job.exec_ms));
                if (job.model_class == batch::ModelClass::Medium) {
                    mq.push_back(static_cast<double>(job.queue_ms));
                    me.push_back(static_cast<double>(job.exec_ms));
                } else {
                    lq.push_back(static_cast<double>(job.queue_ms));
                    le.push_back(static_cast<double>(job.exec_ms));
                }
            }
        }
        agg.makespan_median_ms = percentile(makespans, 50.0);
        agg.makespan_min_ms = *std::min_element(makespans.begin(), makespans.end());
        agg.makespan_max_ms = *std::max_element(makespans.begin(), makespans.end());
        agg.queue_median_ms = percentile(queue, 50.0);
        agg.queue_p95_ms = percentile(queue, 95.0);
        agg.exec_median_ms = percentile(exec, 50.0);
        if (!mq.empty()) {
            agg.medium_queue_median_ms = percentile(mq, 50.0);
            agg.medium_exec_median_ms = percentile(me, 50.0);
        }
        if (!lq.empty()) {
            agg.large_queue_median_ms = percentile(lq, 50.0);
            agg.large_exec_median_ms = percentile(le, 50.0);
        }
        agg.mean_compute_occupancy = occ_c / seeds;
        agg.mean_memory_occupancy = occ_m / seeds;
        out.push_back(agg);
    }
    return out;
}

std::vector<ServingAggregate> summarize_serving(
    const std::vector<serving::ServingRunResult>& runs) {
    std::vector<std::string> strategies;
    for (const auto& run : runs) {
        const std::string name = serving::to_string(run.strategy);
        if (std::find(strategies.begin(), strategies.end(), name) == strategies.end()) {
            strategies.push_back(name);
        }
    }

    std::vector<ServingAggregate> out;
    for (const std::string& strategy : strategies) {
        std::vector<int> levels;
        for (const auto& run : runs) {
            if (serving::to_string(run.strategy) != strategy) {
                continue;
            }
            for (const auto& rec : run.records) {
                if (std::find(levels.begin(), levels.end(), rec.concurrency) == levels.end()) {
                    levels.push_back(rec.concurrency);
                }
            }
        }
        std::sort(levels.begin(), levels.end());

        const auto aggregate = [&](std::optional<int> level) {
            ServingAggregate agg;
            agg.strategy = strategy;
            agg.concurrency = level ? std::to_string(*level) : "all";
            std::vector<double> ttft, e2e;
            for (const auto& run : runs) {
                if (serving::to_string(run.strategy) != strategy) {
                    continue;
                }
                for (const auto& rec : run.records) {
                    if (level && rec.concurrency != *level) {
                        continue;
                    }
                    ttft.push_back(static_cast<double>(rec.ttft_ms()));
                    e2e.push_back(static_cast<double>(rec.e2e_ms()));
                }
            }
            agg.count = ttft.size();
            if (!ttft.empty()) {
                agg.ttft_mean_ms = mean(ttft);
                agg.ttft_p99_ms = percentile(ttft, 99.0);
                agg.ttft_ci95_ms = ci95_half_width(ttft);
                agg.e2e_mean_ms = mean(e2e);
                agg.e2e_p99_ms = percentile(e2e, 99.0);
                agg.e2e_ci95_ms = ci95_half_width(e2e);
            }
            return agg;
        };

        for (int level : levels) {
            out.push_back(aggregate(level));
        }
        out.push_back(aggregate(std::nullopt));
    }
    return out;
}

namespace {

void write_batch_csv(const RunReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "record,config,seed,job_id,class,created_ms,pod_created_ms,start_ms,finished_ms,"
           "queue_ms,exec_ms,restarts,makespan_ms,peak_concurrent_jobs,mean_compute_occupancy,"
           "mean_memory_occupancy,makespan_median_ms,makespan_min_ms,makespan_max_ms,"
           "queue_median_ms,queue_p95_ms,exec_median_ms,medium_queue_median_ms,"
           "medium_exec_median_ms,large_queue_median_ms,large_exec_median_ms\n";
    for (const std::string& label : arm_order(report.batch_runs)) {
        for (const auto& run : report.batch_runs) {
            if (run.arm_label != label) {
                continue;
            }
            for (const auto& job : run.jobs) {
                out << "job," << label << ',' << run.seed << ',' << job.job_id << ','
                    << batch::to_string(job.model_class) << ',' << job.created_ms << ','
                    << job.pod_created_ms << ',' << job.start_ms << ',' << job.finished_ms << ','
                    << job.queue_ms << ',' << job.exec_ms << ',' << job.restarts
                    << ",,,,,,,,,,,,,,\n";
            }
            out << "run," << label << ',' << run.seed << ",,,,,,,,,," << run.makespan_ms << ','
                << run.peak_concurrent_jobs << ',' << fixed(run.occupancy.compute, 6) << ','
                << fixed(run.occupancy.memory, 6) << ",,,,,,,,,,\n";
        }
    }
    for (const auto& agg : summarize_batch(report.batch_runs)) {
        out << "config," << agg.config << ",,,,,,,,,,,," << agg.peak_concurrent_jobs << ','
            << fixed(agg.mean_compute_occupancy, 6) << ',' << fixed(agg.mean_memory_occupancy, 6)
            << ',' << fixed(agg.makespan_median_ms, 3) << ',' << fixed(agg.makespan_min_ms, 3)
            << ',' << fixed(agg.makespan_max_ms, 3) << ',' << fixed(agg.queue_median_ms, 3) << ','
            << fixed(agg.queue_p95_ms, 3) << ',' << fixed(agg.exec_median_ms, 3) << ','
            << fixed(agg.medium_queue_median_ms, 3) << ',' << fixed(agg.medium_exec_median_ms, 3)
            << ',' << fixed(agg.large_queue_median_ms, 3) << ','
            << fixed(agg.large_exec_median_ms, 3) << "\n";
    }
}

void write_serving_csv(const RunReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "strategy,concurrency,metric,mean,p99,ci95_half_width\n";
    for (const auto& agg : summarize_serving(report.serving_runs)) {
        out << agg.strategy << ',' << agg.concurrency << ",ttft_ms," << fixed(agg.ttft_mean_ms, 3)
            << ',' << fixed(agg.ttft_p99_ms, 3) << ',' << fixed(agg.ttft_ci95_ms, 3) << "\n";
        out << agg.strategy << ',' << agg.concurrency << ",e2e_ms," << fixed(agg.e2e_mean_ms, 3)
            << ',' << fixed(agg.e2e_p99_ms, 3) << ',' << fixed(agg.e2e_ci95_ms, 3) << "\n";
    }
}

void write_serving_requests_csv(const RunReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "strategy,concurrency,seed,request_id,prompt_id,replica,arrive_ms,ttft_ms,e2e_ms,"
           "cached_tokens,prefill_tokens,output_tokens\n";
    for (const auto& run : report.serving_runs) {
        for (const auto& rec : run.records) {
            out << serving::to_string(run.strategy) << ',' << rec.concurrency << ',' << run.seed
                << ',' << rec.request_id << ',' << rec.prompt_id << ',' << rec.replica << ','
                << rec.arrive_ms << ',' << rec.ttft_ms() << ',' << rec.e2e_ms() << ','
                << rec.cached_tokens << ',' << rec.prefill_tokens << ',' << rec.output_tokens
                << "\n";
        }
    }
}

void write_summary(const RunReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "scenario: " << report.scenario_name << "\n";
    out << "seeds:";
    for (std::uint64_t s : report.seeds) {
        out << ' ' << s;
    }
    out << "\n\n";

    if (!report.batch_runs.empty()) {
        out << "batch results (minutes)\n";
        out << "configuration | makespan med (min-max) | queue med/p95 | exec med | "
               "medium q/e | large q/e | peak jobs\n";
        for (const auto& agg : summarize_batch(report.batch_runs)) {
            const auto min = [](double ms) { return ms / 60000.0; };
            out << agg.config << " | " << fixed(min(agg.makespan_median_ms), 1) << " ("
                << fixed(min(agg.makespan_min_ms), 1) << "-" << fixed(min(agg.makespan_max_ms), 1)
                << ") | " << fixed(min(agg.queue_median_ms), 1) << " / "
                << fixed(min(agg.queue_p95_ms), 1) << " | " << fixed(min(agg.exec_median_ms), 1)
                << " | " << fixed(min(agg.medium_queue_median_ms), 1) << " / "
                << fixed(min(agg.medium_exec_median_ms), 1) << " | "
                << fixed(min(agg.large_queue_median_ms), 1) << " / "
                << fixed(min(agg.large_exec_median_ms), 1) << " | " << agg.peak_concurrent_jobs
                << "\n";
        }
        for (const auto& run : report.batch_runs) {
            if (run.peak_layout.empty()) {
                continue;
            }
            out << "\npeak layout (" << run.arm_label << ", seed " << run.seed
                << "): " << run.peak_concurrent_jobs << " jobs;";
            for (std::size_t d = 0; d < run.peak_layout.size(); ++d) {
                out << " dev" << d << "=" << run.peak_layout[d].used_compute << "c/"
                    << run.peak_layout[d].used_memory << "m";
            }
            out << "\n";
            break;  // one layout example is enough for the summary
        }
        out << "\n";
    }

    if (!report.serving_runs.empty()) {
        out << "serving results (milliseconds)\n";
        out << "strategy | concurrency | ttft mean/p99 (ci95) | e2e mean/p99 (ci95)\n";
        for (const auto& agg : summarize_serving(report.serving_runs)) {
            out << agg.strategy << " | " << agg.concurrency << " | "
                << fixed(agg.ttft_mean_ms, 1) << " / " << fixed(agg.ttft_p99_ms, 1) << " ("
                << fixed(agg.ttft_ci95_ms, 1) << ") | " << fixed(agg.e2e_mean_ms, 1) << " / "
                << fixed(agg.e2e_p99_ms, 1) << " (" << fixed(agg.e2e_ci95_ms, 1) << ")\n";
        }
    }
}

void write_meta(const RunReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "scenario=" << report.scenario_name << "\n";
    out << "config_digest=" << report.config_digest << "\n";
    out << "calibration_digest=" << report.calibration_digest << "\n";
    out << "seeds=";
    for (std::size_t i = 0; i < report.seeds.size(); ++i) {
        out << (i ? "," : "") << report.seeds[i];
    }
    out << "\n";
    for (const auto& [label, digest] : report.dispatch_digests) {
        out << "dispatch_digest." << label << "=" << std::hex << digest << std::dec << "\n";
    }
}

}  // namespace

std::vector<std::string> write_reports(const RunReport& report, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir + ": " +
                                 ec.message());
    }
    std::vector<std::string> written;
    const auto emit = [&](const std::string& name, auto&& writer) {
        const std::string path = out_dir + "/" + name;
        writer(path);
        written.push_back(name);
    };

    if (!report.batch_runs.empty()) {
        emit("batch.csv", [&](const std::string& p) { write_batch_csv(report, p); });
    }
    if (!report.serving_runs.empty()) {
        emit("serving.csv", [&](const std::string& p) { write_serving_csv(report, p); });
        emit("serving_requests.csv",
             [&](const std::string& p) { write_serving_requests_csv(report, p); });
    }
    emit("summary.txt", [&](const std::string& p) { write_summary(report, p); });
    emit("resolved_scenario.json", [&](const std::string& p) {
        std::ofstream out(p, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + p);
        }
        out << report.resolved_scenario_json << "\n";
    });
    emit("run_meta.txt", [&](const std::string& p) { write_meta(report, p); });
    return written;
}

}  // namespace orchsim::metrics
