#include "config/assertions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "metrics/report.hpp"
#include "metrics/stats.hpp"

namespace orchsim::config {

using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct BatchView {
    const std::vector<batch::BatchRunResult>& runs;

    std::vector<const batch::BatchRunResult*> arm_runs(const std::string& label) const {
        std::vector<const batch::BatchRunResult*> out;
        for (const auto& run : runs) {
            if (run.arm_label == label) {
                out.push_back(&run);
            }
        }
        if (out.empty()) {
            throw ConfigError("assertion references unknown arm '" + label + "'");
        }
        return out;
    }

    std::vector<double> pooled_exec_minutes(const std::string& label) const {
        std::vector<double> out;
        for (const auto* run : arm_runs(label)) {
            for (const auto& job : run->jobs) {
                out.push_back(ms_to_minutes(job.exec_ms));
            }
        }
        return out;
    }

    double makespan_median_minutes(const std::string& label) const {
        std::vector<double> makespans;
        for (const auto* run : arm_runs(label)) {
            makespans.push_back(ms_to_minutes(run->makespan_ms));
        }
        return metrics::percentile(makespans, 50.0);
    }
};

struct ServingView {
    const std::vector<serving::ServingRunResult>& runs;
    const Scenario& scenario;

    std::vector<double> samples(const std::string& strategy, const std::string& concurrency,
                                bool e2e) const {
        int level = -1;  // -1 = pooled
        if (concurrency == "top") {
            level = *std::max_element(scenario.serving.concurrency_levels.begin(),
                                      scenario.serving.concurrency_levels.end());
        } else if (concurrency != "all") {
            level = std::stoi(concurrency);
        }
        std::vector<double> out;
        for (const auto& run : runs) {
            if (serving::to_string(run.strategy) != strategy) {
                continue;
            }
            for (const auto& rec : run.records) {
                if (level >= 0 && rec.concurrency != level) {
                    continue;
                }
                out.push_back(static_cast<double>(e2e ? rec.e2e_ms() : rec.ttft_ms()));
            }
        }
        if (out.empty()) {
            throw ConfigError("assertion references strategy '" + strategy +
                              "' with no recorded requests");
        }
        return out;
    }

    double hit_rate(const std::string& strategy) const {
        std::size_t hits = 0, total = 0;
        for (const auto& run : runs) {
            if (serving::to_string(run.strategy) != strategy) {
                continue;
            }
            for (const auto& rec : run.records) {
                ++total;
                if (rec.cached_tokens > 0) {
                    ++hits;
                }
            }
        }
        if (total == 0) {
            throw ConfigError("assertion references strategy '" + strategy +
                              "' with no recorded requests");
        }
        return static_cast<double>(hits) / static_cast<double>(total);
    }
};

AssertionResult make(const std::string& text, bool passed) {
    return AssertionResult{text, passed};
}

}  // namespace

std::vector<AssertionResult> evaluate_assertions(
    const Scenario& scenario, const std::vector<batch::BatchRunResult>& batch_runs,
    const std::vector<serving::ServingRunResult>& serving_runs) {
    std::vector<AssertionResult> results;
    BatchView batch{batch_runs};
    ServingView serving{serving_runs, scenario};

    for (const json& a : scenario.assertions) {
        const std::string check = a.at("check").get<std::string>();

        if (check == "queue_time_zero") {
            const std::string arm = a.at("arm").get<std::string>();
            bool ok = true;
            for (const auto* run : batch.arm_runs(arm)) {
                for (const auto& job : run->jobs) {
                    ok = ok && job.queue_ms == 0;
                }
            }
            results.push_back(make("queue_time_zero[" + arm + "]", ok));
        } else if (check == "makespan_median_minutes") {
            const std::string arm = a.at("arm").get<std::string>();
            const double target = a.at("target").get<double>();
            const double tol = a.at("tolerance_pct").get<double>() / 100.0;
            const double got = batch.makespan_median_minutes(arm);
            const bool ok = got >= target * (1 - tol) && got <= target * (1 + tol);
            results.push_back(make("makespan_median_minutes[" + arm + "]: " + num(got) +
                                       " vs " + num(target) + " +/-" +
                                       num(100 * tol) + "%",
                                   ok));
        } else if (check == "exec_median_minutes") {
            const std::string arm = a.at("arm").get<std::string>();
            const double target = a.at("target").get<double>();
            const double tol = a.at("tolerance_pct").get<double>() / 100.0;
            const double got = metrics::percentile(batch.pooled_exec_minutes(arm), 50.0);
            const bool ok = got >= target * (1 - tol) && got <= target * (1 + tol);
            results.push_back(make("exec_median_minutes[" + arm + "]: " + num(got) + " vs " +
                                       num(target) + " +/-" + num(100 * tol) + "%",
                                   ok));
        } else if (check == "admission_order_prefix") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::size_t skip = a.at("skip").get<std::size_t>();
            std::vector<std::string> expect;
            for (const json& id : a.at("expect")) {
                expect.push_back(id.get<std::string>());
            }
            bool ok = true;
            for (const auto* run : batch.arm_runs(arm)) {
                if (run->admission_order.size() < skip + expect.size()) {
                    ok = false;
                    break;
                }
                for (std::size_t i = 0; i < expect.size(); ++i) {
                    ok = ok && run->admission_order[skip + i] == expect[i];
                }
            }
            results.push_back(make("admission_order_prefix[" + arm + ",skip=" +
                                       std::to_string(skip) + "]",
                                   ok));
        } else if (check == "peak_concurrency_between") {
            const std::string arm = a.at("arm").get<std::string>();
            const int lo = a.at("min").get<int>();
            const int hi = a.at("max").get<int>();
            bool ok = true;
            int seen = 0;
            for (const auto* run : batch.arm_runs(arm)) {
                seen = run->peak_concurrent_jobs;
                ok = ok && seen >= lo && seen <= hi;
            }
            results.push_back(make("peak_concurrency_between[" + arm + "]: " +
                                       std::to_string(seen) + " in [" + std::to_string(lo) +
                                       ", " + std::to_string(hi) + "]",
                                   ok));
        } else if (check == "mean_completion_ratio_between") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            const double lo = a.at("min").get<double>();
            const double hi = a.at("max").get<double>();
            const double ratio = metrics::mean(batch.pooled_exec_minutes(arm)) /
                                 metrics::mean(batch.pooled_exec_minutes(ref));
            const bool ok = ratio >= lo && ratio <= hi;
            results.push_back(make("mean_completion_ratio_between[" + arm + "/" + ref +
                                       "]: " + num(ratio) + " in [" + num(lo) + ", " + num(hi) +
                                       "]",
                                   ok));
        } else if (check == "mean_completion_reduction_pct") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            const double min_pct = a.at("min_pct").get<double>();
            const double reduction = 100.0 * (1.0 - metrics::mean(batch.pooled_exec_minutes(arm)) /
                                                        metrics::mean(batch.pooled_exec_minutes(ref)));
            results.push_back(make("mean_completion_reduction_pct[" + arm + " vs " + ref +
                                       "]: " + num(reduction) + " >= " + num(min_pct),
                                   reduction >= min_pct));
        } else if (check == "p95_completion_reduction_pct") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            const double min_pct = a.at("min_pct").get<double>();
            const double reduction =
                100.0 * (1.0 - metrics::percentile(batch.pooled_exec_minutes(arm), 95.0) /
                                   metrics::percentile(batch.pooled_exec_minutes(ref), 95.0));
            results.push_back(make("p95_completion_reduction_pct[" + arm + " vs " + ref +
                                       "]: " + num(reduction) + " >= " + num(min_pct),
                                   reduction >= min_pct));
        } else if (check == "preemptions_occur") {
            const std::string arm = a.at("arm").get<std::string>();
            bool ok = true;
            for (const auto* run : batch.arm_runs(arm)) {
                ok = ok && run->preemptions > 0;
            }
            results.push_back(make("preemptions_occur[" + arm + "]", ok));
        } else if (check == "borrowing_occurs") {
            const std::string arm = a.at("arm").get<std::string>();
            bool ok = true;
            for (const auto* run : batch.arm_runs(arm)) {
                ok = ok && run->borrow_admissions > 0;
            }
            results.push_back(make("borrowing_occurs[" + arm + "]", ok));
        } else if (check == "slice_padding_witness") {
            const std::string arm = a.at("arm").get<std::string>();
            bool ok = true;
            for (const auto* run : batch.arm_runs(arm)) {
                ok = ok && run->padding_witness;
            }
            results.push_back(make("slice_padding_witness[" + arm + "]", ok));
        } else if (check == "trace_class_mean_within_pct") {
            const std::string klass = a.at("class").get<std::string>();
            const double target = a.at("target_s").get<double>();
            const double tol = a.at("tolerance_pct").get<double>() / 100.0;
            bool ok = true;
            double seen = 0.0;
            for (const auto& run : batch_runs) {
                const auto stats = batch::trace_stats(run.trace, batch::model_class_from(klass));
                seen = stats.mean_s;
                ok = ok && std::abs(stats.mean_s - target) <= tol * target;
            }
            results.push_back(make("trace_class_mean_within_pct[" + klass + "]: " + num(seen) +
                                       " vs " + num(target),
                                   ok));
        } else if (check == "trace_within_bounds") {
            const std::string klass = a.at("class").get<std::string>();
            const double lo = a.at("min_s").get<double>();
            const double hi = a.at("max_s").get<double>();
            bool ok = true;
            for (const auto& run : batch_runs) {
                const auto stats = batch::trace_stats(run.trace, batch::model_class_from(klass));
                ok = ok && stats.min_s >= lo && stats.max_s <= hi;
            }
            results.push_back(make("trace_within_bounds[" + klass + "]", ok));
        } else if (check == "ttft_gap_band_per_level") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            const double lo = a.at("min_ms").get<double>();
            const double hi = a.at("max_ms").get<double>();
            const bool monotone = a.at("monotone").get<bool>();
            bool ok = true;
            double previous = -1e18;
            std::string gaps;
            std::vector<int> levels = scenario.serving.concurrency_levels;
            std::sort(levels.begin(), levels.end());
            for (int level : levels) {
                const double gap =
                    metrics::mean(serving.samples(arm, std::to_string(level), false)) -
                    metrics::mean(serving.samples(ref, std::to_string(level), false));
                gaps += (gaps.empty() ? "" : " ") + num(gap);
                ok = ok && gap >= lo && gap <= hi;
                if (monotone) {
                    ok = ok && gap >= previous - 1e-9;
                }
                previous = gap;
            }
            results.push_back(make("ttft_gap_band_per_level[" + arm + "-" + ref + "]: " + gaps,
                                   ok));
        } else if (check == "ttft_gap_similar") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            const double max_abs = a.at("max_abs_ms").get<double>();
            bool ok = true;
            for (int level : scenario.serving.concurrency_levels) {
                const double gap =
                    metrics::mean(serving.samples(arm, std::to_string(level), false)) -
                    metrics::mean(serving.samples(ref, std::to_string(level), false));
                ok = ok && std::abs(gap) <= max_abs;
            }
            results.push_back(make("ttft_gap_similar[" + arm + "-" + ref + "]", ok));
        } else if (check == "ttft_mean_band_ms") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string level = a.at("concurrency").get<std::string>();
            const double lo = a.at("min_ms").get<double>();
            const double hi = a.at("max_ms").get<double>();
            const double got = metrics::mean(serving.samples(arm, level, false));
            results.push_back(make("ttft_mean_band_ms[" + arm + "," + level + "]: " + num(got) +
                                       " in [" + num(lo) + ", " + num(hi) + "]",
                                   got >= lo && got <= hi));
        } else if (check == "ttft_mean_ratio_min") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            const std::string level = a.at("concurrency").get<std::string>();
            const double min_ratio = a.at("min_ratio").get<double>();
            const double ratio = metrics::mean(serving.samples(arm, level, false)) /
                                 metrics::mean(serving.samples(ref, level, false));
            results.push_back(make("ttft_mean_ratio_min[" + arm + "/" + ref + "," + level +
                                       "]: " + num(ratio) + " >= " + num(min_ratio),
                                   ratio >= min_ratio));
        } else if (check == "ttft_p99_ratio_min") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            const std::string level = a.at("concurrency").get<std::string>();
            const double min_ratio = a.at("min_ratio").get<double>();
            const double ratio =
                metrics::percentile(serving.samples(arm, level, false), 99.0) /
                metrics::percentile(serving.samples(ref, level, false), 99.0);
            results.push_back(make("ttft_p99_ratio_min[" + arm + "/" + ref + "," + level +
                                       "]: " + num(ratio) + " >= " + num(min_ratio),
                                   ratio >= min_ratio));
        } else if (check == "e2e_mean_gap_min_ms") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            const std::string level = a.at("concurrency").get<std::string>();
            const double min_ms = a.at("min_ms").get<double>();
            const double gap = metrics::mean(serving.samples(arm, level, true)) -
                               metrics::mean(serving.samples(ref, level, true));
            results.push_back(make("e2e_mean_gap_min_ms[" + arm + "-" + ref + "," + level +
                                       "]: " + num(gap) + " >= " + num(min_ms),
                                   gap >= min_ms));
        } else if (check == "e2e_p99_gap_min_ms") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            const std::string level = a.at("concurrency").get<std::string>();
            const double min_ms = a.at("min_ms").get<double>();
            const double gap = metrics::percentile(serving.samples(arm, level, true), 99.0) -
                               metrics::percentile(serving.samples(ref, level, true), 99.0);
            results.push_back(make("e2e_p99_gap_min_ms[" + arm + "-" + ref + "," + level +
                                       "]: " + num(gap) + " >= " + num(min_ms),
                                   gap >= min_ms));
        } else if (check == "hit_rate_min" || check == "hit_rate_max") {
            const std::string arm = a.at("arm").get<std::string>();
            const double value = a.at("value").get<double>();
            const double got = serving.hit_rate(arm);
            const bool ok = check == "hit_rate_min" ? got >= value : got <= value;
            results.push_back(make(check + "[" + arm + "]: " + num(got) + " vs " + num(value),
                                   ok));
        } else if (check == "ttft_dominance_per_level") {
            const std::string arm = a.at("arm").get<std::string>();
            const std::string ref = a.at("reference").get<std::string>();
            bool ok = true;
            for (const auto& run : serving_runs) {
                if (serving::to_string(run.strategy) != arm) {
                    continue;
                }
                for (const auto& other : serving_runs) {
                    if (serving::to_string(other.strategy) != ref || other.seed != run.seed) {
                        continue;
                    }
                    for (int level : scenario.serving.concurrency_levels) {
                        std::vector<double> a_ttft, b_ttft;
                        for (const auto& rec : run.records) {
                            if (rec.concurrency == level) {
                                a_ttft.push_back(static_cast<double>(rec.ttft_ms()));
                            }
                        }
                        for (const auto& rec : other.records) {
                            if (rec.concurrency == level) {
                                b_ttft.push_back(static_cast<double>(rec.ttft_ms()));
                            }
                        }
                        ok = ok && metrics::mean(a_ttft) <= metrics::mean(b_ttft);
                        ok = ok && metrics::sample_variance(a_ttft) <=
                                       metrics::sample_variance(b_ttft);
                    }
                }
            }
            results.push_back(make("ttft_dominance_per_level[" + arm + " <= " + ref + "]", ok));
        } else {
            throw ConfigError("unknown assertion check '" + check + "'");
        }
    }
    return results;
}

}  // namespace orchsim::config
