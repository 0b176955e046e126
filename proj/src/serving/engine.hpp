#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "core/time.hpp"
#include "serving/corpus.hpp"
#include "serving/prefix_cache.hpp"

namespace orchsim::serving {

enum class Strategy { ClusterIpRoundRobin, GatewayOnly, GatewayEppRandom, GatewayEppPrecise };

const char* to_string(Strategy s);
Strategy strategy_from(const std::string& name);
bool uses_endpoint_picker(Strategy s);

struct LatencyParams {
    // base gateway hop per strategy
    std::map<std::string, double> gateway_overhead_ms;
    // endpoint-picker overhead as (concurrency breakpoint, ms) steps
    std::vector<std::pair<int, double>> epp_overhead_ms;
    double prefill_ms_per_token = 0.06;
    double ttft_floor_ms = 60.0;
    double decode_ms_per_token = 20.0;

    double gateway_overhead_for(Strategy s) const;
    double epp_overhead_for(int concurrency) const;
};

struct RequestRecord {
    int request_id = 0;
    std::string prompt_id;
    int concurrency = 0;
    int replica = -1;
    TimeMs arrive_ms = 0;
    TimeMs ttft_at_ms = 0;
    TimeMs done_at_ms = 0;
    std::int64_t cached_tokens = 0;
    std::int64_t prefill_tokens = 0;
    int output_tokens = 0;

    TimeMs ttft_ms() const { return ttft_at_ms - arrive_ms; }
    TimeMs e2e_ms() const { return done_at_ms - arrive_ms; }
};

struct ServingConfig {
    int replicas = 8;
    std::int64_t kv_capacity_tokens = 143360;
    int block_size_tokens = 16;
    std::vector<int> concurrency_levels = {1, 2, 4, 8, 16, 32, 64, 128, 256};
    CorpusSpec corpus;
    LatencyParams latency;
};

struct ServingRunResult {
    Strategy strategy = Strategy::GatewayEppRandom;
    std::uint64_t seed = 0;
    std::vector<RequestRecord> records;  // all levels, completion order
    std::uint64_t dispatch_digest = 0;
};

// Runs the closed-loop benchmark for one strategy across every concurrency
// level, reusing the replica fleet (and its caches) between levels the way a
// level sweep against a long-lived deployment would.
ServingRunResult run_serving_arm(const ServingConfig& config, Strategy strategy,
                                 std::uint64_t seed,
                                 const std::function<void(const std::string&)>& log_sink = {});

}  // namespace orchsim::serving
