#include "serving/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/event_queue.hpp"
#include "core/rng.hpp"

namespace orchsim::serving {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::ClusterIpRoundRobin: return "clusterip-round-robin";
        case Strategy::GatewayOnly: return "gateway-only";
        case Strategy::GatewayEppRandom: return "gateway-epp-random";
        case Strategy::GatewayEppPrecise: return "gateway-epp-precise";
    }
    return "unknown";
}

Strategy strategy_from(const std::string& name) {
    if (name == "clusterip-round-robin") return Strategy::ClusterIpRoundRobin;
    if (name == "gateway-only") return Strategy::GatewayOnly;
    if (name == "gateway-epp-random") return Strategy::GatewayEppRandom;
    if (name == "gateway-epp-precise") return Strategy::GatewayEppPrecise;
    throw std::invalid_argument("unknown routing strategy: " + name);
}

bool uses_endpoint_picker(Strategy s) {
    return s == Strategy::GatewayEppRandom || s == Strategy::GatewayEppPrecise;
}

double LatencyParams::gateway_overhead_for(Strategy s) const {
    auto it = gateway_overhead_ms.find(to_string(s));
    if (it == gateway_overhead_ms.end()) {
        throw std::invalid_argument(std::string("no gateway overhead configured for ") +
                                    to_string(s));
    }
    return it->second;
}

double LatencyParams::epp_overhead_for(int concurrency) const {
    if (epp_overhead_ms.empty()) {
        throw std::invalid_argument("no endpoint-picker overhead table configured");
    }
    double value = epp_overhead_ms.front().second;
    for (const auto& [breakpoint, ms] : epp_overhead_ms) {
        if (concurrency < breakpoint) {
            break;
        }
        value = ms;
    }
    return value;
}

namespace {

struct Replica {
    PrefixCacheIndex cache;
    TimeMs prefill_busy_until = 0;
    int in_flight = 0;

    Replica(std::int64_t capacity, int block_size) : cache(capacity, block_size) {}
};

struct Gateway {
    // Optimistic per-replica mirrors, updated at dispatch time. Can diverge
    // from the replica index only through eviction; scoring reconciles
    // against the true index when no prefill for the prompt is outstanding.
    std::vector<PrefixCacheIndex> mirrors;
    std::vector<std::map<std::string, int>> pending_prefills;  // replica -> prompt -> count
    std::size_t round_robin_next = 0;
};

struct Router {
    Strategy strategy;
    Gateway& gateway;
    std::vector<Replica>& replicas;
    RngStream& epp_rng;

    int pick(const Prompt& prompt, TimeMs now) {
        switch (strategy) {
            case Strategy::ClusterIpRoundRobin:
            case Strategy::GatewayOnly: {
                const int r = static_cast<int>(gateway.round_robin_next % replicas.size());
                gateway.round_robin_next += 1;
                return r;
            }
            case Strategy::GatewayEppRandom:
                return static_cast<int>(epp_rng.next_below(replicas.size()));
            case Strategy::GatewayEppPrecise:
                break;
        }
        // highest mirror prefix score, then least in flight, then lowest id
        int best = 0;
        std::int64_t best_score = -1;
        for (int r = 0; r < static_cast<int>(replicas.size()); ++r) {
            std::int64_t score = gateway.mirrors[static_cast<std::size_t>(r)].match_tokens(
                prompt.tokens);
            const auto& pending = gateway.pending_prefills[static_cast<std::size_t>(r)];
            const auto pending_it = pending.find(prompt.prompt_id);
            const bool prefill_outstanding = pending_it != pending.end() && pending_it->second > 0;
            if (!prefill_outstanding) {
                score = std::min(
                    score, replicas[static_cast<std::size_t>(r)].cache.match_tokens(prompt.tokens));
            }
            const bool better =
                score > best_score ||
                (score == best_score &&
                 replicas[static_cast<std::size_t>(r)].in_flight <
                     replicas[static_cast<std::size_t>(best)].in_flight);
            if (better) {
                best = r;
                best_score = score;
            }
        }
        gateway.mirrors[static_cast<std::size_t>(best)].insert(prompt.tokens, now);
        return best;
    }
};

}  // namespace

ServingRunResult run_serving_arm(const ServingConfig& config, Strategy strategy,
                                 std::uint64_t seed,
                                 const std::function<void(const std::string&)>& log_sink) {
    RngStream corpus_rng(seed, "corpus");
    const PromptCorpus corpus = build_corpus(config.corpus, corpus_rng);
    RngStream loadgen_rng(seed, "load-gen");
    RngStream output_rng(seed, "output-len");
    RngStream epp_rng(seed, "epp");

    EventQueue kernel;
    if (log_sink) {
        kernel.set_log_sink(log_sink);
    }

    std::vector<Replica> replicas;
    Gateway gateway;
    for (int r = 0; r < config.replicas; ++r) {
        replicas.emplace_back(config.kv_capacity_tokens, config.block_size_tokens);
        gateway.mirrors.emplace_back(config.kv_capacity_tokens, config.block_size_tokens);
        gateway.pending_prefills.emplace_back();
    }
    Router router{strategy, gateway, replicas, epp_rng};

    ServingRunResult result;
    result.strategy = strategy;
    result.seed = seed;
    int next_request_id = 0;

    for (const int level : config.concurrency_levels) {
        if (level < 1) {
            throw std::invalid_argument("concurrency level must be >= 1");
        }
        // one shuffled global queue of repeats, drained by `level` streams
        std::vector<int> queue;
        for (int rep = 0; rep < corpus.repeats; ++rep) {
            for (int p = 0; p < static_cast<int>(corpus.prompts.size()); ++p) {
                queue.push_back(p);
            }
        }
        loadgen_rng.shuffle(queue);
        std::vector<int> outputs(queue.size());
        for (std::size_t i = 0; i < queue.size(); ++i) {
            outputs[i] = corpus.fixed_output_tokens
                             ? *corpus.fixed_output_tokens
                             : static_cast<int>(
                                   output_rng.uniform_int(1, corpus.max_output_tokens));
        }

        std::size_t next_index = 0;
        const double gw_ms = config.latency.gateway_overhead_for(strategy);
        const double epp_ms =
            uses_endpoint_picker(strategy) ? config.latency.epp_overhead_for(level) : 0.0;
        const TimeMs overhead = static_cast<TimeMs>(std::llround(gw_ms + epp_ms));

        std::function<void(TimeMs)> issue_next = [&](TimeMs now) {
            if (next_index >= queue.size()) {
                return;
            }
            const std::size_t index = next_index++;
            const Prompt& prompt = corpus.prompts[static_cast<std::size_t>(queue[index])];
            const int output_tokens = outputs[index];
            const TimeMs arrive = now;
            const TimeMs dispatched = arrive + overhead;

            const int r = router.pick(prompt, arrive);
            Replica& replica = replicas[static_cast<std::size_t>(r)];
            replica.in_flight += 1;

            // A prefill already queued on this replica for the same prompt
            // completes (and inserts) before ours starts, because prefills
            // serialize in dispatch order.
            auto& pending = gateway.pending_prefills[static_cast<std::size_t>(r)];
            std::int64_t cached = replica.cache.match_tokens(prompt.tokens);
            if (auto it = pending.find(prompt.prompt_id); it != pending.end() && it->second > 0) {
                cached = std::max(cached, static_cast<std::int64_t>(prompt.tokens.size() /
                                                                    config.block_size_tokens) *
                                              config.block_size_tokens);
            }
            const std::int64_t prefill_tokens =
                static_cast<std::int64_t>(prompt.tokens.size()) - cached;
            const TimeMs prefill_ms = static_cast<TimeMs>(
                std::llround(static_cast<double>(prefill_tokens) *
                             config.latency.prefill_ms_per_token));
            const TimeMs prefill_start = std::max(dispatched, replica.prefill_busy_until);
            const TimeMs prefill_end = prefill_start + prefill_ms;
            replica.prefill_busy_until = prefill_end;
            pending[prompt.prompt_id] += 1;

            const TimeMs ttft_at =
                prefill_end + static_cast<TimeMs>(std::llround(config.latency.ttft_floor_ms));
            const TimeMs done_at =
                ttft_at + static_cast<TimeMs>(std::llround(
                              static_cast<double>(output_tokens) *
                              config.latency.decode_ms_per_token));

            RequestRecord record;
            record.request_id = next_request_id++;
            record.prompt_id = prompt.prompt_id;
            record.concurrency = level;
            record.replica = r;
            record.arrive_ms = arrive;
            record.ttft_at_ms = ttft_at;
            record.done_at_ms = done_at;
            record.cached_tokens = cached;
            record.prefill_tokens = prefill_tokens;
            record.output_tokens = output_tokens;

            kernel.schedule(prefill_end, EventKind::PrefillDone, prompt.prompt_id,
                            [&, r, prompt_id = prompt.prompt_id,
                             tokens = &prompt.tokens](TimeMs t) {
                                replicas[static_cast<std::size_t>(r)].cache.insert(*tokens, t);
                                gateway.pending_prefills[static_cast<std::size_t>(r)]
                                    [prompt_id] -= 1;
                            });
            kernel.schedule(done_at, EventKind::DecodeDone, prompt.prompt_id,
                            [&, r, record](TimeMs t) {
                                replicas[static_cast<std::size_t>(r)].in_flight -= 1;
                                result.records.push_back(record);
                                kernel.schedule(t, EventKind::RequestArrival, "next",
                                                [&](TimeMs next_t) { issue_next(next_t); });
                            });
        };

        const TimeMs level_start = kernel.now();
        for (int s = 0; s < level && s < static_cast<int>(queue.size()); ++s) {
            kernel.schedule(level_start, EventKind::RequestArrival,
                            "stream-" + std::to_string(s),
                            [&](TimeMs t) { issue_next(t); });
        }
        kernel.run_to_completion();
    }

    result.dispatch_digest = kernel.dispatch_digest();

    std::map<std::string, std::int64_t> prompt_lengths;
    for (const Prompt& p : corpus.prompts) {
        prompt_lengths[p.prompt_id] = static_cast<std::int64_t>(p.tokens.size());
    }
    for (const RequestRecord& rec : result.records) {
        if (!(rec.arrive_ms < rec.ttft_at_ms && rec.ttft_at_ms <= rec.done_at_ms)) {
            throw std::logic_error("request timeline out of order for " + rec.prompt_id);
        }
        if (rec.cached_tokens + rec.prefill_tokens != prompt_lengths.at(rec.prompt_id)) {
            throw std::logic_error("cached/prefill split does not cover " + rec.prompt_id);
        }
    }
    return result;
}

}  // namespace orchsim::serving
