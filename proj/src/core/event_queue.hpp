#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "core/hash.hpp"
#include "core/time.hpp"

namespace orchsim {

enum class EventKind {
    JobCreated,
    JobFinished,
    AdmitScan,
    RequestArrival,
    PrefillDone,
    DecodeDone,
    Preemption,
};

const char* to_string(EventKind kind);

using EventHandle = std::uint64_t;

// Discrete-event kernel: virtual clock plus an ordered event queue.
//
// Dispatch order is total over (fire_at, insertion seq); the seq breaks ties
// deterministically in insertion order. Handles permit cancellation, which is
// how preempted jobs drop their scheduled completion. A digest of the dispatch
// log is maintained for replay-determinism checks, and the raw log can be
// streamed to a sink for golden-trace debugging.
class EventQueue {
public:
    // Safety cap on dispatched events (not wall clock, to stay deterministic).
    // Exceeding it indicates a scheduling livelock.
    explicit EventQueue(std::uint64_t max_dispatched = 100'000'000ull)
        : max_dispatched_(max_dispatched) {}

    TimeMs now() const { return now_; }

    EventHandle schedule(TimeMs fire_at, EventKind kind, std::string detail,
                         std::function<void(TimeMs)> handler);

    // Returns true if the event was still pending. A cancelled handler is
    // never invoked and never appears in the dispatch log.
    bool cancel(EventHandle handle);

    bool empty() const { return queue_.empty(); }

    // Pops events in (fire_at, seq) order until the queue drains; returns the
    // final clock value. Running with an empty queue is a no-op.
    TimeMs run_to_completion();

    std::uint64_t dispatched() const { return dispatched_; }

    // FNV-1a over the dispatch log lines; equal digests mean equal dispatch
    // sequences.
    std::uint64_t dispatch_digest() const { return digest_; }

    void set_log_sink(std::function<void(const std::string&)> sink) { log_sink_ = std::move(sink); }

private:
    struct Entry {
        EventKind kind;
        std::string detail;
        std::function<void(TimeMs)> handler;
    };

    using Key = std::pair<TimeMs, std::uint64_t>;

    std::uint64_t max_dispatched_;
    TimeMs now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t dispatched_ = 0;
    std::uint64_t digest_ = kFnvOffset;
    std::map<Key, Entry> queue_;
    std::unordered_map<EventHandle, TimeMs> pending_;  // handle (== seq) -> fire_at
    std::function<void(const std::string&)> log_sink_;
};

}  // namespace orchsim
