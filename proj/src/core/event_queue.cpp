#include "core/event_queue.hpp"

#include <stdexcept>

namespace orchsim {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::JobCreated: return "job-created";
        case EventKind::JobFinished: return "job-finished";
        case EventKind::AdmitScan: return "admit-scan";
        case EventKind::RequestArrival: return "request-arrival";
        case EventKind::PrefillDone: return "prefill-done";
        case EventKind::DecodeDone: return "decode-done";
        case EventKind::Preemption: return "preemption";
    }
    return "unknown";
}

EventHandle EventQueue::schedule(TimeMs fire_at, EventKind kind, std::string detail,
                                 std::function<void(TimeMs)> handler) {
    if (fire_at < now_) {
        throw std::logic_error("EventQueue::schedule: fire_at " + std::to_string(fire_at) +
                               " is before current time " + std::to_string(now_));
    }
    const std::uint64_t seq = next_seq_++;
    queue_.emplace(Key{fire_at, seq}, Entry{kind, std::move(detail), std::move(handler)});
    pending_.emplace(seq, fire_at);
    return seq;
}

bool EventQueue::cancel(EventHandle handle) {
    auto it = pending_.find(handle);
    if (it == pending_.end()) {
        return false;
    }
    queue_.erase(Key{it->second, handle});
    pending_.erase(it);
    return true;
}

TimeMs EventQueue::run_to_completion() {
    while (!queue_.empty()) {
        auto it = queue_.begin();
        const Key key = it->first;
        Entry entry = std::move(it->second);
        queue_.erase(it);
        pending_.erase(key.second);

        if (key.first < now_) {
            throw std::logic_error("EventQueue: clock would move backwards");
        }
        now_ = key.first;

        if (++dispatched_ > max_dispatched_) {
            throw std::runtime_error(
                "EventQueue: dispatched event count exceeded the safety cap (" +
                std::to_string(max_dispatched_) + "); likely a scheduling livelock");
        }

        std::string line = std::to_string(now_);
        line += ',';
        line += to_string(entry.kind);
        line += ',';
        line += entry.detail;
        digest_ = fnv1a64(line, digest_);
        digest_ = fnv1a64(std::string_view("\n"), digest_);
        if (log_sink_) {
            log_sink_(line);
        }

        entry.handler(now_);
    }
    return now_;
}

}  // namespace orchsim
