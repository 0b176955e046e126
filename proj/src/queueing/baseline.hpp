#pragma once
#include <functional>
#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/time.hpp"

namespace orchsim::queueing {

// Baseline scheduler model: pods exist from submission (queue time is
// identically zero in this mode) and, once the initial capacity is consumed,
// start order is chosen uniformly at random among the startable pods. This
// stands in for the run-to-run variability of the stock scheduler's
// unschedulable/backoff queues.
class BaselinePodSet {
public:
    void add_pod(const std::string& job_id) { pending_.push_back(job_id); }

    bool empty() const { return pending_.empty(); }
    const std::vector<std::string>& pending() const { return pending_; }

    // Repeatedly picks a startable pod at random and starts it until nothing
    // fits. Returns the pods started, in start order.
    std::vector<std::string> start_scan(
        RngStream& rng, const std::function<bool(const std::string&)>& can_start,
        const std::function<void(const std::string&)>& start);

private:
    std::vector<std::string> pending_;
};

}  // namespace orchsim::queueing
