#include "queueing/baseline.hpp"

#include <algorithm>

namespace orchsim::queueing {

std::vector<std::string> BaselinePodSet::start_scan(
    RngStream& rng, const std::function<bool(const std::string&)>& can_start,
    const std::function<void(const std::string&)>& start) {
    std::vector<std::string> started;
    for (;;) {
        std::vector<std::size_t> startable;
        for (std::size_t i = 0; i < pending_.size(); ++i) {
            if (can_start(pending_[i])) {
                startable.push_back(i);
            }
        }
        if (startable.empty()) {
            break;
        }
        const std::size_t pick =
            startable[static_cast<std::size_t>(rng.next_below(startable.size()))];
        const std::string job_id = pending_[pick];
        pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(pick));
        start(job_id);
        started.push_back(job_id);
    }
    return started;
}

}  // namespace orchsim::queueing
