#include "queueing/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace orchsim::queueing {

namespace {

// Pending order: priority desc, creation asc, then submission order. The
// job_id tie-break keeps the order total even for identical submissions.
bool pending_before(const WorkloadEntry& a, const WorkloadEntry& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    if (a.submit_seq != b.submit_seq) return a.submit_seq < b.submit_seq;
    return a.job_id < b.job_id;
}

}  // namespace

const char* to_string(WorkloadState state) {
    switch (state) {
        case WorkloadState::Pending: return "pending";
        case WorkloadState::Admitted: return "admitted";
        case WorkloadState::Running: return "running";
        case WorkloadState::Evicted: return "evicted";
        case WorkloadState::Finished: return "finished";
    }
    return "unknown";
}

AdmissionEngine::AdmissionEngine(std::vector<ResourceFlavor> flavors,
                                 std::vector<ClusterQueueSpec> queues,
                                 std::vector<LocalQueueSpec> local_queues) {
    for (auto& f : flavors) {
        for (const auto& [res, units] : f.capacities) {
            if (units <= 0) {
                throw std::invalid_argument("flavor " + f.name + ": capacity for " + res +
                                            " must be strictly positive");
            }
        }
        flavors_.emplace(f.name, std::move(f));
    }
    for (auto& q : queues) {
        for (const auto& [flavor, quota] : q.nominal_quota) {
            if (flavors_.find(flavor) == flavors_.end()) {
                throw std::invalid_argument("cluster queue " + q.name +
                                            " references unknown flavor " + flavor);
            }
            (void)quota;
        }
        std::string name = q.name;
        cluster_queues_.emplace(name, CqState{std::move(q), {}, {}, {}});
    }
    for (auto& lq : local_queues) {
        if (cluster_queues_.find(lq.cluster_queue) == cluster_queues_.end()) {
            throw std::invalid_argument("local queue " + lq.name +
                                        " references unknown cluster queue " + lq.cluster_queue);
        }
        std::string name = lq.name;
        local_queues_.emplace(name, std::move(lq));
    }
}

const std::string& AdmissionEngine::flavor_for(const CqState& cq,
                                               const ResourceUnits& request) const {
    for (const auto& [flavor, quota] : cq.spec.nominal_quota) {
        bool covers = true;
        for (const auto& [res, units] : request) {
            (void)units;
            if (quota.find(res) == quota.end()) {
                covers = false;
                break;
            }
        }
        if (covers) {
            return flavor;
        }
    }
    throw std::invalid_argument("cluster queue " + cq.spec.name +
                                " has no flavor covering the requested resources");
}

std::size_t AdmissionEngine::submit(WorkloadEntry entry, const std::string& local_queue,
                                    TimeMs now) {
    auto lq_it = local_queues_.find(local_queue);
    if (lq_it == local_queues_.end()) {
        throw std::invalid_argument("submit: unknown local queue " + local_queue);
    }
    auto cq_it = cluster_queues_.find(lq_it->second.cluster_queue);
    CqState& cq = cq_it->second;

    const std::string& flavor = flavor_for(cq, entry.request);
    const ResourceFlavor& pool = flavors_.at(flavor);
    for (const auto& [res, units] : entry.request) {
        auto cap = pool.capacities.find(res);
        if (cap == pool.capacities.end() || units > cap->second) {
            throw std::invalid_argument("submit: " + entry.job_id + " requests " +
                                        std::to_string(units) + " " + res +
                                        " exceeding total flavor capacity");
        }
    }

    entry.local_queue = local_queue;
    entry.cluster_queue = cq.spec.name;
    entry.state = WorkloadState::Pending;
    entry.created_at = now;
    entry.submit_seq = next_submit_seq_++;

    const std::string job_id = entry.job_id;
    if (!workloads_.emplace(job_id, std::move(entry)).second) {
        throw std::invalid_argument("submit: duplicate job id " + job_id);
    }
    cq.pending.push_back(job_id);
    sort_pending(cq);
    const auto pos = std::find(cq.pending.begin(), cq.pending.end(), job_id);
    return static_cast<std::size_t>(pos - cq.pending.begin());
}

void AdmissionEngine::sort_pending(CqState& cq) {
    std::sort(cq.pending.begin(), cq.pending.end(),
              [this](const std::string& a, const std::string& b) {
                  return pending_before(workloads_.at(a), workloads_.at(b));
              });
}

std::int64_t AdmissionEngine::cohort_unused(const CqState& cq, const std::string& flavor,
                                            const std::string& resource) const {
    std::int64_t unused = 0;
    for (const auto& [name, other] : cluster_queues_) {
        if (name == cq.spec.name || other.spec.cohort != cq.spec.cohort) {
            continue;
        }
        std::int64_t nominal = 0;
        if (auto fit = other.spec.nominal_quota.find(flavor); fit != other.spec.nominal_quota.end()) {
            if (auto rit = fit->second.find(resource); rit != fit->second.end()) {
                nominal = rit->second;
            }
        }
        std::int64_t used = 0;
        if (auto fit = other.usage.find(flavor); fit != other.usage.end()) {
            if (auto rit = fit->second.find(resource); rit != fit->second.end()) {
                used = rit->second;
            }
        }
        unused += std::max<std::int64_t>(0, nominal - used);
    }
    return unused;
}

bool AdmissionEngine::fits(const CqState& cq, const std::string& flavor,
                           const ResourceUnits& request, const ResourceUnits& freed) const {
    const auto quota_it = cq.spec.nominal_quota.find(flavor);
    if (quota_it == cq.spec.nominal_quota.end()) {
        return false;
    }
    for (const auto& [res, units] : request) {
        auto nominal_it = quota_it->second.find(res);
        if (nominal_it == quota_it->second.end()) {
            return false;
        }
        std::int64_t used = usage(cq.spec.name, flavor, res);
        if (auto fit = freed.find(res); fit != freed.end()) {
            used -= fit->second;
        }
        const std::int64_t free_nominal = nominal_it->second - used;
        if (units <= free_nominal) {
            continue;
        }
        if (!cq.spec.borrowing_enabled || cq.spec.cohort.empty()) {
            return false;
        }
        // Borrowed units must come from unused nominal quota of the other
        // cohort members.
        if (units - free_nominal > cohort_unused(cq, flavor, res)) {
            return false;
        }
    }
    return true;
}

std::vector<std::string> AdmissionEngine::preemption_victims(const CqState& cq,
                                                             const WorkloadEntry& high,
                                                             const std::string& flavor,
                                                             const ScanHooks& hooks) const {
    // Candidates: strictly lower priority, same cluster queue; reclaim order
    // is priority asc then most recently admitted first.
    std::vector<const WorkloadEntry*> candidates;
    for (const std::string& id : cq.admitted) {
        const WorkloadEntry& w = workloads_.at(id);
        if (w.priority < high.priority) {
            candidates.push_back(&w);
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const WorkloadEntry* a, const WorkloadEntry* b) {
                  if (a->priority != b->priority) return a->priority < b->priority;
                  if (a->admitted_at != b->admitted_at) return a->admitted_at > b->admitted_at;
                  return a->admit_seq > b->admit_seq;
              });

    std::vector<std::string> victims;
    ResourceUnits freed;
    for (const WorkloadEntry* victim : candidates) {
        victims.push_back(victim->job_id);
        for (const auto& [res, units] : victim->request) {
            freed[res] += units;
        }
        if (fits(cq, flavor, high.request, freed) && hooks.can_place(high, victims)) {
            return victims;
        }
    }
    return {};
}

std::vector<std::string> AdmissionEngine::scan(TimeMs now, const ScanHooks& hooks) {
    std::vector<std::string> admitted;
    // One ordered pass across every cluster queue's pending set: admission
    // order within a cohort is global, so a queue's own pending workloads get
    // first call on its freed quota before cohort members borrow it.
    std::vector<std::string> order;
    for (auto& [cq_name, cq] : cluster_queues_) {
        (void)cq_name;
        sort_pending(cq);
        order.insert(order.end(), cq.pending.begin(), cq.pending.end());
    }
    std::sort(order.begin(), order.end(), [this](const std::string& a, const std::string& b) {
        return pending_before(workloads_.at(a), workloads_.at(b));
    });
    // Victims re-enqueued by preemption mid-scan are not in `order` and wait
    // for the next scan.
    {
        for (const std::string& job_id : order) {
            WorkloadEntry& w = workloads_.at(job_id);
            if (w.state != WorkloadState::Pending) {
                continue;
            }
            CqState& cq = cluster_queues_.at(w.cluster_queue);
            const std::string& flavor = flavor_for(cq, w.request);

            bool can_admit = fits(cq, flavor, w.request, {}) && hooks.can_place(w, {});
            if (!can_admit && cq.spec.preemption_enabled) {
                const std::vector<std::string> victims =
                    preemption_victims(cq, w, flavor, hooks);
                if (!victims.empty()) {
                    for (const std::string& victim_id : victims) {
                        WorkloadEntry& v = workloads_.at(victim_id);
                        hooks.on_evict(victim_id, now);
                        add_usage(cq, v.flavor, v.request, -1);
                        cq.admitted.erase(victim_id);
                        v.state = WorkloadState::Evicted;
                        v.admitted_at.reset();
                        // Re-enters Pending with its original creation time
                        // and submission order; restarts from zero progress.
                        v.state = WorkloadState::Pending;
                        v.restart_count += 1;
                        cq.pending.push_back(victim_id);
                        ++preemptions_;
                    }
                    sort_pending(cq);
                    can_admit = true;
                }
            }
            if (!can_admit) {
                continue;  // best-effort: skip, do not block the queue
            }

            const bool within_nominal = [&] {
                bool borrowing_saved = cq.spec.borrowing_enabled;
                cq.spec.borrowing_enabled = false;
                const bool ok = fits(cq, flavor, w.request, {});
                cq.spec.borrowing_enabled = borrowing_saved;
                return ok;
            }();
            if (!within_nominal) {
                ++borrow_admissions_;
            }

            w.state = WorkloadState::Admitted;
            w.admitted_at = now;
            w.admit_seq = next_admit_seq_++;
            w.flavor = flavor;
            add_usage(cq, flavor, w.request, +1);
            cq.admitted.insert(job_id);
            cq.pending.erase(std::find(cq.pending.begin(), cq.pending.end(), job_id));
            hooks.on_admit(job_id, now);
            admitted.push_back(job_id);
        }
    }
    check_invariants();
    return admitted;
}

void AdmissionEngine::add_usage(CqState& cq, const std::string& flavor,
                                const ResourceUnits& request, int sign) {
    ResourceUnits& used = cq.usage[flavor];
    for (const auto& [res, units] : request) {
        used[res] += sign * units;
    }
}

void AdmissionEngine::mark_running(const std::string& job_id) {
    WorkloadEntry& w = workloads_.at(job_id);
    if (w.state != WorkloadState::Admitted) {
        throw std::logic_error("mark_running: " + job_id + " is " + to_string(w.state));
    }
    w.state = WorkloadState::Running;
}

void AdmissionEngine::finish(const std::string& job_id, TimeMs now) {
    WorkloadEntry& w = workloads_.at(job_id);
    if (w.state != WorkloadState::Running) {
        throw std::logic_error("finish: " + job_id + " is " + to_string(w.state));
    }
    CqState& cq = cluster_queues_.at(w.cluster_queue);
    add_usage(cq, w.flavor, w.request, -1);
    cq.admitted.erase(job_id);
    w.state = WorkloadState::Finished;
    w.finished_at = now;
    if (w.finished_at < w.admitted_at) {
        throw std::logic_error("finish: " + job_id + " finished before admission");
    }
    check_invariants();
}

const WorkloadEntry& AdmissionEngine::workload(const std::string& job_id) const {
    auto it = workloads_.find(job_id);
    if (it == workloads_.end()) {
        throw std::invalid_argument("unknown workload " + job_id);
    }
    return it->second;
}

std::vector<const WorkloadEntry*> AdmissionEngine::workloads_sorted() const {
    std::vector<const WorkloadEntry*> out;
    out.reserve(workloads_.size());
    for (const auto& [id, w] : workloads_) {
        out.push_back(&w);
    }
    std::sort(out.begin(), out.end(), [](const WorkloadEntry* a, const WorkloadEntry* b) {
        return a->submit_seq < b->submit_seq;
    });
    return out;
}

std::int64_t AdmissionEngine::usage(const std::string& cq, const std::string& flavor,
                                    const std::string& resource) const {
    auto it = cluster_queues_.find(cq);
    if (it == cluster_queues_.end()) {
        throw std::invalid_argument("unknown cluster queue " + cq);
    }
    auto fit = it->second.usage.find(flavor);
    if (fit == it->second.usage.end()) {
        return 0;
    }
    auto rit = fit->second.find(resource);
    return rit == fit->second.end() ? 0 : rit->second;
}

std::int64_t AdmissionEngine::borrowed(const std::string& cq, const std::string& flavor,
                                       const std::string& resource) const {
    auto it = cluster_queues_.find(cq);
    if (it == cluster_queues_.end()) {
        throw std::invalid_argument("unknown cluster queue " + cq);
    }
    std::int64_t nominal = 0;
    if (auto fit = it->second.spec.nominal_quota.find(flavor);
        fit != it->second.spec.nominal_quota.end()) {
        if (auto rit = fit->second.find(resource); rit != fit->second.end()) {
            nominal = rit->second;
        }
    }
    return std::max<std::int64_t>(0, usage(cq, flavor, resource) - nominal);
}

bool AdmissionEngine::all_finished() const {
    for (const auto& [id, w] : workloads_) {
        if (w.state != WorkloadState::Finished) {
            return false;
        }
    }
    return true;
}

void AdmissionEngine::check_invariants() const {
    // usage must equal the sum of admitted requests, per (cq, flavor, resource)
    for (const auto& [name, cq] : cluster_queues_) {
        std::map<std::string, ResourceUnits> derived;
        for (const std::string& id : cq.admitted) {
            const WorkloadEntry& w = workloads_.at(id);
            if (w.state != WorkloadState::Admitted && w.state != WorkloadState::Running) {
                throw std::logic_error("invariant: admitted set holds " + id + " in state " +
                                       to_string(w.state));
            }
            for (const auto& [res, units] : w.request) {
                derived[w.flavor][res] += units;
            }
        }
        for (const auto& [flavor, used] : cq.usage) {
            for (const auto& [res, units] : used) {
                std::int64_t expect = 0;
                if (auto fit = derived.find(flavor); fit != derived.end()) {
                    if (auto rit = fit->second.find(res); rit != fit->second.end()) {
                        expect = rit->second;
                    }
                }
                if (units != expect) {
                    throw std::logic_error("invariant: usage mismatch in " + name + " for " +
                                           flavor + "/" + res);
                }
                // admitted usage <= nominal + borrowed (borrowed covered by
                // unused cohort quota)
                std::int64_t nominal = 0;
                if (auto fit = cq.spec.nominal_quota.find(flavor);
                    fit != cq.spec.nominal_quota.end()) {
                    if (auto rit = fit->second.find(res); rit != fit->second.end()) {
                        nominal = rit->second;
                    }
                }
                if (units > nominal) {
                    if (!cq.spec.borrowing_enabled || cq.spec.cohort.empty()) {
                        throw std::logic_error("invariant: " + name + " exceeds nominal quota of " +
                                               res + " without borrowing");
                    }
                    if (units - nominal > cohort_unused(cq, flavor, res)) {
                        throw std::logic_error("invariant: " + name +
                                               " borrowed more than the cohort's unused quota");
                    }
                }
            }
        }
        for (const std::string& id : cq.pending) {
            if (workloads_.at(id).state != WorkloadState::Pending) {
                throw std::logic_error("invariant: pending list holds non-pending " + id);
            }
        }
    }

    // cohort-wide: sum of usage <= sum of nominal
    std::map<std::string, std::map<std::pair<std::string, std::string>, std::int64_t>> cohort_used;
    std::map<std::string, std::map<std::pair<std::string, std::string>, std::int64_t>> cohort_nominal;
    for (const auto& [name, cq] : cluster_queues_) {
        (void)name;
        if (cq.spec.cohort.empty()) {
            continue;
        }
        for (const auto& [flavor, used] : cq.usage) {
            for (const auto& [res, units] : used) {
                cohort_used[cq.spec.cohort][{flavor, res}] += units;
            }
        }
        for (const auto& [flavor, quota] : cq.spec.nominal_quota) {
            for (const auto& [res, units] : quota) {
                cohort_nominal[cq.spec.cohort][{flavor, res}] += units;
            }
        }
    }
    for (const auto& [cohort, used] : cohort_used) {
        for (const auto& [key, units] : used) {
            if (units > cohort_nominal[cohort][key]) {
                throw std::logic_error("invariant: cohort " + cohort +
                                       " usage exceeds its pooled nominal quota");
            }
        }
    }
}

}  // namespace orchsim::queueing
