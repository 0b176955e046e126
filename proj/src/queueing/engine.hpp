#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/time.hpp"

namespace orchsim::queueing {

using ResourceUnits = std::map<std::string, std::int64_t>;  // resource name -> units

// Typed capacity pool ("gpu" -> 8, or "compute-unit"/"memory-unit" in sliced
// mode). Capacities are the physical totals backing cluster-queue quotas.
struct ResourceFlavor {
    std::string name;
    ResourceUnits capacities;
};

struct ClusterQueueSpec {
    std::string name;
    std::string cohort;  // empty = not in a cohort
    std::map<std::string, ResourceUnits> nominal_quota;  // flavor -> resource -> units
    bool borrowing_enabled = false;
    bool preemption_enabled = false;
};

// Namespace-scoped submission entry point, bound to one cluster queue.
struct LocalQueueSpec {
    std::string name;
    std::string ns;
    std::string cluster_queue;
};

enum class WorkloadState { Pending, Admitted, Running, Evicted, Finished };

const char* to_string(WorkloadState state);

struct WorkloadEntry {
    std::string job_id;
    int priority = 0;
    TimeMs created_at = 0;
    ResourceUnits request;
    WorkloadState state = WorkloadState::Pending;
    std::optional<TimeMs> admitted_at;
    std::optional<TimeMs> finished_at;
    int restart_count = 0;

    std::string local_queue;
    std::string cluster_queue;
    std::string profile;        // device profile backing the request
    std::string flavor;         // assigned at admission
    std::uint64_t submit_seq = 0;
    std::uint64_t admit_seq = 0;
};

// Driver callbacks used during a scan. Placement is owned by the accel layer;
// the engine only sees a feasibility predicate and commit notifications.
struct ScanHooks {
    // Placement feasibility for `entry` assuming the listed victims' slices
    // have been released.
    std::function<bool(const WorkloadEntry& entry, const std::vector<std::string>& victims)>
        can_place;
    // Victim eviction commit: cancel its completion event and free its slice.
    std::function<void(const std::string& job_id, TimeMs now)> on_evict;
    // Admission commit: allocate the slice and schedule execution.
    std::function<void(const std::string& job_id, TimeMs now)> on_admit;
};

// BestEffortFIFO admission over LocalQueue -> ClusterQueue -> ResourceFlavor,
// with priorities, preemption and cohort borrowing.
class AdmissionEngine {
public:
    AdmissionEngine(std::vector<ResourceFlavor> flavors, std::vector<ClusterQueueSpec> queues,
                    std::vector<LocalQueueSpec> local_queues);

    // Enqueues the workload as Pending in the bound cluster queue and returns
    // its position in the pending order. Rejects unknown local queues and
    // requests that exceed total flavor capacity (those can never be
    // admitted).
    std::size_t submit(WorkloadEntry entry, const std::string& local_queue, TimeMs now);

    // One best-effort pass over every cluster queue's pending list in
    // (priority desc, created_at asc, submission order, job_id) order.
    // Non-fitting workloads are skipped, not blocking. Returns job ids
    // admitted at this scan, in admission order.
    std::vector<std::string> scan(TimeMs now, const ScanHooks& hooks);

    void mark_running(const std::string& job_id);
    void finish(const std::string& job_id, TimeMs now);

    const WorkloadEntry& workload(const std::string& job_id) const;
    std::vector<const WorkloadEntry*> workloads_sorted() const;

    std::int64_t usage(const std::string& cq, const std::string& flavor,
                       const std::string& resource) const;
    std::int64_t borrowed(const std::string& cq, const std::string& flavor,
                          const std::string& resource) const;
    std::uint64_t borrow_admissions() const { return borrow_admissions_; }
    std::uint64_t preemptions() const { return preemptions_; }

    bool all_finished() const;
    void check_invariants() const;

private:
    struct CqState {
        ClusterQueueSpec spec;
        std::vector<std::string> pending;               // unsorted; sorted per scan
        std::set<std::string> admitted;                 // Admitted or Running
        std::map<std::string, ResourceUnits> usage;     // flavor -> resource -> units
    };

    const std::string& flavor_for(const CqState& cq, const ResourceUnits& request) const;
    bool fits(const CqState& cq, const std::string& flavor, const ResourceUnits& request,
              const ResourceUnits& freed) const;
    std::int64_t cohort_unused(const CqState& cq, const std::string& flavor,
                               const std::string& resource) const;
    std::vector<std::string> preemption_victims(const CqState& cq, const WorkloadEntry& high,
                                                const std::string& flavor,
                                                const ScanHooks& hooks) const;
    void sort_pending(CqState& cq);
    void add_usage(CqState& cq, const std::string& flavor, const ResourceUnits& request, int sign);

    std::map<std::string, ResourceFlavor> flavors_;
    std::map<std::string, CqState> cluster_queues_;
    std::map<std::string, LocalQueueSpec> local_queues_;
    std::map<std::string, WorkloadEntry> workloads_;
    std::uint64_t next_submit_seq_ = 0;
    std::uint64_t next_admit_seq_ = 0;
    std::uint64_t borrow_admissions_ = 0;
    std::uint64_t preemptions_ = 0;
};

}  // namespace orchsim::queueing
