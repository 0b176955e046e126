#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/time.hpp"

namespace orchsim::accel {

// Slice shape in device units. Defaults mirror an A100-style grid:
// a device holds 7 compute units and 8 memory units; "1g.5gb" is (1,1),
// "3g.20gb" is (3,4) and "full" is (7,8).
struct MigProfile {
    std::string name;
    int compute_units = 0;
    int memory_units = 0;
};

struct SliceAllocation {
    std::uint64_t slice_id = 0;
    int device_id = 0;
    std::string profile;
    int compute_units = 0;
    int memory_units = 0;
    std::string job_id;
    TimeMs allocated_at = 0;
};

struct OccupancySample {
    TimeMs t = 0;
    double allocated_compute_fraction = 0.0;
    double allocated_memory_fraction = 0.0;
    int running_jobs = 0;
};

enum class PlacementPolicy { FirstFit, BestFit };

struct DeviceUsage {
    int used_compute = 0;
    int used_memory = 0;
};

// Fleet of unit-grid GPU devices with just-in-time slice allocation.
// Placement is a pure unit-count check (no positional constraints).
class Fleet {
public:
    Fleet(int device_count, int compute_capacity, int memory_capacity,
          PlacementPolicy policy = PlacementPolicy::FirstFit);

    int device_count() const { return static_cast<int>(devices_.size()); }
    int compute_capacity() const { return compute_capacity_; }
    int memory_capacity() const { return memory_capacity_; }

    bool can_place(int device_id, const MigProfile& profile) const;
    bool can_place_anywhere(const MigProfile& profile) const;

    // Allocates on the first feasible device (or best-fit when configured);
    // returns nullopt when no device has capacity.
    std::optional<std::uint64_t> allocate(const MigProfile& profile, const std::string& job_id,
                                          TimeMs now);

    // Double-free is an invariant breach and throws.
    void free(std::uint64_t slice_id, TimeMs now);

    const SliceAllocation& slice(std::uint64_t slice_id) const;
    int running_jobs() const { return static_cast<int>(allocations_.size()); }
    int peak_running_jobs() const { return peak_running_; }
    const std::vector<DeviceUsage>& peak_layout() const { return peak_layout_; }
    const DeviceUsage& device(int device_id) const { return devices_.at(device_id); }

    // Compute units that can no longer host any profile because memory is
    // exhausted ("slice padding").
    int stranded_compute_units(int device_id, int smallest_profile_memory) const;

    const std::vector<OccupancySample>& samples() const { return samples_; }

    double allocated_compute_fraction() const;
    double allocated_memory_fraction() const;

    // Accumulated slice lifetime (freed slices only).
    TimeMs total_slice_busy_ms() const { return busy_ms_; }

    // Whole-fleet state snapshot; used to trial preemption plans and roll
    // back when they do not pay off.
    struct Snapshot {
        std::vector<DeviceUsage> devices;
        std::map<std::uint64_t, SliceAllocation> allocations;
        std::uint64_t next_slice_id;
        std::size_t sample_count;
        int peak_running;
        std::vector<DeviceUsage> peak_layout;
        TimeMs busy_ms;
    };
    Snapshot snapshot() const;
    void restore(const Snapshot& snap);

    void check_invariants() const;

private:
    int pick_device(const MigProfile& profile) const;
    void record_sample(TimeMs now);

    int compute_capacity_;
    int memory_capacity_;
    PlacementPolicy policy_;
    std::vector<DeviceUsage> devices_;
    std::map<std::uint64_t, SliceAllocation> allocations_;
    std::uint64_t next_slice_id_ = 1;
    std::vector<OccupancySample> samples_;
    int peak_running_ = 0;
    std::vector<DeviceUsage> peak_layout_;
    TimeMs busy_ms_ = 0;
};

// Time-weighted mean of the sampled fractions over [first sample, run_end].
struct OccupancyMeans {
    double compute = 0.0;
    double memory = 0.0;
};
OccupancyMeans occupancy_timeline(const std::vector<OccupancySample>& samples, TimeMs run_end);

}  // namespace orchsim::accel
