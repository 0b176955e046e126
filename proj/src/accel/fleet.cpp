#include "accel/fleet.hpp"

#include <stdexcept>

namespace orchsim::accel {

Fleet::Fleet(int device_count, int compute_capacity, int memory_capacity, PlacementPolicy policy)
    : compute_capacity_(compute_capacity), memory_capacity_(memory_capacity), policy_(policy) {
    if (device_count < 1 || compute_capacity < 1 || memory_capacity < 1) {
        throw std::invalid_argument("Fleet: device count and unit capacities must be positive");
    }
    devices_.resize(static_cast<std::size_t>(device_count));
}

bool Fleet::can_place(int device_id, const MigProfile& profile) const {
    const DeviceUsage& d = devices_.at(static_cast<std::size_t>(device_id));
    return d.used_compute + profile.compute_units <= compute_capacity_ &&
           d.used_memory + profile.memory_units <= memory_capacity_;
}

bool Fleet::can_place_anywhere(const MigProfile& profile) const {
    return pick_device(profile) >= 0;
}

int Fleet::pick_device(const MigProfile& profile) const {
    if (policy_ == PlacementPolicy::FirstFit) {
        for (int id = 0; id < device_count(); ++id) {
            if (can_place(id, profile)) {
                return id;
            }
        }
        return -1;
    }
    // best-fit: least residual capacity after placement, lowest id on ties
    int best = -1;
    int best_residual = 0;
    for (int id = 0; id < device_count(); ++id) {
        if (!can_place(id, profile)) {
            continue;
        }
        const DeviceUsage& d = devices_[static_cast<std::size_t>(id)];
        const int residual = (compute_capacity_ - d.used_compute - profile.compute_units) +
                             (memory_capacity_ - d.used_memory - profile.memory_units);
        if (best < 0 || residual < best_residual) {
            best = id;
            best_residual = residual;
        }
    }
    return best;
}

std::optional<std::uint64_t> Fleet::allocate(const MigProfile& profile, const std::string& job_id,
                                             TimeMs now) {
    const int device_id = pick_device(profile);
    if (device_id < 0) {
        return std::nullopt;
    }
    DeviceUsage& d = devices_[static_cast<std::size_t>(device_id)];
    d.used_compute += profile.compute_units;
    d.used_memory += profile.memory_units;

    const std::uint64_t id = next_slice_id_++;
    allocations_.emplace(id, SliceAllocation{id, device_id, profile.name, profile.compute_units,
                                             profile.memory_units, job_id, now});
    if (running_jobs() > peak_running_) {
        peak_running_ = running_jobs();
        peak_layout_ = devices_;
    }
    record_sample(now);
    return id;
}

void Fleet::free(std::uint64_t slice_id, TimeMs now) {
    auto it = allocations_.find(slice_id);
    if (it == allocations_.end()) {
        throw std::logic_error("Fleet::free: unknown or already freed slice " +
                               std::to_string(slice_id));
    }
    DeviceUsage& d = devices_[static_cast<std::size_t>(it->second.device_id)];
    d.used_compute -= it->second.compute_units;
    d.used_memory -= it->second.memory_units;
    busy_ms_ += now - it->second.allocated_at;
    allocations_.erase(it);
    record_sample(now);
    check_invariants();
}

const SliceAllocation& Fleet::slice(std::uint64_t slice_id) const {
    auto it = allocations_.find(slice_id);
    if (it == allocations_.end()) {
        throw std::logic_error("Fleet::slice: unknown slice " + std::to_string(slice_id));
    }
    return it->second;
}

int Fleet::stranded_compute_units(int device_id, int smallest_profile_memory) const {
    const DeviceUsage& d = devices_.at(static_cast<std::size_t>(device_id));
    if (memory_capacity_ - d.used_memory >= smallest_profile_memory) {
        return 0;
    }
    return compute_capacity_ - d.used_compute;
}

double Fleet::allocated_compute_fraction() const {
    std::int64_t used = 0;
    for (const DeviceUsage& d : devices_) {
        used += d.used_compute;
    }
    return static_cast<double>(used) /
           (static_cast<double>(compute_capacity_) * device_count());
}

double Fleet::allocated_memory_fraction() const {
    std::int64_t used = 0;
    for (const DeviceUsage& d : devices_) {
        used += d.used_memory;
    }
    return static_cast<double>(used) /
           (static_cast<double>(memory_capacity_) * device_count());
}

void Fleet::record_sample(TimeMs now) {
    samples_.push_back(OccupancySample{now, allocated_compute_fraction(),
                                       allocated_memory_fraction(), running_jobs()});
}

Fleet::Snapshot Fleet::snapshot() const {
    return Snapshot{devices_, allocations_, next_slice_id_, samples_.size(), peak_running_,
                    peak_layout_,    busy_ms_};
}

void Fleet::restore(const Snapshot& snap) {
    devices_ = snap.devices;
    allocations_ = snap.allocations;
    next_slice_id_ = snap.next_slice_id;
    samples_.resize(snap.sample_count);
    peak_running_ = snap.peak_running;
    peak_layout_ = snap.peak_layout;
    busy_ms_ = snap.busy_ms;
}

void Fleet::check_invariants() const {
    std::vector<DeviceUsage> derived(devices_.size());
    for (const auto& [id, alloc] : allocations_) {
        DeviceUsage& d = derived.at(static_cast<std::size_t>(alloc.device_id));
        d.used_compute += alloc.compute_units;
        d.used_memory += alloc.memory_units;
    }
    for (std::size_t i = 0; i < devices_.size(); ++i) {
        if (devices_[i].used_compute != derived[i].used_compute ||
            devices_[i].used_memory != derived[i].used_memory) {
            throw std::logic_error("Fleet: device counters diverged from live allocations");
        }
        if (devices_[i].used_compute < 0 || devices_[i].used_compute > compute_capacity_ ||
            devices_[i].used_memory < 0 || devices_[i].used_memory > memory_capacity_) {
            throw std::logic_error("Fleet: device " + std::to_string(i) +
                                   " unit usage out of bounds");
        }
    }
}

OccupancyMeans occupancy_timeline(const std::vector<OccupancySample>& samples, TimeMs run_end) {
    if (samples.empty()) {
        throw std::invalid_argument("occupancy_timeline: no samples");
    }
    const TimeMs start = samples.front().t;
    if (run_end <= start) {
        return OccupancyMeans{samples.back().allocated_compute_fraction,
                              samples.back().allocated_memory_fraction};
    }
    double compute_area = 0.0;
    double memory_area = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const TimeMs next = (i + 1 < samples.size()) ? samples[i + 1].t : run_end;
        const double width = static_cast<double>(next - samples[i].t);
        compute_area += samples[i].allocated_compute_fraction * width;
        memory_area += samples[i].allocated_memory_fraction * width;
    }
    const double total = static_cast<double>(run_end - start);
    return OccupancyMeans{compute_area / total, memory_area / total};
}

}  // namespace orchsim::accel
