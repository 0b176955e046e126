#pragma once
#include <cstdint>

namespace orchsim {

// Virtual time in integer milliseconds. All model quantities (seconds,
// minutes) convert exactly, which keeps percentile and makespan comparisons
// free of float drift.
using TimeMs = std::int64_t;

constexpr double ms_to_minutes(TimeMs t) { return static_cast<double>(t) / 60000.0; }
constexpr TimeMs seconds_to_ms(std::int64_t s) { return s * 1000; }

}  // namespace orchsim
