#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "core/hash.hpp"

namespace orchsim {

// Seeded random stream with a stable label per consumer ("trace",
// "baseline-sched", "load-gen", ...). Distributions are hand-rolled on top of
// mt19937_64 so draws do not depend on the standard library implementation;
// two runs with identical (seed, label) produce identical sequences.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label)
        : seed_(seed), label_(label), engine_(mix64(mix64(seed) ^ fnv1a64(label))) {}

    std::uint64_t seed() const { return seed_; }
    const std::string& label() const { return label_; }

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, n), unbiased via rejection
    std::uint64_t next_below(std::uint64_t n);

    // uniform integer in [lo, hi], inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // uniform in [0, 1)
    double uniform_real();

    // standard normal via Box-Muller
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    // log-normal parameterized by the underlying normal's (mu, sigma)
    double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::string label_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace orchsim
