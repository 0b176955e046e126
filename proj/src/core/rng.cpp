#include "core/rng.hpp"

#include <stdexcept>

namespace orchsim {

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0) {
        throw std::logic_error("RngStream::next_below: n must be positive");
    }
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) {
            return r % n;
        }
    }
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
        throw std::logic_error("RngStream::uniform_int: empty range");
    }
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<std::int64_t>(next_below(span));
}

double RngStream::uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1]; avoids log(0)
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform_real();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace orchsim
