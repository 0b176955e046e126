#include "metrics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orchsim::metrics {

double percentile(std::vector<double> samples, double p) {
    if (samples.empty()) {
        throw std::invalid_argument("percentile: empty sample list");
    }
    if (!(p > 0.0) || p > 100.0) {
        throw std::invalid_argument("percentile: p must be in (0, 100]");
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
    rank = std::max<std::size_t>(1, std::min(rank, n));
    return samples[rank - 1];
}

double mean(const std::vector<double>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("mean: empty sample list");
    }
    double sum = 0.0;
    for (double s : samples) {
        sum += s;
    }
    return sum / static_cast<double>(samples.size());
}

double sample_variance(const std::vector<double>& samples) {
    if (samples.size() < 2) {
        return 0.0;
    }
    const double m = mean(samples);
    double acc = 0.0;
    for (double s : samples) {
        acc += (s - m) * (s - m);
    }
    return acc / static_cast<double>(samples.size() - 1);
}

double ci95_half_width(const std::vector<double>& samples) {
    if (samples.size() < 2) {
        return 0.0;
    }
    return 1.96 * std::sqrt(sample_variance(samples) /
                            static_cast<double>(samples.size()));
}

}  // namespace orchsim::metrics
