#pragma once
#include <vector>

namespace orchsim::metrics {

// Nearest-rank percentile: the ascending-order sample at index
// ceil(p/100 * n), 1-based. p must lie in (0, 100].
double percentile(std::vector<double> samples, double p);

double mean(const std::vector<double>& samples);
double sample_variance(const std::vector<double>& samples);

// 95% confidence half-width by normal approximation.
double ci95_half_width(const std::vector<double>& samples);

}  // namespace orchsim::metrics
