#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace randshift {

double normal_cdf(double z);

/// Kolmogorov-Smirnov distance between the empirical law of `sample` and N(0,1).
double ks_distance_normal(std::span<const double> sample);

struct Interval95 {
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval95 wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// Linear-interpolated quantile (type 7) of an unsorted sample.
double quantile(std::vector<double> sample, double q);

}  // namespace randshift
