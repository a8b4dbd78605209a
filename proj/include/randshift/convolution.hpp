#pragma once

#include <span>
#include <vector>

namespace randshift {

/// Full linear convolution c[n] = sum_i a[i] b[n-i], |c| = |a| + |b| - 1,
/// via real-to-complex FFTs (FFTW). Work buffers are local to the call.
std::vector<double> linear_convolution(std::span<const double> a, std::span<const double> b);

/// Reference O(|a||b|) convolution with compensated summation.
std::vector<double> linear_convolution_naive(std::span<const double> a, std::span<const double> b);

}  // namespace randshift
