#include <doctest.h>

#include <cmath>
#include <vector>

#include "randshift/convolution.hpp"
#include "randshift/rng.hpp"

using namespace randshift;

TEST_CASE("fft convolution matches the direct sum") {
  SplitMix64 rng(1);
  for (std::size_t na : {1U, 2U, 7U, 64U, 1000U}) {
    for (std::size_t nb : {1U, 3U, 129U, 1000U}) {
      std::vector<double> a(na), b(nb);
      for (auto& x : a) x = rng.uniform() - 0.5;
      for (auto& x : b) x = rng.uniform() * 4 - 2;
      const auto fast = linear_convolution(a, b);
      REQUIRE(fast.size() == na + nb - 1);
      for (std::size_t n = 0; n < fast.size(); ++n) {
        double direct = 0.0;
        for (std::size_t i = 0; i < na; ++i) {
          if (n >= i && n - i < nb) direct += a[i] * b[n - i];
        }
        REQUIRE(std::fabs(fast[n] - direct) <= 1e-10);
      }
      const auto slow = linear_convolution_naive(a, b);
      for (std::size_t n = 0; n < fast.size(); ++n) REQUIRE(std::fabs(fast[n] - slow[n]) <= 1e-10);
    }
  }
}

TEST_CASE("empty operands") {
  const std::vector<double> a = {1.0, 2.0};
  const std::vector<double> none;
  CHECK(linear_convolution(a, none).empty());
  CHECK(linear_convolution_naive(none, a).empty());
}
