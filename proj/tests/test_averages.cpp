#include <doctest.h>

#include <cmath>
#include <numbers>

#include "randshift/averages.hpp"
#include "randshift/error.hpp"
#include "randshift/stats.hpp"

using namespace randshift;

namespace {

// M_n = sum_{l<n} p_{n-l} f_l / P_n with P_n summed directly
double direct_norlund(const NorlundWeights& p, const std::vector<double>& f, std::uint64_t n) {
  long double num = 0.0L;
  long double den = 0.0L;
  for (std::uint64_t l = 0; l < n; ++l) {
    num += static_cast<long double>(p.weight(n - l)) * f[l];
    den += p.weight(l + 1);
  }
  return static_cast<double>(num / den);
}

std::vector<double> random_values(std::uint64_t seed, std::size_t n) {
  SplitMix64 rng(seed);
  std::vector<double> f(n);
  for (auto& x : f) x = rng.uniform() < 0.3 ? 1.0 : 0.0;
  return f;
}

}  // namespace

TEST_CASE("weight families") {
  CHECK(NorlundWeights::harmonic().weight(4) == doctest::Approx(0.25));
  CHECK(NorlundWeights::cesaro().weight(9) == 1.0);
  CHECK(NorlundWeights::log().weight(1) == 0.0);
  CHECK(static_cast<double>(NorlundWeights::cesaro().prefix(1000)) == 1000.0);
  CHECK(static_cast<double>(NorlundWeights::log().prefix(50)) == doctest::Approx(std::lgamma(51.0)));
  long double h = 0.0L;
  for (int k = 1; k <= 5000; ++k) h += 1.0L / k;
  CHECK(static_cast<double>(NorlundWeights::harmonic().prefix(5000)) == doctest::Approx(static_cast<double>(h)));

  const auto c = NorlundWeights::parse("custom:1,2,3");
  CHECK(c.weight(3) == 3.0);
  CHECK_THROWS_AS(c.weight(4), Error);
  CHECK(NorlundWeights::parse(c.to_string()).weight(2) == 2.0);
  CHECK_THROWS_AS(NorlundWeights::parse("custom:1,-2"), Error);
  CHECK_THROWS_AS(NorlundWeights::parse("geometric"), Error);
}

TEST_CASE("regularity") {
  CHECK(check_regularity(NorlundWeights::cesaro()).holds);
  CHECK(check_regularity(NorlundWeights::harmonic()).holds);
  CHECK(check_regularity(NorlundWeights::log()).holds);
  CHECK(check_regularity(NorlundWeights::harmonic()).analytic);
  const auto custom = check_regularity(NorlundWeights::custom({1, 1, 1, 1}), 4);
  CHECK_FALSE(custom.analytic);
  CHECK_FALSE(custom.warning.empty());
}

TEST_CASE("Cesaro means are Birkhoff means") {
  const auto f = random_values(4, 3000);
  const std::vector<std::uint64_t> grid = {1, 10, 999, 3000};
  const auto m = norlund_mean_series_naive(NorlundWeights::cesaro(), f, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) CHECK(m.values[j] == birkhoff_mean(f, grid[j]));
}

TEST_CASE("fft and naive Nörlund means against the definition") {
  const auto f = random_values(5, 2000);
  for (const auto& p : {NorlundWeights::harmonic(), NorlundWeights::log(), NorlundWeights::cesaro()}) {
    const auto fast = norlund_mean_series(p, f, 2000);
    const std::vector<std::uint64_t> grid = {2, 3, 100, 1500, 2000};
    const auto naive = norlund_mean_series_naive(p, f, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double expect = direct_norlund(p, f, grid[j]);
      CHECK(std::fabs(naive.values[j] - expect) <= 1e-12);
      CHECK(std::fabs(fast.values[grid[j] - 1] - expect) <= 1e-9);
    }
  }
  const auto log_series = norlund_mean_series(NorlundWeights::log(), f, 10);
  CHECK_FALSE(log_series.defined[0]);
  CHECK(std::isnan(log_series.values[0]));
  CHECK(log_series.defined[1]);
}

TEST_CASE("centred Birkhoff sums") {
  const std::vector<double> f = {1, 0, 0, 1, 1};
  const auto s = centered_birkhoff_sums(f, 0.5, {1, 2, 3, 5});
  CHECK(s.values[0] == doctest::Approx(0.5));
  CHECK(s.values[1] == doctest::Approx(0.0));
  CHECK(s.values[2] == doctest::Approx(-0.5));
  CHECK(s.values[3] == doctest::Approx(0.5));
}

TEST_CASE("indicator values") {
  SymbolStream s;
  s.k = 3;
  s.symbols = {1, 3, 2, 1};
  CHECK(indicator_values(s) == std::vector<double>{1, 0, 0, 1});
  CHECK(indicator_values(s, 3) == std::vector<double>{0, 1, 0, 0});
}

TEST_CASE("trigonometric polynomials") {
  const auto f = TrigPolynomial::parse("1+0.5*cos2-sin3");
  const double x = 0.1;
  const double pi = std::numbers::pi;
  CHECK(f(x) == doctest::Approx(1 + 0.5 * std::cos(4 * pi * x) - std::sin(6 * pi * x)));
  CHECK_THROWS_AS(TrigPolynomial::parse("cos0"), Error);
  CHECK_THROWS_AS(TrigPolynomial::parse("1+tan2"), Error);
}

TEST_CASE("uniform deviation along a rotation") {
  const auto system = ErgodicSystem::rotation(kGoldenFrac);
  const auto f = TrigPolynomial::parse("0.3+cos1-0.5*sin2");
  const auto p = NorlundWeights::harmonic();
  const std::uint64_t n = 300;
  const std::uint64_t starts = 16;
  const auto r = oxtoby_sup_experiment(system, f, p, n, starts);
  REQUIRE(r.deviations.size() == starts);
  const double alpha = to_double(kGoldenFrac);
  double sup = 0.0;
  for (std::uint64_t j = 0; j < starts; ++j) {
    std::vector<double> values(n);
    for (std::uint64_t l = 0; l < n; ++l) {
      const double x = static_cast<double>(j) / starts + static_cast<double>(l) * alpha;
      values[l] = f(x - std::floor(x));
    }
    const double dev = direct_norlund(p, values, n) - 0.3;
    CHECK(std::fabs(r.deviations[j] - dev) <= 1e-9);
    sup = std::max(sup, std::fabs(dev));
  }
  CHECK(r.sup_deviation == doctest::Approx(sup));
  CHECK(oxtoby_sup_experiment(system, TrigPolynomial::parse("2"), p, n, 8).sup_deviation <= 1e-15);
  CHECK_THROWS_AS(oxtoby_sup_experiment(ErgodicSystem::doubling(), f, p, n, 8), Error);
}

TEST_CASE("L2 experiment targets the cell measure") {
  const auto r = norlund_l2_experiment(ErgodicSystem::bernoulli({0.5, 0.5}), Partition(), NorlundWeights::cesaro(),
                                       {100, 10000}, 50, 3);
  CHECK(r.target == doctest::Approx(0.5));
  CHECK(r.l2_error.size() == 2);
  // Cesaro error is about sqrt(p(1-p)/n)
  CHECK(r.l2_error[1] < r.l2_error[0]);
  CHECK(r.l2_error[1] == doctest::Approx(0.005).epsilon(0.4));
}

TEST_CASE("clt experiment") {
  const auto r = clt_experiment(ErgodicSystem::bernoulli({0.5, 0.5}), Partition(), {1024}, 400, 9);
  CHECK(r.variance_known);
  CHECK(r.variance == doctest::Approx(0.25));
  CHECK(r.ks[0] < 0.1);
  CHECK_THROWS_AS(clt_experiment(ErgodicSystem::doubling(), Partition::parse({"1:[0,0.5)", "2:[0.5,1)"}), {64}, 10, 1),
                  Error);
}

TEST_CASE("statistics helpers") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975));
  CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({4, 1, 3, 2}, 1.0) == 4.0);
  const auto w = wilson_interval(0, 10);
  CHECK(w.lower == doctest::Approx(0.0));
  CHECK(w.upper == doctest::Approx(0.2775).epsilon(0.001));
  const auto half = wilson_interval(50, 100);
  CHECK(half.lower == doctest::Approx(0.4038).epsilon(0.001));
  std::vector<double> exact;
  for (int i = 1; i <= 999; ++i) {
    // inverse cdf by bisection
    double lo = -10, hi = 10;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (normal_cdf(mid) < i / 1000.0 ? lo : hi) = mid;
    }
    exact.push_back(lo);
  }
  CHECK(ks_distance_normal(exact) <= 0.0011);
}
