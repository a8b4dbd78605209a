#include <doctest.h>

#include <cmath>
#include <limits>

#include "randshift/cocycle.hpp"
#include "randshift/error.hpp"
#include "randshift/ergodic.hpp"
#include "randshift/series.hpp"

using namespace randshift;

namespace {

// V_n = sum_{i<n} log|w^(s_i)_{n-i}| straight from the definition
double triangular(const Cocycle& c, const SymbolStream& s, std::uint64_t n) {
  long double v = 0.0L;
  for (std::uint64_t i = 0; i < n; ++i) v += c.weights[s.symbols[i] - 1].log_weight(n - i);
  return static_cast<double>(v);
}

SymbolStream random_symbols(std::uint64_t seed, std::uint64_t n, std::vector<double> probs) {
  return sample_symbols(ErgodicSystem::bernoulli(std::move(probs)), Partition(), seed, 0, n);
}

// one step of B_w: e_j -> w_j e_{j-1}, e_0 -> 0
SparseVector shift_once(const WeightSequence& w, const SparseVector& x) {
  SparseVector out;
  for (const auto& e : x.entries) {
    if (e.index == 0) continue;
    out.entries.push_back({e.index - 1, e.log_magnitude + w.log_weight(e.index), e.negative});
  }
  return out;
}

const WeightSequence kFamilies[] = {WeightSequence::constant(1.3), WeightSequence::constant(0.6),
                                    WeightSequence::harmonic_up(), WeightSequence::harmonic_down(),
                                    WeightSequence::poly(),        WeightSequence::inv_poly()};

}  // namespace

TEST_CASE("naive evaluator against the definition") {
  const Cocycle c{{WeightSequence::harmonic_up(), WeightSequence::inv_poly(), WeightSequence::constant(2.0)}};
  const auto s = random_symbols(3, 600, {0.3, 0.3, 0.4});
  const std::vector<std::uint64_t> grid = {1, 2, 3, 50, 599, 600};
  const auto v = log_product_series_naive(c, s, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) CHECK(v.values[j] == doctest::Approx(triangular(c, s, grid[j])));
}

TEST_CASE("fast evaluator agrees with the naive one for k = 2") {
  SplitMix64 pick(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& a = kFamilies[pick.next() % 6];
    const auto& b = kFamilies[pick.next() % 6];
    const double p = 0.1 + 0.8 * pick.uniform();
    const Cocycle c{{a, b}};
    const auto s = random_symbols(trial, 4096, {p, 1.0 - p});
    const auto fast = log_product_series_fast(c, s, 4096);
    const auto naive = log_product_series_naive(c, s, full_grid(4096));
    REQUIRE(fast.size() == 4096);
    double worst = 0.0;
    for (std::size_t n = 0; n < 4096; ++n) worst = std::max(worst, std::fabs(fast.values[n] - naive.values[n]));
    CHECK(worst <= 1e-7);
  }
  const Cocycle three{{kFamilies[0], kFamilies[1], kFamilies[2]}};
  CHECK_THROWS_AS(log_product_series_fast(three, random_symbols(1, 10, {0.3, 0.3, 0.4}), 10), Error);
}

TEST_CASE("commuting closed form") {
  const auto v = WeightSequence::harmonic_down();
  const auto w = WeightSequence::scaled(2.0, v);
  const auto ratio = commuting_ratio(w, v);
  REQUIRE(ratio.has_value());
  CHECK(*ratio == doctest::Approx(2.0));
  const auto s = random_symbols(8, 3000, {0.4, 0.6});
  const auto grid = geometric_grid(1, 2.0, 3000);
  const auto closed = log_product_commuting(*ratio, v, s, grid);
  const auto naive = log_product_series_naive(Cocycle{{w, v}}, s, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) CHECK(std::fabs(closed.values[j] - naive.values[j]) <= 1e-9);

  CHECK_FALSE(commuting_ratio(WeightSequence::harmonic_up(), WeightSequence::harmonic_down()).has_value());
  CHECK_FALSE(commuting_ratio(WeightSequence::poly(), WeightSequence::constant(1.0)).has_value());
}

TEST_CASE("product application equals iterated single shifts") {
  const Cocycle c{{WeightSequence::harmonic_up(), WeightSequence::poly()}};
  const auto s = random_symbols(21, 64, {0.5, 0.5});
  SparseVector x;
  for (std::uint64_t j = 0; j < 256; j += 5) x.entries.push_back({j, 0.01 * j, j % 3 == 0});
  for (std::uint64_t n : {1ULL, 2ULL, 17ULL, 64ULL}) {
    SparseVector step = x;
    for (std::uint64_t m = 0; m < n; ++m) step = shift_once(c.weights[s.symbols[m] - 1], step);
    const auto direct = apply_product(c, s, x, n);
    REQUIRE(direct.entries.size() == step.entries.size());
    for (std::size_t e = 0; e < step.entries.size(); ++e) {
      CHECK(direct.entries[e].index == step.entries[e].index);
      CHECK(direct.entries[e].negative == step.entries[e].negative);
      CHECK(std::fabs(direct.entries[e].log_magnitude - step.entries[e].log_magnitude) <= 1e-10);
    }
  }
}

TEST_CASE("T_n kills the first n basis vectors") {
  const Cocycle c{{WeightSequence::constant(3.0), WeightSequence::constant(0.2)}};
  const auto s = random_symbols(2, 40, {0.5, 0.5});
  for (std::uint64_t j = 0; j < 40; ++j) CHECK(apply_product(c, s, SparseVector::basis(j), 40).entries.empty());
  // T_n e_n = exp(V_n) e_0
  for (std::uint64_t n : {1ULL, 10ULL, 40ULL}) {
    const auto y = apply_product(c, s, SparseVector::basis(n), n);
    REQUIRE(y.entries.size() == 1);
    CHECK(y.entries[0].index == 0);
    CHECK(y.entries[0].log_magnitude == doctest::Approx(triangular(c, s, n)));
  }
}

TEST_CASE("sparse vector validation") {
  SparseVector bad;
  bad.entries = {{3, 0.0, false}, {3, 1.0, false}};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.entries = {{1, std::numeric_limits<double>::quiet_NaN(), false}};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("non-universality quick check") {
  const double sup_a[] = {std::log(0.9), std::log(1.05)};
  const double mu[] = {0.8, 0.2};
  CHECK(non_universality_quickcheck(sup_a, mu));
  const double mu_flip[] = {0.2, 0.8};
  CHECK_FALSE(non_universality_quickcheck(sup_a, mu_flip));
  const Cocycle unbounded{{WeightSequence::poly(), WeightSequence::inv_poly()}};
  CHECK_THROWS_AS(non_universality_quickcheck(unbounded, mu), Error);
}
