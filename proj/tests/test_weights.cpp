#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "randshift/error.hpp"
#include "randshift/spaces.hpp"
#include "randshift/weights.hpp"

using namespace randshift;

namespace {

// plain double loop; the library uses closed forms where it can
long double summed(const WeightSequence& w, std::uint64_t n) {
  long double s = 0.0L;
  for (std::uint64_t l = 1; l <= n; ++l) s += w.log_weight(l);
  return s;
}

}  // namespace

TEST_CASE("log weights of the built-in families") {
  CHECK(WeightSequence::constant(2.0).log_weight(17) == doctest::Approx(std::log(2.0)));
  CHECK(WeightSequence::harmonic_up().log_weight(1) == doctest::Approx(std::log(1.5)));
  CHECK(WeightSequence::harmonic_down().log_weight(3) == doctest::Approx(std::log(0.75)));
  CHECK(WeightSequence::poly().log_weight(10) == doctest::Approx(std::log(10.0)));
  CHECK(WeightSequence::inv_poly().log_weight(10) == doctest::Approx(-std::log(10.0)));
  CHECK(WeightSequence::scaled(3.0, WeightSequence::poly()).log_weight(5) == doctest::Approx(std::log(15.0)));
}

TEST_CASE("prefix log sums agree with term-by-term summation") {
  const WeightSequence families[] = {WeightSequence::constant(0.7),   WeightSequence::harmonic_up(),
                                     WeightSequence::harmonic_down(), WeightSequence::poly(),
                                     WeightSequence::inv_poly(),      WeightSequence::scaled(2.5, WeightSequence::harmonic_down())};
  for (const auto& w : families) {
    for (std::uint64_t n : {1ULL, 2ULL, 10ULL, 999ULL, 5000ULL}) {
      const long double expect = summed(w, n);
      CHECK(std::fabs(static_cast<double>(w.prefix_log_sum(n) - expect)) <= 1e-9 * (1.0 + std::fabs(static_cast<double>(expect))));
    }
  }
}

TEST_CASE("telescoping closed forms") {
  // prod (1 + 1/(l+1)) = (n+2)/2, prod (1 - 1/(l+1)) = 1/(n+1), prod l = n!
  for (std::uint64_t n : {1ULL, 7ULL, 100000ULL}) {
    const double nd = static_cast<double>(n);
    CHECK(static_cast<double>(WeightSequence::harmonic_up().prefix_log_sum(n)) == doctest::Approx(std::log((nd + 2) / 2)));
    CHECK(static_cast<double>(WeightSequence::harmonic_down().prefix_log_sum(n)) == doctest::Approx(-std::log(nd + 1)));
    CHECK(static_cast<double>(WeightSequence::poly().prefix_log_sum(n)) == doctest::Approx(std::lgamma(nd + 1)));
  }
}

TEST_CASE("scaling identity for prefix sums") {
  const double c = 3.7;
  const auto v = WeightSequence::harmonic_down();
  const auto w = WeightSequence::scaled(c, v);
  for (std::uint64_t n = 1; n <= 1000000; n *= 10) {
    const long double gap = w.prefix_log_sum(n) - n * std::log(static_cast<long double>(c)) - v.prefix_log_sum(n);
    CHECK(std::fabs(static_cast<double>(gap)) <= 1e-10);
  }
}

TEST_CASE("suprema and boundedness") {
  CHECK(WeightSequence::harmonic_up().sup_log() == doctest::Approx(std::log(1.5)));
  CHECK(WeightSequence::harmonic_down().sup_log() <= 0.0);
  CHECK(std::isinf(WeightSequence::poly().sup_log()));
  CHECK(WeightSequence::harmonic_up().bounded());
  CHECK_FALSE(WeightSequence::poly().bounded());
  CHECK(WeightSequence::poly().root_bounded());
}

TEST_CASE("continuity per space") {
  CHECK(continuity_on(SpaceKind::lp(2.0), WeightSequence::harmonic_up()));
  CHECK_FALSE(continuity_on(SpaceKind::lp(2.0), WeightSequence::poly()));
  CHECK_FALSE(continuity_on(SpaceKind::c0(), WeightSequence::poly()));
  CHECK(continuity_on(SpaceKind::entire(), WeightSequence::poly()));
  CHECK(continuity_on(SpaceKind::full_product(), WeightSequence::poly()));
}

TEST_CASE("parse and print round trip") {
  for (const char* spec : {"const:2", "harmonic-up", "harmonic-down", "poly", "inv-poly", "scale:0.5:poly"}) {
    const auto w = WeightSequence::parse(spec);
    const auto again = WeightSequence::parse(w.to_string());
    CHECK(again.log_weight(13) == doctest::Approx(w.log_weight(13)));
    CHECK(again.to_string() == w.to_string());
  }
  CHECK_THROWS_AS(WeightSequence::parse("const:0"), Error);
  CHECK_THROWS_AS(WeightSequence::parse("geometric"), Error);
  CHECK_THROWS_AS(WeightSequence::parse("scale:abc:poly"), Error);
}

TEST_CASE("tabulated families extend by their tail rule") {
  const auto last = WeightSequence::tabulated({0.1, 0.2, 0.3}, TailRule::RepeatLast);
  CHECK(last.log_weight(2) == doctest::Approx(0.2));
  CHECK(last.log_weight(50) == doctest::Approx(0.3));
  CHECK(static_cast<double>(last.prefix_log_sum(5)) == doctest::Approx(0.1 + 0.2 + 0.3 * 3));
  const auto periodic = WeightSequence::tabulated({0.1, -0.4}, TailRule::Periodic);
  CHECK(periodic.log_weight(3) == doctest::Approx(0.1));
  CHECK(periodic.log_weight(4) == doctest::Approx(-0.4));
  CHECK(static_cast<double>(periodic.prefix_log_sum(5)) == doctest::Approx(0.1 * 3 - 0.4 * 2));
  CHECK(periodic.sup_log() == doctest::Approx(0.1));
}

TEST_CASE("table files") {
  const std::string path = "randshift_table_test.txt";
  {
    std::ofstream out(path);
    out << "# tail: periodic\n0.5\n-0.25\n";
  }
  const auto w = WeightSequence::load_table(path);
  CHECK(w.log_weight(3) == doctest::Approx(0.5));
  std::remove(path.c_str());
  CHECK_THROWS_AS(WeightSequence::load_table("does/not/exist.txt"), Error);
}
