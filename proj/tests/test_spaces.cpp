#include <doctest.h>

#include <cmath>

#include "randshift/error.hpp"
#include "randshift/spaces.hpp"
#include "randshift/weights.hpp"

using namespace randshift;

TEST_CASE("space kinds parse") {
  CHECK(SpaceKind::parse("lp:2").tag == SpaceKind::Tag::Lp);
  CHECK(SpaceKind::parse("lp:1.5").p == doctest::Approx(1.5));
  CHECK(SpaceKind::parse("c0").tag == SpaceKind::Tag::C0);
  CHECK(SpaceKind::parse("entire").tag == SpaceKind::Tag::Entire);
  CHECK(SpaceKind::parse("full").tag == SpaceKind::Tag::FullProduct);
  CHECK(SpaceKind::parse(SpaceKind::lp(3.0).to_string()).p == doctest::Approx(3.0));
  CHECK_THROWS_AS(SpaceKind::parse("lp:0.5"), Error);
  CHECK_THROWS_AS(SpaceKind::parse("hilbert"), Error);
}

TEST_CASE("verdict ranks") {
  CHECK(verdict_rank(Verdict::NonUniversalEvidence) < verdict_rank(Verdict::Inconclusive));
  CHECK(verdict_rank(Verdict::Inconclusive) == verdict_rank(Verdict::WeakMixingEvidence));
  CHECK(verdict_rank(Verdict::WeakMixingEvidence) < verdict_rank(Verdict::MixingEvidence));
}

TEST_CASE("single shifts on l^p") {
  const auto space = SpaceKind::lp(2.0);
  CHECK(single_shift_verdict(space, WeightSequence::constant(2.0), 4096).label == Verdict::MixingEvidence);
  CHECK(single_shift_verdict(space, WeightSequence::constant(0.5), 4096).label == Verdict::NonUniversalEvidence);
  CHECK(single_shift_verdict(space, WeightSequence::harmonic_down(), 100000).label ==
        Verdict::NonUniversalEvidence);
}

TEST_CASE("the full product space is always unbounded") {
  LogProductSeries v;
  v.checkpoints = {1, 2, 4};
  v.values = {-1.0, -2.0, -3.0};
  const auto d = diagnostic_series(SpaceKind::full_product(), v);
  CHECK(d.unbounded);
  for (double x : d.values) CHECK(x == DiagnosticSeries::kUnboundedSentinel);
  CHECK(classify_series(d, ClassifyPolicy::defaults_for(SpaceKind::full_product())).label ==
        Verdict::MixingEvidence);
}

TEST_CASE("entire functions use V_n / n") {
  LogProductSeries v;
  v.checkpoints = {10, 100};
  v.values = {5.0, 40.0};
  const auto d = diagnostic_series(SpaceKind::entire(), v);
  CHECK(d.values[0] == doctest::Approx(0.5));
  CHECK(d.values[1] == doctest::Approx(0.4));
}

TEST_CASE("classification rules") {
  ClassifyPolicy policy;
  DiagnosticSeries d;
  d.checkpoints = {64, 128, 256, 512, 1024, 2048, 4096, 8192};

  d.values = {1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(classify_series(d, policy).label == Verdict::MixingEvidence);

  d.values = {0, 6, 0, 7, 0, 8, 0, 9};  // unbounded along a subsequence only
  CHECK(classify_series(d, policy).label == Verdict::WeakMixingEvidence);

  d.values = {0.5, 1.0, 0.8, 1.2, 0.9, 1.1, 1.0, 1.0};
  CHECK(classify_series(d, policy).label == Verdict::NonUniversalEvidence);

  d.values = {0, 1, 2, 3, 3.5, 4, 4.2, 4.5};  // still climbing, never above 5
  CHECK(classify_series(d, policy).label == Verdict::Inconclusive);
}

TEST_CASE("policy validation") {
  ClassifyPolicy p;
  p.tail_fraction = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = ClassifyPolicy{};
  p.theta_bound = p.theta_up + 1.0;
  CHECK_THROWS_AS(p.validate(), Error);
}
