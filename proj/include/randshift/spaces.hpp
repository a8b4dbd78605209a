#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "randshift/series.hpp"

namespace randshift {

class WeightSequence;

/// The four concrete sequence spaces: l^p, c_0, H(C) and K^N.
struct SpaceKind {
  enum class Tag { Lp, C0, Entire, FullProduct };

  Tag tag = Tag::Lp;
  double p = 2.0;  // only meaningful for Lp

  static SpaceKind lp(double p);
  static SpaceKind c0() { return {Tag::C0, 0.0}; }
  static SpaceKind entire() { return {Tag::Entire, 0.0}; }
  static SpaceKind full_product() { return {Tag::FullProduct, 0.0}; }

  /// "lp:<p>", "c0", "entire" or "full".
  static SpaceKind parse(std::string_view text);
  std::string to_string() const;
};

/// Scalar growth diagnostic D_n per checkpoint. For K^N the diagnostic is
/// identically +infinity; that is carried by `unbounded` and every stored
/// value is the sentinel `kUnboundedSentinel` rather than a float infinity.
struct DiagnosticSeries {
  static constexpr double kUnboundedSentinel = 1.7976931348623157e308;

  std::vector<std::uint64_t> checkpoints;
  std::vector<double> values;
  bool unbounded = false;
};

enum class Verdict { NonUniversalEvidence, Inconclusive, WeakMixingEvidence, MixingEvidence };

const char* to_string(Verdict v);
/// NonUniversal < Inconclusive = WeakMixing < Mixing.
int verdict_rank(Verdict v);

/// Finite-horizon thresholds used to turn a diagnostic series into evidence.
struct ClassifyPolicy {
  double tail_fraction = 0.25;
  double theta_up = 5.0;
  double theta_bound = 2.0;
  /// NonUniversal evidence tolerates a trend slope up to this value; a
  /// bounded diagnostic that wobbles around a level has a noisy slope sign.
  double slope_tolerance = 0.1;

  /// Defaults per space: the l^p/c_0 values above, and rescaled thresholds
  /// for H(C), whose diagnostic (1/n) log prod grows only logarithmically in
  /// the worked examples.
  static ClassifyPolicy defaults_for(const SpaceKind& space);

  void validate() const;
};

struct SpaceVerdict {
  Verdict label = Verdict::Inconclusive;
  double running_max = 0.0;
  double tail_min = 0.0;
  double trend_slope = 0.0;
  ClassifyPolicy policy;
};

DiagnosticSeries diagnostic_series(const SpaceKind& space, const LogProductSeries& v);

SpaceVerdict classify_series(const DiagnosticSeries& d, const ClassifyPolicy& policy);

/// Verdict for the single shift B_w, whose cocycle degenerates to the plain
/// weight product. Checkpoints follow the default geometric grid.
SpaceVerdict single_shift_verdict(const SpaceKind& space, const WeightSequence& w, std::uint64_t horizon,
                                  const ClassifyPolicy& policy);
SpaceVerdict single_shift_verdict(const SpaceKind& space, const WeightSequence& w, std::uint64_t horizon);

}  // namespace randshift
