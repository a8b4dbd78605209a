#include "randshift/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "randshift/error.hpp"
#include "randshift/weights.hpp"

namespace randshift {

SpaceKind SpaceKind::lp(double p) {
  require(std::isfinite(p) && p >= 1.0, ErrorKind::InvalidInput, "l^p requires p >= 1");
  return {Tag::Lp, p};
}

SpaceKind SpaceKind::parse(std::string_view text) {
  if (text == "c0") return c0();
  if (text == "entire") return entire();
  if (text == "full") return full_product();
  if (text.starts_with("lp:")) {
    const std::string num(text.substr(3));
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == num.size() && used > 0, ErrorKind::InvalidInput, "bad exponent in '" + std::string(text) + "'");
    return lp(p);
  }
  fail(ErrorKind::InvalidInput, "unknown space '" + std::string(text) + "' (expected lp:<p>, c0, entire, full)");
}

std::string SpaceKind::to_string() const {
  switch (tag) {
    case Tag::Lp: {
      std::ostringstream out;
      out.precision(17);
      out << "lp:" << p;
      return out.str();
    }
    case Tag::C0:
      return "c0";
    case Tag::Entire:
      return "entire";
    case Tag::FullProduct:
      return "full";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::NonUniversalEvidence:
      return "NonUniversalEvidence";
    case Verdict::Inconclusive:
      return "Inconclusive";
    case Verdict::WeakMixingEvidence:
      return "WeakMixingEvidence";
    case Verdict::MixingEvidence:
      return "MixingEvidence";
  }
  return "?";
}

int verdict_rank(Verdict v) {
  switch (v) {
    case Verdict::NonUniversalEvidence:
      return 0;
    case Verdict::Inconclusive:
    case Verdict::WeakMixingEvidence:
      return 1;
    case Verdict::MixingEvidence:
      return 2;
  }
  return 1;
}

ClassifyPolicy ClassifyPolicy::defaults_for(const SpaceKind& space) {
  ClassifyPolicy policy;
  if (space.tag == SpaceKind::Tag::Entire) {
    policy.theta_up = 1.5;
    policy.theta_bound = 1.0;
  }
  return policy;
}

void ClassifyPolicy::validate() const {
  require(tail_fraction > 0.0 && tail_fraction < 1.0, ErrorKind::InvalidInput, "tail_fraction must lie in (0,1)");
  require(theta_bound > 0.0 && theta_up > theta_bound, ErrorKind::InvalidInput,
          "policy requires theta_up > theta_bound > 0");
  require(slope_tolerance >= 0.0, ErrorKind::InvalidInput, "slope_tolerance must be >= 0");
}

DiagnosticSeries diagnostic_series(const SpaceKind& space, const LogProductSeries& v) {
  require(!v.empty(), ErrorKind::InvalidInput, "diagnostic of an empty series");
  require(v.checkpoints.size() == v.values.size(), ErrorKind::InvalidInput, "series length mismatch");
  DiagnosticSeries d;
  d.checkpoints = v.checkpoints;
  d.values.resize(v.size());
  switch (space.tag) {
    case SpaceKind::Tag::Lp:
    case SpaceKind::Tag::C0:
      d.values = v.values;
      break;
    case SpaceKind::Tag::Entire:
      for (std::size_t i = 0; i < v.size(); ++i) {
        d.values[i] = v.values[i] / static_cast<double>(v.checkpoints[i]);
      }
      break;
    case SpaceKind::Tag::FullProduct:
      d.unbounded = true;
      std::fill(d.values.begin(), d.values.end(), DiagnosticSeries::kUnboundedSentinel);
      break;
  }
  return d;
}

SpaceVerdict classify_series(const DiagnosticSeries& d, const ClassifyPolicy& policy) {
  policy.validate();
  require(!d.values.empty() && d.values.size() == d.checkpoints.size(), ErrorKind::InvalidInput,
          "classification of an empty series");

  SpaceVerdict verdict;
  verdict.policy = policy;
  if (d.unbounded) {
    verdict.label = Verdict::MixingEvidence;
    verdict.running_max = DiagnosticSeries::kUnboundedSentinel;
    verdict.tail_min = DiagnosticSeries::kUnboundedSentinel;
    verdict.trend_slope = 0.0;
    return verdict;
  }

  const std::size_t m = d.values.size();
  const auto tail_count = std::max<std::size_t>(
      std::min<std::size_t>(m, 2), static_cast<std::size_t>(std::ceil(policy.tail_fraction * static_cast<double>(m))));
  const std::size_t first = m - tail_count;

  verdict.running_max = *std::max_element(d.values.begin(), d.values.end());
  verdict.tail_min = *std::min_element(d.values.begin() + static_cast<std::ptrdiff_t>(first), d.values.end());

  // Least-squares slope of D against log n over the tail window.
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = first; i < m; ++i) {
    mean_x += std::log(static_cast<double>(d.checkpoints[i]));
    mean_y += d.values[i];
  }
  mean_x /= static_cast<double>(tail_count);
  mean_y /= static_cast<double>(tail_count);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = first; i < m; ++i) {
    const double dx = std::log(static_cast<double>(d.checkpoints[i])) - mean_x;
    sxx += dx * dx;
    sxy += dx * (d.values[i] - mean_y);
  }
  verdict.trend_slope = sxx > 0.0 ? sxy / sxx : 0.0;

  if (verdict.tail_min >= policy.theta_up && verdict.trend_slope > 0.0) {
    verdict.label = Verdict::MixingEvidence;
  } else if (verdict.running_max >= policy.theta_up) {
    verdict.label = Verdict::WeakMixingEvidence;
  } else if (verdict.running_max <= policy.theta_bound && verdict.trend_slope <= policy.slope_tolerance) {
    verdict.label = Verdict::NonUniversalEvidence;
  } else {
    verdict.label = Verdict::Inconclusive;
  }
  return verdict;
}

SpaceVerdict single_shift_verdict(const SpaceKind& space, const WeightSequence& w, std::uint64_t horizon,
                                  const ClassifyPolicy& policy) {
  require(continuity_on(space, w), ErrorKind::DiscontinuousShift,
          "weights " + w.to_string() + " do not define a continuous shift on " + space.to_string());
  require(horizon >= 1, ErrorKind::InvalidInput, "horizon must be >= 1");
  LogProductSeries v;
  v.checkpoints = geometric_grid(64, 2.0, horizon);
  v.values.reserve(v.checkpoints.size());
  for (auto n : v.checkpoints) v.values.push_back(static_cast<double>(w.prefix_log_sum(n)));
  return classify_series(diagnostic_series(space, v), policy);
}

SpaceVerdict single_shift_verdict(const SpaceKind& space, const WeightSequence& w, std::uint64_t horizon) {
  return single_shift_verdict(space, w, horizon, ClassifyPolicy::defaults_for(space));
}

}  // namespace randshift
