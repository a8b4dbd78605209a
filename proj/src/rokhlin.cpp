#include "randshift/rokhlin.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#include "randshift/cocycle.hpp"
#include "randshift/convolution.hpp"
#include "randshift/error.hpp"
#include "randshift/parallel.hpp"
#include "randshift/spaces.hpp"

namespace randshift {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------- markers

std::optional<std::uint64_t> find_marker(BitStream& bits, unsigned marker_length, std::uint64_t from,
                                         std::uint64_t limit) {
  require(marker_length >= 2 && marker_length <= 48, ErrorKind::InvalidInput, "marker length must lie in [2, 48]");
  const unsigned k = marker_length - 1;  // zeros after the leading 1
  const std::uint64_t r_min = from + 2;  // earliest admissible start of the zero run
  if (limit < from + 1) return std::nullopt;

  const std::uint64_t w0 = r_min >> 6;
  // Zero run ending just before word w0 (capped once it reaches k: such a
  // run starts before r_min and can never qualify).
  std::uint64_t carry = 0;
  std::uint64_t prev_last = 0;
  if (w0 > 0) {
    prev_last = bits.word(w0 - 1) & 1U;
    for (std::uint64_t j = w0; j-- > 0 && carry < k;) {
      const std::uint64_t word = bits.word(j);
      if (word == 0) {
        carry += 64;
        continue;
      }
      carry += static_cast<std::uint64_t>(__builtin_ctzll(word));
      break;
    }
  }

  for (std::uint64_t j = w0;; ++j) {
    const std::uint64_t pos = j << 6;
    const std::uint64_t word = bits.word(j);
    const std::uint64_t lz = word == 0 ? 64 : static_cast<std::uint64_t>(__builtin_clzll(word));

    // a run carried in from earlier words reaches k zeros in this word
    if (carry < k && carry + lz >= k) {
      const std::uint64_t r = pos - carry;
      if (r >= r_min) return r - 1 <= limit ? std::optional<std::uint64_t>(r - 1) : std::nullopt;
    }

    // runs of k zeros lying inside the word and preceded by a 1
    std::uint64_t t = ~word;
    for (unsigned covered = 1; covered < k;) {
      const unsigned s = std::min(covered, k - covered);
      t &= t << s;
      covered += s;
    }
    t &= (word >> 1) | (prev_last << 63);
    if (r_min > pos) t = r_min - pos >= 64 ? 0 : t & (~std::uint64_t{0} >> (r_min - pos));
    if (t != 0) {
      const std::uint64_t r = pos + static_cast<std::uint64_t>(__builtin_clzll(t));
      return r - 1 <= limit ? std::optional<std::uint64_t>(r - 1) : std::nullopt;
    }

    carry = word == 0 ? carry + 64 : static_cast<std::uint64_t>(__builtin_ctzll(word));
    prev_last = word & 1U;
    const std::uint64_t next_pos = pos + 64;
    const std::uint64_t earliest = carry < k ? next_pos - std::min(carry, next_pos) : next_pos;
    if (earliest >= limit + 2) return std::nullopt;
  }
}

// ---------------------------------------------------------------- towers

Tower::Tower(std::uint64_t height, unsigned marker_length, std::uint64_t window, double epsilon)
    : height_(height), marker_length_(marker_length), window_(window), epsilon_(epsilon) {
  require(height >= 1, ErrorKind::InvalidInput, "tower height must be >= 1");
  require(marker_length >= 2 && marker_length <= 48, ErrorKind::InvalidInput, "marker length must lie in [2, 48]");
  require(window >= marker_length, ErrorKind::InvalidInput, "scan window shorter than the marker");
}

std::string Tower::marker() const { return "1" + std::string(marker_length_ - 1, '0'); }

std::optional<std::uint64_t> Tower::level(BitStream& bits, std::uint64_t offset) const {
  const auto q = find_marker(bits, marker_length_, offset, offset + window_);
  if (!q) return std::nullopt;
  return level_from_distance(*q - offset);
}

std::vector<std::optional<std::uint64_t>> Tower::orbit_levels(BitStream& bits, std::uint64_t count) const {
  std::vector<std::optional<std::uint64_t>> out(count);
  if (count == 0) return out;
  const std::uint64_t limit = count - 1 + window_;
  auto q = find_marker(bits, marker_length_, 0, limit);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (q && *q <= i) q = find_marker(bits, marker_length_, *q, limit);
    if (!q) break;  // no later markers inside the window of any remaining point
    if (*q - i <= window_) out[i] = level_from_distance(*q - i);
  }
  return out;
}

Tower build_tower(std::uint64_t n, double epsilon, std::uint64_t bit_budget) {
  require(n >= 1, ErrorKind::InvalidInput, "tower height must be >= 1");
  require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::InvalidInput, "coverage slack must lie in (0,1)");
  unsigned length = 2;
  // smallest L with 2^L eps >= n (relative slack absorbs eps = n^{-1/3} round-off)
  while (std::ldexp(epsilon, static_cast<int>(length)) < static_cast<double>(n) * (1.0 - 1e-12)) {
    ++length;
    require(length <= 48, ErrorKind::ConstructionFailed,
            "no marker length up to 48 reaches coverage 1 - " + std::to_string(epsilon) + " at height " +
                std::to_string(n));
  }
  const double window = std::ceil(std::ldexp(1.0, static_cast<int>(length)) * std::log(2.0 / epsilon));
  require(window + static_cast<double>(n) + length < static_cast<double>(bit_budget), ErrorKind::ConstructionFailed,
          "scan window of " + std::to_string(static_cast<std::uint64_t>(window)) + " bits exceeds the bit budget");
  return Tower(n, length, static_cast<std::uint64_t>(window), epsilon);
}

CoverageEstimate estimate_coverage(const Tower& tower, std::uint64_t samples, std::uint64_t seed) {
  require(samples >= 1, ErrorKind::InvalidInput, "need at least one sample");
  std::vector<std::uint8_t> hit(samples, 0);
  const auto system = ErgodicSystem::doubling();
  parallel_for(samples, [&](std::size_t i) {
    auto rng = sample_stream(seed, i);
    auto point = sample_point(system, rng);
    hit[i] = tower.level(std::get<DoublingPoint>(point).bits).has_value() ? 1 : 0;
  });
  CoverageEstimate c;
  c.samples = samples;
  c.covered = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1));
  c.fraction = static_cast<double>(c.covered) / static_cast<double>(samples);
  c.wilson = wilson_interval(c.covered, samples);
  return c;
}

// ---------------------------------------------------------------- bad set

namespace {

mp::cpp_int integer_cbrt(const mp::cpp_int& x) {
  // floor(x^{1/3}) by bisection
  mp::cpp_int lo = 0;
  mp::cpp_int hi = 1;
  while (hi * hi * hi <= x) hi <<= 1;
  while (hi - lo > 1) {
    const mp::cpp_int mid = (lo + hi) >> 1;
    if (mid * mid * mid <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

Admissibility check_admissibility(const std::vector<std::uint64_t>& heights) {
  require(!heights.empty(), ErrorKind::InvalidInput, "no tower heights given");
  const mp::cpp_rational third(1, 3);
  mp::cpp_rational lower = 0;
  mp::cpp_rational upper = 0;
  bool exact = true;
  const mp::cpp_int scale = mp::cpp_int(1) << 64;
  for (const auto n : heights) {
    require(n >= 1, ErrorKind::InvalidInput, "tower heights must be positive");
    const mp::cpp_int big(n);
    const mp::cpp_int m = integer_cbrt(big);
    if (m * m * m == big) {
      lower += mp::cpp_rational(1, m);
      upper += mp::cpp_rational(1, m);
      continue;
    }
    exact = false;
    // n^{1/3} lies in [M, M + 1) / 2^64
    const mp::cpp_int M = integer_cbrt(big << 192);
    lower += mp::cpp_rational(scale, M + 1);
    upper += mp::cpp_rational(scale, M);
  }
  Admissibility a;
  a.exact = exact;
  a.sum = static_cast<double>(upper);
  if (exact) {
    a.sum_text = mp::numerator(upper).str() + "/" + mp::denominator(upper).str();
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", a.sum);
    a.sum_text = buf;
  }
  if (upper < third) {
    a.admissible = true;
  } else if (lower >= third) {
    a.admissible = false;
  } else {
    fail(ErrorKind::InvalidInput, "admissibility of the heights cannot be decided at 2^-64 resolution");
  }
  return a;
}

std::uint64_t ceil_two_thirds_power(std::uint64_t n) {
  const u128 square = static_cast<u128>(n) * n;
  std::uint64_t lo = 0;
  std::uint64_t hi = std::uint64_t{1} << 43;
  // smallest c with c^3 >= n^2
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (static_cast<u128>(mid) * mid * mid >= square) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return n == 0 ? 0 : hi;
}

bool BadSet::contains(BitStream& bits, std::uint64_t offset) const {
  for (std::size_t j = 0; j < towers.size(); ++j) {
    const auto level = towers[j].level(bits, offset);
    if (level && *level >= towers[j].height() - top_levels[j]) return true;
  }
  return false;
}

std::vector<std::uint8_t> BadSet::orbit_indicator(BitStream& bits, std::uint64_t count) const {
  std::vector<std::uint8_t> ind(count, 0);
  for (std::size_t j = 0; j < towers.size(); ++j) {
    const auto levels = towers[j].orbit_levels(bits, count);
    const std::uint64_t first_top = towers[j].height() - top_levels[j];
    for (std::uint64_t i = 0; i < count; ++i) {
      if (levels[i] && *levels[i] >= first_top) ind[i] = 1;
    }
  }
  return ind;
}

BadSet build_bad_set(const std::vector<std::uint64_t>& heights) {
  require(!heights.empty(), ErrorKind::InvalidInput, "a bad set needs at least one tower");
  for (std::size_t j = 0; j < heights.size(); ++j) {
    require(heights[j] >= 2, ErrorKind::InvalidInput, "tower heights must be >= 2");
    require(j == 0 || heights[j] > heights[j - 1], ErrorKind::InvalidInput,
            "tower heights must be strictly increasing");
  }
  BadSet b;
  b.admissibility = check_admissibility(heights);
  require(b.admissibility.admissible, ErrorKind::InvalidInput,
          "heights are not admissible: sum of n^(-1/3) = " + b.admissibility.sum_text + " is not < 1/3");
  for (const auto n : heights) {
    b.towers.push_back(build_tower(n, std::cbrt(1.0 / static_cast<double>(n))));
    b.top_levels.push_back(std::min(n, ceil_two_thirds_power(n)));
  }
  return b;
}

std::vector<std::uint64_t> parse_bad_set_spec(const std::string& spec) {
  const std::string prefix = "rokhlin:heights=";
  require(spec.rfind(prefix, 0) == 0, ErrorKind::InvalidInput,
          "bad-set spec must look like rokhlin:heights=512,4096,32768 (got '" + spec + "')");
  std::vector<std::uint64_t> heights;
  std::string rest = spec.substr(prefix.size());
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(!item.empty() && used == item.size() && item[0] != '-', ErrorKind::InvalidInput,
            "bad tower height '" + item + "'");
    heights.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return heights;
}

// ---------------------------------------------------------------- experiments

std::vector<double> harmonic_sums(std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  std::vector<double> kernel(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m) kernel[m] = 1.0 / static_cast<double>(m);
  const auto conv = linear_convolution(f, kernel);
  for (std::size_t m = 2; m <= n; ++m) out[m - 1] = std::max(0.0, conv[m]) / std::log(static_cast<double>(m));
  return out;
}

MeasureEstimate estimate_measure(const BadSet& b, std::uint64_t samples, std::uint64_t seed) {
  require(samples >= 1, ErrorKind::InvalidInput, "need at least one sample");
  std::vector<std::uint8_t> hit(samples, 0);
  const auto system = ErgodicSystem::doubling();
  parallel_for(samples, [&](std::size_t i) {
    auto rng = sample_stream(seed, i);
    auto point = sample_point(system, rng);
    hit[i] = b.contains(std::get<DoublingPoint>(point).bits) ? 1 : 0;
  });
  MeasureEstimate m;
  m.samples = samples;
  m.hits = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1));
  m.estimate = static_cast<double>(m.hits) / static_cast<double>(samples);
  m.wilson = wilson_interval(m.hits, samples);
  return m;
}

HarmonicReport harmonic_sum_experiment(const BadSet& b, std::uint64_t samples, std::uint64_t horizon,
                                       std::uint64_t seed, double threshold) {
  require(samples >= 1, ErrorKind::InvalidInput, "need at least one sample");
  require(!b.towers.empty(), ErrorKind::InvalidInput, "bad set has no towers");
  require(horizon >= b.towers.back().height(), ErrorKind::InvalidInput,
          "horizon must reach the tallest tower (" + std::to_string(b.towers.back().height()) + ")");
  HarmonicReport report;
  report.horizon = horizon;
  report.threshold = threshold;
  report.min_n = std::max<std::uint64_t>(2, b.top_levels.front());
  report.per_sample.resize(samples);

  const Cocycle cocycle{{WeightSequence::harmonic_up(), WeightSequence::harmonic_down()}};
  const auto space = SpaceKind::lp(2.0);
  const auto policy = ClassifyPolicy::defaults_for(space);
  const auto grid = geometric_grid(64, 2.0, horizon);
  const auto system = ErgodicSystem::doubling();

  parallel_for(samples, [&](std::size_t i) {
    auto rng = sample_stream(seed, i);
    auto point = sample_point(system, rng);
    auto& bits = std::get<DoublingPoint>(point).bits;
    const auto ind = b.orbit_indicator(bits, horizon);

    std::vector<double> f(ind.begin(), ind.end());
    const auto h = harmonic_sums(f);
    auto& r = report.per_sample[i];
    for (std::uint64_t n = report.min_n; n <= horizon; ++n) {
      if (h[n - 1] > r.h_max) {
        r.h_max = h[n - 1];
        r.h_argmax = n;
      }
    }
    for (std::size_t j = 0; j < b.towers.size(); ++j) {
      double best = 0.0;
      for (std::uint64_t n = std::max<std::uint64_t>(2, b.top_levels[j]); n <= b.towers[j].height(); ++n) {
        best = std::max(best, h[n - 1]);
      }
      r.tower_h_max.push_back(best);
    }
    r.b_frequency = static_cast<double>(std::count(ind.begin(), ind.end(), 1)) / static_cast<double>(horizon);

    SymbolStream s;
    s.k = 2;
    s.source = "doubling, A1 = complement of B";
    s.symbols.resize(horizon);
    for (std::uint64_t l = 0; l < horizon; ++l) s.symbols[l] = ind[l] ? 2 : 1;
    const auto v = log_product_series_fast(cocycle, s, horizon);
    const auto verdict = classify_series(diagnostic_series(space, v), policy);
    r.v_running_max = verdict.running_max;
    r.verdict = to_string(verdict.label);
    for (const auto n : grid) {
      r.v_checkpoints.push_back(n);
      r.v_values.push_back(v.values[n - 1]);
    }
  });

  std::uint64_t hits = 0;
  std::uint64_t weak = 0;
  for (const auto& r : report.per_sample) {
    hits += r.h_max >= threshold ? 1 : 0;
    weak += (r.verdict == "WeakMixingEvidence" || r.verdict == "MixingEvidence") ? 1 : 0;
  }
  report.hit_fraction = static_cast<double>(hits) / static_cast<double>(samples);
  report.weak_mixing_fraction = static_cast<double>(weak) / static_cast<double>(samples);
  return report;
}

}  // namespace randshift
