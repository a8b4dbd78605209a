#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "randshift/ergodic.hpp"
#include "randshift/stats.hpp"

namespace randshift {

/// First position q >= from + 1 (q <= limit) where the marker 1 0^{L-1}
/// starts in the bit stream, i.e. b_q = 1 and b_{q+1..q+L-1} = 0.
/// Word-at-a-time scan; 2 <= L <= 48.
std::optional<std::uint64_t> find_marker(BitStream& bits, unsigned marker_length, std::uint64_t from,
                                         std::uint64_t limit);

/// Rokhlin tower of height n over the binary shift. For a point y let d(y)
/// be the position of its first marker at a position >= 1; then
/// level(y) = n - 1 - ((d - 1) mod n). Shifting the point lowers d by one,
/// so below the top level tau raises the level by exactly one. Points with
/// no marker inside the scan window are outside the tower.
class Tower {
 public:
  Tower() = default;
  Tower(std::uint64_t height, unsigned marker_length, std::uint64_t window, double epsilon);

  std::uint64_t height() const { return height_; }
  unsigned marker_length() const { return marker_length_; }
  std::uint64_t window() const { return window_; }
  double epsilon() const { return epsilon_; }
  /// The marker word as a bit string, e.g. "1000".
  std::string marker() const;

  /// Level of tau^offset(x), where `bits` is the expansion of x.
  std::optional<std::uint64_t> level(BitStream& bits, std::uint64_t offset = 0) const;
  std::uint64_t level_from_distance(std::uint64_t d) const { return height_ - 1 - ((d - 1) % height_); }

  /// Levels of tau^i(x) for i < count, from a single pass over the markers.
  /// Missing entries (no marker within the window) are std::nullopt.
  std::vector<std::optional<std::uint64_t>> orbit_levels(BitStream& bits, std::uint64_t count) const;

 private:
  std::uint64_t height_ = 1;
  unsigned marker_length_ = 2;
  std::uint64_t window_ = 0;
  double epsilon_ = 0.5;
};

/// Marker length L = max(2, ceil(log2(n / eps))), so the mean marker gap
/// 2^L is at least n / eps and (d - 1) mod n is close to uniform; the scan
/// window 2^L ln(2 / eps) leaves at most about eps / 2 of the space
/// uncovered. ConstructionFailed if the bit budget cannot hold the window.
Tower build_tower(std::uint64_t n, double epsilon, std::uint64_t bit_budget = BitStream::kDefaultMaxBits);

struct CoverageEstimate {
  std::uint64_t covered = 0;
  std::uint64_t samples = 0;
  double fraction = 0.0;
  Interval95 wilson;
};

CoverageEstimate estimate_coverage(const Tower& tower, std::uint64_t samples, std::uint64_t seed);

/// sum_j n_j^{-1/3} compared with 1/3. `exact` is set when every height is
/// a perfect cube, in which case `sum_text` is the reduced fraction.
/// Otherwise each term is bracketed to within 2^-64 and the verdict holds
/// for both ends of the bracket.
struct Admissibility {
  bool admissible = false;
  bool exact = false;
  std::string sum_text;
  double sum = 0.0;
};

Admissibility check_admissibility(const std::vector<std::uint64_t>& heights);

/// B = union over j of the top ceil(n_j^{2/3}) levels of tower j, with tower
/// j built at eps_j = n_j^{-1/3}.
struct BadSet {
  std::vector<Tower> towers;
  std::vector<std::uint64_t> top_levels;  // ceil(n_j^{2/3})
  Admissibility admissibility;

  bool contains(BitStream& bits, std::uint64_t offset = 0) const;
  /// 1_B(tau^i x) for i < count.
  std::vector<std::uint8_t> orbit_indicator(BitStream& bits, std::uint64_t count) const;
};

/// InvalidInput unless heights are strictly increasing, >= 2 and admissible.
BadSet build_bad_set(const std::vector<std::uint64_t>& heights);

/// "rokhlin:heights=512,4096,32768".
std::vector<std::uint64_t> parse_bad_set_spec(const std::string& spec);

/// ceil(n^{2/3}) in integers.
std::uint64_t ceil_two_thirds_power(std::uint64_t n);

/// H_n = (1/log n) sum_{i<n} f_i / (n - i) for n = 1..N (H_1 is reported as
/// 0 since log 1 = 0).
std::vector<double> harmonic_sums(std::span<const double> f);

struct MeasureEstimate {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  double estimate = 0.0;
  Interval95 wilson;
};

MeasureEstimate estimate_measure(const BadSet& b, std::uint64_t samples, std::uint64_t seed);

struct HarmonicSampleResult {
  double h_max = 0.0;
  std::uint64_t h_argmax = 0;
  std::vector<double> tower_h_max;  // max of H_n over n in [ceil(n_j^{2/3}), n_j]
  double b_frequency = 0.0;         // fraction of the orbit inside B
  double v_running_max = 0.0;       // cocycle with A_1 = complement of B
  std::vector<std::uint64_t> v_checkpoints;
  std::vector<double> v_values;
  std::string verdict;
};

struct HarmonicReport {
  std::uint64_t horizon = 0;
  std::uint64_t min_n = 0;
  double threshold = 0.6;
  std::vector<HarmonicSampleResult> per_sample;
  double hit_fraction = 0.0;           // samples with h_max >= threshold
  double weak_mixing_fraction = 0.0;   // WeakMixing or Mixing evidence for V
};

/// Per sample: H_n 1_B for n in [min_n, horizon] where min_n is the
/// smallest scale ceil(n_1^{2/3}) used by the construction (small n make H_n
/// meaningless: H_2 can exceed 2), plus the full-grid V_n of the cocycle
/// w^(1) = 1 + 1/(l+1) on the complement of B and w^(2) = 1 - 1/(l+1) on B.
HarmonicReport harmonic_sum_experiment(const BadSet& b, std::uint64_t samples, std::uint64_t horizon,
                                       std::uint64_t seed, double threshold = 0.6);

}  // namespace randshift
