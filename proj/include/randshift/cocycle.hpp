#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "randshift/ergodic.hpp"
#include "randshift/series.hpp"
#include "randshift/weights.hpp"

namespace randshift {

/// T(omega) = B_{w^(l)} on cell A_l; weights[l-1] is w^(l).
struct Cocycle {
  std::vector<WeightSequence> weights;

  unsigned arity() const { return static_cast<unsigned>(weights.size()); }
};

/// Finitely supported vector x = sum sign_j * exp(log_mag_j) e_{index_j}.
/// Coefficients live in log space: products of the weights w_l = l overflow
/// binary64 well before the horizons used here.
struct SparseVector {
  struct Entry {
    std::uint64_t index = 0;
    double log_magnitude = 0.0;
    bool negative = false;
  };
  std::vector<Entry> entries;

  static SparseVector basis(std::uint64_t j) { return SparseVector{{Entry{j, 0.0, false}}}; }
  void validate() const;
};

/// V_n = sum_{i<n} log|w^(s_i)_{n-i}| evaluated independently at each
/// checkpoint (O(sum n_j) work, compensated summation).
LogProductSeries log_product_series_naive(const Cocycle& c, const SymbolStream& s,
                                          const std::vector<std::uint64_t>& checkpoints);

/// Full-grid V_1..V_N for k = 2 via V_n = P_2(n) + (x * dg)(n), where P_2 is
/// the prefix log-sum of w^(2), dg = g_1 - g_2 and x_i = [s_i = 1]. The
/// convolution is FFT-based with dg centred on its mean.
LogProductSeries log_product_series_fast(const Cocycle& c, const SymbolStream& s, std::uint64_t n);

/// Commuting case w = c v: V_n = a_1(n) log c + sum_{l<=n} log|v_l|.
LogProductSeries log_product_commuting(double c_ratio, const WeightSequence& v, const SymbolStream& s,
                                       const std::vector<std::uint64_t>& checkpoints);

/// B_w and B_v commute iff w_j = c v_j for all j; checks the first `upto`
/// indices and returns |c| when the log-ratio is constant within `tolerance`.
std::optional<double> commuting_ratio(const WeightSequence& w, const WeightSequence& v, std::uint64_t upto = 4096,
                                      double tolerance = 1e-12);

/// T_n(omega) x: coordinates j < n are annihilated, coordinate j >= n moves
/// to j - n and its log-magnitude gains sum_{m=1}^n log|w^(s_{m-1})_{j-m+1}|.
SparseVector apply_product(const Cocycle& c, const SymbolStream& s, const SparseVector& x, std::uint64_t n);

/// Sufficient test for non-universality on l^p / c_0:
/// sum_l mu(A_l) sup_n log|w^(l)_n| < 0.
bool non_universality_quickcheck(std::span<const double> sup_log, std::span<const double> measures);
bool non_universality_quickcheck(const Cocycle& c, std::span<const double> measures);

}  // namespace randshift
