#include "randshift/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "randshift/convolution.hpp"
#include "randshift/error.hpp"

namespace randshift {

namespace {

// g[l][m] = log|w^(l+1)_m| for m = 1..n (index 0 unused).
std::vector<std::vector<double>> log_weight_tables(const Cocycle& c, std::uint64_t n) {
  std::vector<std::vector<double>> g(c.arity(), std::vector<double>(n + 1, 0.0));
  for (unsigned l = 0; l < c.arity(); ++l) {
    for (std::uint64_t m = 1; m <= n; ++m) g[l][m] = c.weights[l].log_weight(m);
  }
  return g;
}

void check_pairing(const Cocycle& c, const SymbolStream& s) {
  require(c.arity() >= 1, ErrorKind::InvalidInput, "cocycle needs at least one weight family");
  require(c.arity() == s.k, ErrorKind::InvalidInput,
          "cocycle has " + std::to_string(c.arity()) + " weight families but the partition has " +
              std::to_string(s.k) + " cells");
}

}  // namespace

void SparseVector::validate() const {
  std::set<std::uint64_t> seen;
  for (const auto& e : entries) {
    require(seen.insert(e.index).second, ErrorKind::InvalidInput, "sparse vector has a repeated index");
    require(std::isfinite(e.log_magnitude), ErrorKind::InvalidInput, "sparse vector has a non-finite coefficient");
  }
}

LogProductSeries log_product_series_naive(const Cocycle& c, const SymbolStream& s,
                                          const std::vector<std::uint64_t>& checkpoints) {
  check_pairing(c, s);
  validate_checkpoints(checkpoints);
  LogProductSeries out;
  if (checkpoints.empty()) return out;
  const std::uint64_t n_max = checkpoints.back();
  require(n_max <= s.size(), ErrorKind::InvalidInput,
          "checkpoint " + std::to_string(n_max) + " exceeds the symbol stream (" + std::to_string(s.size()) + ")");

  const auto g = log_weight_tables(c, n_max);
  out.checkpoints = checkpoints;
  out.values.reserve(checkpoints.size());
  for (const auto n : checkpoints) {
    double sum = 0.0;
    double comp = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double y = g[s.symbols[i] - 1][n - i] - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    out.values.push_back(sum);
  }
  return out;
}

LogProductSeries log_product_series_fast(const Cocycle& c, const SymbolStream& s, std::uint64_t n) {
  require(c.arity() == 2, ErrorKind::UnsupportedArity,
          "the convolution evaluator handles k = 2 only; use the naive evaluator at checkpoints");
  check_pairing(c, s);
  require(n >= 1 && n <= s.size(), ErrorKind::InvalidInput, "horizon exceeds the symbol stream");

  const auto g = log_weight_tables(c, n);
  std::vector<double> dg(n + 1, 0.0);
  long double mean = 0.0L;
  for (std::uint64_t m = 1; m <= n; ++m) {
    dg[m] = g[0][m] - g[1][m];
    mean += dg[m];
  }
  mean /= static_cast<long double>(n);
  const auto centre = static_cast<double>(mean);
  for (std::uint64_t m = 1; m <= n; ++m) dg[m] -= centre;

  std::vector<double> x(n);
  for (std::uint64_t i = 0; i < n; ++i) x[i] = s.symbols[i] == 1 ? 1.0 : 0.0;

  const auto conv = linear_convolution(x, dg);

  LogProductSeries out;
  out.checkpoints = full_grid(n);
  out.values.resize(n);
  std::uint64_t ones = 0;
  for (std::uint64_t m = 1; m <= n; ++m) {
    ones += s.symbols[m - 1] == 1 ? 1 : 0;
    const long double exact_part =
        c.weights[1].prefix_log_sum(m) + static_cast<long double>(centre) * static_cast<long double>(ones);
    out.values[m - 1] = static_cast<double>(exact_part + static_cast<long double>(conv[m]));
  }
  return out;
}

LogProductSeries log_product_commuting(double c_ratio, const WeightSequence& v, const SymbolStream& s,
                                       const std::vector<std::uint64_t>& checkpoints) {
  require(c_ratio > 0.0 && std::isfinite(c_ratio), ErrorKind::InvalidInput, "commuting ratio must be positive");
  require(s.k == 2, ErrorKind::InvalidInput, "the commuting closed form needs a two-cell partition");
  validate_checkpoints(checkpoints);
  LogProductSeries out;
  out.checkpoints = checkpoints;
  if (checkpoints.empty()) return out;
  require(checkpoints.back() <= s.size(), ErrorKind::InvalidInput, "checkpoint exceeds the symbol stream");
  const long double log_c = std::log(static_cast<long double>(c_ratio));
  std::uint64_t ones = 0;
  std::uint64_t i = 0;
  for (const auto n : checkpoints) {
    for (; i < n; ++i) ones += s.symbols[i] == 1 ? 1 : 0;
    out.values.push_back(static_cast<double>(static_cast<long double>(ones) * log_c + v.prefix_log_sum(n)));
  }
  return out;
}

std::optional<double> commuting_ratio(const WeightSequence& w, const WeightSequence& v, std::uint64_t upto,
                                      double tolerance) {
  require(upto >= 1, ErrorKind::InvalidInput, "need at least one index");
  const double log_ratio = w.log_weight(1) - v.log_weight(1);
  for (std::uint64_t j = 2; j <= upto; ++j) {
    // w_{j+1} v_j = w_j v_{j+1}  <=>  log w_j - log v_j constant
    if (std::fabs((w.log_weight(j) - v.log_weight(j)) - log_ratio) > tolerance) return std::nullopt;
  }
  return std::exp(log_ratio);
}

SparseVector apply_product(const Cocycle& c, const SymbolStream& s, const SparseVector& x, std::uint64_t n) {
  check_pairing(c, s);
  require(n <= s.size(), ErrorKind::InvalidInput, "product length exceeds the symbol stream");
  x.validate();
  SparseVector out;
  for (const auto& e : x.entries) {
    if (e.index < n) continue;  // T_n e_j = 0 for j < n
    double sum = e.log_magnitude;
    double comp = 0.0;
    for (std::uint64_t m = 1; m <= n; ++m) {
      const double y = c.weights[s.symbols[m - 1] - 1].log_weight(e.index - m + 1) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    out.entries.push_back({e.index - n, sum, e.negative});
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  return out;
}

bool non_universality_quickcheck(std::span<const double> sup_log, std::span<const double> measures) {
  require(sup_log.size() == measures.size() && !sup_log.empty(), ErrorKind::InvalidInput,
          "need one measure per weight family");
  double total = 0.0;
  for (std::size_t l = 0; l < sup_log.size(); ++l) {
    require(std::isfinite(sup_log[l]), ErrorKind::NotApplicable,
            "weight family " + std::to_string(l + 1) + " is unbounded; the sup-norm test needs continuity on l^p");
    total += measures[l] * sup_log[l];
  }
  return total < 0.0;
}

bool non_universality_quickcheck(const Cocycle& c, std::span<const double> measures) {
  std::vector<double> sup_log;
  for (const auto& w : c.weights) sup_log.push_back(w.sup_log());
  return non_universality_quickcheck(sup_log, measures);
}

}  // namespace randshift
