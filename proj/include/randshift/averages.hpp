#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "randshift/ergodic.hpp"

namespace randshift {

/// Nörlund weights p_1, p_2, ... (p_n >= 0) with partial sums P_n.
class NorlundWeights {
 public:
  enum class Kind { Cesaro, Harmonic, Log, Custom };

  static NorlundWeights cesaro() { return NorlundWeights(Kind::Cesaro); }
  static NorlundWeights harmonic() { return NorlundWeights(Kind::Harmonic); }
  /// p_n = log n, so p_1 = 0 and M_1 is undefined.
  static NorlundWeights log() { return NorlundWeights(Kind::Log); }
  /// Tabulated p_1..p_m; indices past the table are out of range.
  static NorlundWeights custom(std::vector<double> p);

  /// "cesaro" | "harmonic" | "log" | "custom:<p1,p2,...>".
  static NorlundWeights parse(std::string_view text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  double weight(std::uint64_t n) const;
  /// p_1..p_n in a vector indexed from 0.
  std::vector<double> first(std::uint64_t n) const;
  /// P_n = sum_{j<=n} p_j (compensated; exact closed form for Cesaro).
  long double prefix(std::uint64_t n) const;

 private:
  explicit NorlundWeights(Kind kind) : kind_(kind) {}
  Kind kind_;
  std::vector<double> custom_;
};

/// The three sufficient conditions for L^2 convergence of Nörlund means:
/// sum_j |p_{j+1} - p_j| / P_n -> 0, p_{n+1} / P_n -> 0 and P_n -> inf.
struct RegularityReport {
  bool holds = true;
  bool analytic = true;  // decided per kind rather than numerically
  double variation_ratio = 0.0;
  double tail_ratio = 0.0;
  double total = 0.0;
  std::string warning;
};

RegularityReport check_regularity(const NorlundWeights& p, std::uint64_t terms = 10000);

/// M_n per checkpoint; `defined[i]` is false where P_n = 0 (value is NaN).
struct AverageSeries {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> values;
  std::vector<bool> defined;
};

double birkhoff_mean(std::span<const double> values, std::uint64_t n);

/// S_n = sum_{l<n} (f_l - mean) at each checkpoint.
AverageSeries centered_birkhoff_sums(std::span<const double> values, double mean,
                                     const std::vector<std::uint64_t>& checkpoints);

/// M_n = (1/P_n) sum_{l<n} p_{n-l} f_l for n = 1..N via one FFT convolution
/// of the centred values; results are clamped to [min f, max f].
AverageSeries norlund_mean_series(const NorlundWeights& p, std::span<const double> values, std::uint64_t n);

/// Direct O(sum n) evaluation at checkpoints, summing l = 0..n-1 in order.
AverageSeries norlund_mean_series_naive(const NorlundWeights& p, std::span<const double> values,
                                        const std::vector<std::uint64_t>& checkpoints);

/// f_l = [s_l = cell].
std::vector<double> indicator_values(const SymbolStream& s, unsigned cell = 1);

struct L2Report {
  std::vector<std::uint64_t> grid;
  double target = 0.0;                          // mu(A_1)
  std::vector<double> l2_error;                 // per grid point
  std::vector<std::vector<double>> per_sample;  // M_n per sample per grid point
};

/// e(n) = sqrt(mean_samples (M_n - mu(A_1))^2) for f = indicator of A_1.
L2Report norlund_l2_experiment(const ErgodicSystem& system, const Partition& partition, const NorlundWeights& p,
                               const std::vector<std::uint64_t>& grid, std::uint64_t samples,
                               std::uint64_t seed);

/// f(x) = c_0 + sum_k (a_k cos 2 pi k x + b_k sin 2 pi k x).
struct TrigPolynomial {
  struct Term {
    int frequency = 1;
    double cos_coef = 0.0;
    double sin_coef = 0.0;
  };
  double constant = 0.0;
  std::vector<Term> terms;

  /// Sum of signed terms "<c>", "<c>*cos<k>", "<c>*sin<k>", "cos<k>",
  /// "sin<k>" with k >= 1, e.g. "1+0.5*cos2-sin3".
  static TrigPolynomial parse(std::string_view text);
  double operator()(double x) const;
};

struct OxtobyReport {
  std::uint64_t n = 0;
  std::uint64_t grid_size = 0;
  double sup_deviation = 0.0;
  double argmax_start = 0.0;
  std::vector<double> deviations;  // M_n(x_j) - c_0 per start
};

/// max over starts x_j = j / grid_size of |M_n(x_j) - c_0| under the
/// rotation. Uses the Fourier form: for each frequency k the weighted sum
/// (1/P_n) sum_l p_{n-l} e^{2 pi i k l alpha} is computed once, with the
/// phase k l alpha reduced exactly in 128-bit fixed point.
OxtobyReport oxtoby_sup_experiment(const ErgodicSystem& system, const TrigPolynomial& f, const NorlundWeights& p,
                                   std::uint64_t n, std::uint64_t grid_size);

struct CltReport {
  std::vector<std::uint64_t> grid;
  double mu = 0.0;
  double variance = 0.0;
  bool variance_known = true;
  bool degenerate = false;
  std::vector<double> ks;                         // per grid point, when variance is known
  std::vector<std::vector<double>> standardized;  // [grid][sample]: S_n / sqrt(n Var) or raw S_n
  std::vector<std::array<double, 3>> raw_quantiles;  // 5%, 50%, 95% of S_n per grid point
};

/// Standardized centred Birkhoff sums of f = indicator of A_1 and their KS
/// distance to N(0,1). Var = mu(A_1)(1 - mu(A_1)) whenever mu(A_1) is known
/// exactly; for explicit symbol files only raw quantiles are reported.
CltReport clt_experiment(const ErgodicSystem& system, const Partition& partition,
                         const std::vector<std::uint64_t>& grid, std::uint64_t samples, std::uint64_t seed);

}  // namespace randshift
