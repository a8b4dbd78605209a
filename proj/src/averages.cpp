#include "randshift/averages.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "randshift/convolution.hpp"
#include "randshift/error.hpp"
#include "randshift/parallel.hpp"
#include "randshift/series.hpp"
#include "randshift/stats.hpp"

namespace randshift {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_number(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && used > 0 && std::isfinite(value), ErrorKind::InvalidInput,
          std::string(what) + ": not a number: '" + s + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

// ---------------------------------------------------------------- weights

NorlundWeights NorlundWeights::custom(std::vector<double> p) {
  require(!p.empty(), ErrorKind::InvalidInput, "custom Nörlund weights are empty");
  for (double v : p) {
    require(std::isfinite(v) && v >= 0.0, ErrorKind::InvalidInput, "Nörlund weights must be finite and >= 0");
  }
  NorlundWeights w(Kind::Custom);
  w.custom_ = std::move(p);
  return w;
}

NorlundWeights NorlundWeights::parse(std::string_view text) {
  text = trim(text);
  if (text == "cesaro") return cesaro();
  if (text == "harmonic") return harmonic();
  if (text == "log") return log();
  if (text.substr(0, 7) == "custom:") {
    std::vector<double> p;
    std::string_view rest = text.substr(7);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      p.push_back(parse_number(trim(rest.substr(0, comma)), "Nörlund weight"));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return custom(std::move(p));
  }
  fail(ErrorKind::InvalidInput,
       "unknown Nörlund weights '" + std::string(text) + "' (expected cesaro, harmonic, log or custom:<p1,...>)");
}

std::string NorlundWeights::to_string() const {
  switch (kind_) {
    case Kind::Cesaro:
      return "cesaro";
    case Kind::Harmonic:
      return "harmonic";
    case Kind::Log:
      return "log";
    case Kind::Custom:
      break;
  }
  std::string out = "custom:";
  char buf[32];
  for (std::size_t i = 0; i < custom_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", custom_[i]);
    out += (i ? "," : "") + std::string(buf);
  }
  return out;
}

double NorlundWeights::weight(std::uint64_t n) const {
  require(n >= 1, ErrorKind::InvalidInput, "Nörlund weights start at p_1");
  switch (kind_) {
    case Kind::Cesaro:
      return 1.0;
    case Kind::Harmonic:
      return 1.0 / static_cast<double>(n);
    case Kind::Log:
      return std::log(static_cast<double>(n));
    case Kind::Custom:
      break;
  }
  if (n > custom_.size()) {
    fail(ErrorKind::InvalidInput, "custom Nörlund table has " + std::to_string(custom_.size()) + " entries; p_" +
                                      std::to_string(n) + " requested");
  }
  return custom_[n - 1];
}

std::vector<double> NorlundWeights::first(std::uint64_t n) const {
  std::vector<double> p(n);
  for (std::uint64_t j = 1; j <= n; ++j) p[j - 1] = weight(j);
  return p;
}

long double NorlundWeights::prefix(std::uint64_t n) const {
  if (kind_ == Kind::Cesaro) return static_cast<long double>(n);
  if (kind_ == Kind::Log) return n == 0 ? 0.0L : std::lgamma(static_cast<long double>(n) + 1.0L);
  long double acc = 0.0L;
  for (std::uint64_t j = 1; j <= n; ++j) acc += weight(j);
  return acc;
}

RegularityReport check_regularity(const NorlundWeights& p, std::uint64_t terms) {
  RegularityReport r;
  std::uint64_t n = terms;
  if (p.kind() == NorlundWeights::Kind::Custom) {
    r.analytic = false;
    // need p_{n+1}; shrink to what the table provides
    std::uint64_t available = 1;
    while (true) {
      try {
        p.weight(available + 1);
        ++available;
      } catch (const Error&) {
        break;
      }
      if (available > terms) break;
    }
    n = std::min(terms, available - 1);
  }
  require(n >= 1, ErrorKind::InvalidInput, "regularity check needs at least two weights");
  long double variation = 0.0L;
  for (std::uint64_t j = 1; j < n; ++j) variation += std::fabs(p.weight(j + 1) - p.weight(j));
  const long double total = p.prefix(n);
  r.total = static_cast<double>(total);
  if (total > 0) {
    r.variation_ratio = static_cast<double>(variation / total);
    r.tail_ratio = static_cast<double>(p.weight(n + 1) / total);
  } else {
    r.variation_ratio = std::numeric_limits<double>::infinity();
    r.tail_ratio = std::numeric_limits<double>::infinity();
  }
  if (r.analytic) {
    // Cesaro, 1/n and log n all satisfy the three conditions.
    r.holds = true;
    return r;
  }
  const double early_total = static_cast<double>(p.prefix(std::max<std::uint64_t>(1, n / 10)));
  r.holds = r.variation_ratio < 0.1 && r.tail_ratio < 0.1 && r.total > 2.0 * early_total;
  if (!r.holds) {
    r.warning = "custom Nörlund weights do not visibly satisfy the L^2 regularity conditions over the first " +
                std::to_string(n) + " terms";
  }
  return r;
}

// ---------------------------------------------------------------- means

double birkhoff_mean(std::span<const double> values, std::uint64_t n) {
  require(n >= 1, ErrorKind::InvalidInput, "Birkhoff mean needs n >= 1");
  require(n <= values.size(), ErrorKind::InvalidInput, "Birkhoff mean past the end of the values");
  double sum = 0.0;
  double comp = 0.0;
  for (std::uint64_t l = 0; l < n; ++l) {
    const double y = values[l] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(n);
}

AverageSeries centered_birkhoff_sums(std::span<const double> values, double mean,
                                     const std::vector<std::uint64_t>& checkpoints) {
  validate_checkpoints(checkpoints);
  AverageSeries out;
  out.checkpoints = checkpoints;
  if (checkpoints.empty()) return out;
  require(checkpoints.back() <= values.size(), ErrorKind::InvalidInput, "checkpoint past the end of the values");
  long double sum = 0.0L;
  std::uint64_t l = 0;
  for (const auto n : checkpoints) {
    for (; l < n; ++l) sum += static_cast<long double>(values[l]) - mean;
    out.values.push_back(static_cast<double>(sum));
    out.defined.push_back(true);
  }
  return out;
}

AverageSeries norlund_mean_series(const NorlundWeights& p, std::span<const double> values, std::uint64_t n) {
  require(n >= 1 && n <= values.size(), ErrorKind::InvalidInput, "Nörlund horizon outside the values");
  long double mean_acc = 0.0L;
  for (std::uint64_t l = 0; l < n; ++l) mean_acc += values[l];
  const auto mean = static_cast<double>(mean_acc / static_cast<long double>(n));

  std::vector<double> centred(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n));
  for (auto& v : centred) v -= mean;
  std::vector<double> weights(n + 1, 0.0);
  const auto p_first = p.first(n);
  std::copy(p_first.begin(), p_first.end(), weights.begin() + 1);
  const auto conv = linear_convolution(centred, weights);

  AverageSeries out;
  out.checkpoints = full_grid(n);
  out.values.resize(n);
  out.defined.resize(n);
  long double total = 0.0L;
  double lo = values[0];
  double hi = values[0];
  for (std::uint64_t m = 1; m <= n; ++m) {
    total += p_first[m - 1];
    lo = std::min(lo, values[m - 1]);
    hi = std::max(hi, values[m - 1]);
    if (total <= 0.0L) {
      out.values[m - 1] = kNaN;
      out.defined[m - 1] = false;
      continue;
    }
    const double mean_m = mean + static_cast<double>(static_cast<long double>(conv[m]) / total);
    out.values[m - 1] = std::clamp(mean_m, lo, hi);
    out.defined[m - 1] = true;
  }
  return out;
}

AverageSeries norlund_mean_series_naive(const NorlundWeights& p, std::span<const double> values,
                                        const std::vector<std::uint64_t>& checkpoints) {
  validate_checkpoints(checkpoints);
  AverageSeries out;
  out.checkpoints = checkpoints;
  if (checkpoints.empty()) return out;
  require(checkpoints.back() <= values.size(), ErrorKind::InvalidInput, "checkpoint past the end of the values");
  const auto weights = p.first(checkpoints.back());
  for (const auto n : checkpoints) {
    double sum = 0.0;
    double comp = 0.0;
    double total = 0.0;
    double total_comp = 0.0;
    for (std::uint64_t l = 0; l < n; ++l) {
      const double y = weights[n - l - 1] * values[l] - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      const double yt = weights[l] - total_comp;
      const double tt = total + yt;
      total_comp = (tt - total) - yt;
      total = tt;
    }
    if (total <= 0.0) {
      out.values.push_back(kNaN);
      out.defined.push_back(false);
    } else {
      out.values.push_back(sum / total);
      out.defined.push_back(true);
    }
  }
  return out;
}

std::vector<double> indicator_values(const SymbolStream& s, unsigned cell) {
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) f[i] = s.symbols[i] == cell ? 1.0 : 0.0;
  return f;
}

// ---------------------------------------------------------------- experiments

L2Report norlund_l2_experiment(const ErgodicSystem& system, const Partition& partition, const NorlundWeights& p,
                               const std::vector<std::uint64_t>& grid, std::uint64_t samples,
                               std::uint64_t seed) {
  require(samples >= 2, ErrorKind::InvalidInput, "the L^2 experiment needs at least two samples");
  require(!grid.empty(), ErrorKind::InvalidInput, "empty n-grid");
  validate_checkpoints(grid);
  L2Report report;
  report.grid = grid;
  report.target = cell_measures(system, partition).at(0);
  report.per_sample.assign(samples, std::vector<double>(grid.size(), 0.0));
  const std::uint64_t horizon = grid.back();

  parallel_for(samples, [&](std::size_t i) {
    const auto s = sample_symbols(system, partition, seed, i, horizon);
    const auto series = norlund_mean_series(p, indicator_values(s), horizon);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      require(series.defined[grid[g] - 1], ErrorKind::InvalidInput,
              "Nörlund mean undefined at n = " + std::to_string(grid[g]));
      report.per_sample[i][g] = series.values[grid[g] - 1];
    }
  });

  for (std::size_t g = 0; g < grid.size(); ++g) {
    long double sq = 0.0L;
    for (const auto& row : report.per_sample) {
      const long double d = row[g] - report.target;
      sq += d * d;
    }
    report.l2_error.push_back(static_cast<double>(std::sqrt(sq / static_cast<long double>(samples))));
  }
  return report;
}

TrigPolynomial TrigPolynomial::parse(std::string_view text) {
  TrigPolynomial f;
  std::string compact;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) compact += ch;
  }
  require(!compact.empty(), ErrorKind::InvalidInput, "empty trigonometric polynomial");
  std::size_t pos = 0;
  while (pos < compact.size()) {
    double sign = 1.0;
    if (compact[pos] == '+' || compact[pos] == '-') {
      sign = compact[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    }
    // a term ends at the next sign that does not belong to an exponent
    std::size_t end = pos;
    while (end < compact.size()) {
      const char ch = compact[end];
      if ((ch == '+' || ch == '-') && end > pos && compact[end - 1] != 'e' && compact[end - 1] != 'E') break;
      ++end;
    }
    const std::string term = compact.substr(pos, end - pos);
    require(!term.empty(), ErrorKind::InvalidInput, "empty term in '" + std::string(text) + "'");
    pos = end;

    const auto trig = term.find_first_of("cs");
    if (trig == std::string::npos) {
      f.constant += sign * parse_number(term, "constant term");
      continue;
    }
    double coef = 1.0;
    if (trig > 0) {
      require(term[trig - 1] == '*', ErrorKind::InvalidInput, "expected '<c>*cos<k>' in '" + term + "'");
      coef = parse_number(term.substr(0, trig - 1), "coefficient");
    }
    const std::string fn = term.substr(trig, 3);
    require(fn == "cos" || fn == "sin", ErrorKind::InvalidInput, "unknown function in '" + term + "'");
    const std::string freq_text = term.substr(trig + 3);
    const double freq = parse_number(freq_text.empty() ? "1" : freq_text, "frequency");
    require(freq >= 1 && freq == std::floor(freq) && freq < 1e9, ErrorKind::InvalidInput,
            "frequency must be a positive integer in '" + term + "'");
    Term t;
    t.frequency = static_cast<int>(freq);
    (fn == "cos" ? t.cos_coef : t.sin_coef) = sign * coef;
    f.terms.push_back(t);
  }
  return f;
}

double TrigPolynomial::operator()(double x) const {
  double v = constant;
  for (const auto& t : terms) {
    const double a = 2.0 * std::numbers::pi * t.frequency * x;
    v += t.cos_coef * std::cos(a) + t.sin_coef * std::sin(a);
  }
  return v;
}

OxtobyReport oxtoby_sup_experiment(const ErgodicSystem& system, const TrigPolynomial& f, const NorlundWeights& p,
                                   std::uint64_t n, std::uint64_t grid_size) {
  const auto* rot = std::get_if<RotationSystem>(&system.kind);
  require(rot != nullptr, ErrorKind::NotApplicable,
          "the uniform Nörlund experiment needs a uniquely ergodic rotation, got " + system.to_string());
  require(n >= 1 && grid_size >= 1, ErrorKind::InvalidInput, "need n >= 1 and at least one start");
  const long double total = p.prefix(n);
  require(total > 0.0L, ErrorKind::InvalidInput, "P_n = 0: Nörlund mean undefined");
  const auto weights = p.first(n);

  // S_k = (1/P_n) sum_l p_{n-l} e^{2 pi i k l alpha}
  std::vector<std::complex<long double>> s_k;
  for (const auto& t : f.terms) {
    const u128 step = static_cast<u128>(static_cast<unsigned>(t.frequency)) * rot->alpha;
    u128 phase = 0;
    std::complex<long double> acc = 0.0L;
    for (std::uint64_t l = 0; l < n; ++l) {
      const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(to_double(phase));
      acc += static_cast<long double>(weights[n - l - 1]) * std::complex<long double>(std::cos(angle), std::sin(angle));
      phase += step;
    }
    s_k.push_back(acc / total);
  }

  OxtobyReport r;
  r.n = n;
  r.grid_size = grid_size;
  for (std::uint64_t j = 0; j < grid_size; ++j) {
    const long double x = static_cast<long double>(j) / static_cast<long double>(grid_size);
    long double dev = 0.0L;
    for (std::size_t k = 0; k < f.terms.size(); ++k) {
      const auto& t = f.terms[k];
      const long double a = 2.0L * std::numbers::pi_v<long double> * t.frequency * x;
      const std::complex<long double> coef(t.cos_coef, -t.sin_coef);
      dev += (coef * std::complex<long double>(std::cos(a), std::sin(a)) * s_k[k]).real();
    }
    r.deviations.push_back(static_cast<double>(dev));
    const double abs_dev = static_cast<double>(std::fabs(dev));
    if (abs_dev > r.sup_deviation) {
      r.sup_deviation = abs_dev;
      r.argmax_start = static_cast<double>(x);
    }
  }
  return r;
}

CltReport clt_experiment(const ErgodicSystem& system, const Partition& partition,
                         const std::vector<std::uint64_t>& grid, std::uint64_t samples, std::uint64_t seed) {
  require(samples >= 100, ErrorKind::InvalidInput, "the CLT experiment needs at least 100 samples");
  require(!grid.empty(), ErrorKind::InvalidInput, "empty n-grid");
  validate_checkpoints(grid);
  CltReport r;
  r.grid = grid;
  r.variance_known = !std::holds_alternative<ExplicitSystem>(system.kind);
  r.mu = cell_measures(system, partition).at(0);
  r.variance = r.mu * (1.0 - r.mu);
  r.degenerate = r.variance <= 0.0;
  const std::uint64_t horizon = grid.back();

  std::vector<std::vector<double>> raw(grid.size(), std::vector<double>(samples, 0.0));
  parallel_for(samples, [&](std::size_t i) {
    const auto s = sample_symbols(system, partition, seed, i, horizon);
    const auto sums = centered_birkhoff_sums(indicator_values(s), r.mu, grid);
    for (std::size_t g = 0; g < grid.size(); ++g) raw[g][i] = sums.values[g];
  });

  r.standardized = raw;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    r.raw_quantiles.push_back({quantile(raw[g], 0.05), quantile(raw[g], 0.5), quantile(raw[g], 0.95)});
    if (!r.variance_known) continue;
    const double scale = std::sqrt(static_cast<double>(grid[g]) * r.variance);
    for (auto& v : r.standardized[g]) v = r.degenerate ? 0.0 : v / scale;
    r.ks.push_back(ks_distance_normal(r.standardized[g]));
  }
  return r;
}

}  // namespace randshift
