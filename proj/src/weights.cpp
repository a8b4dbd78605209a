#include "randshift/weights.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "randshift/error.hpp"
#include "randshift/spaces.hpp"

namespace randshift {

namespace {

double parse_positive(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && used > 0, ErrorKind::InvalidInput,
          std::string(what) + ": not a number: '" + s + "'");
  require(std::isfinite(value) && value != 0.0, ErrorKind::InvalidInput,
          std::string(what) + ": weight factor must be finite and nonzero");
  return std::fabs(value);
}

}  // namespace

WeightSequence WeightSequence::constant(double c) {
  require(std::isfinite(c) && c != 0.0, ErrorKind::InvalidInput, "constant weight must be nonzero");
  return WeightSequence(Kind::Constant, std::fabs(c));
}

WeightSequence WeightSequence::scaled(double c, const WeightSequence& base) {
  require(std::isfinite(c) && c != 0.0, ErrorKind::InvalidInput, "scale factor must be nonzero");
  WeightSequence w(Kind::Scaled, std::fabs(c));
  w.base_ = std::make_shared<const WeightSequence>(base);
  return w;
}

WeightSequence WeightSequence::harmonic_up() { return WeightSequence(Kind::HarmonicUp, 1.0); }
WeightSequence WeightSequence::harmonic_down() { return WeightSequence(Kind::HarmonicDown, 1.0); }
WeightSequence WeightSequence::poly() { return WeightSequence(Kind::Poly, 1.0); }
WeightSequence WeightSequence::inv_poly() { return WeightSequence(Kind::InvPoly, 1.0); }

WeightSequence WeightSequence::tabulated(std::vector<double> log_magnitudes, TailRule tail) {
  require(!log_magnitudes.empty(), ErrorKind::InvalidInput, "weight table is empty");
  auto table = std::make_shared<Table>();
  table->prefix.reserve(log_magnitudes.size() + 1);
  table->prefix.push_back(0.0L);
  long double acc = 0.0L;
  for (double v : log_magnitudes) {
    require(std::isfinite(v), ErrorKind::InvalidInput, "weight table entries must be finite log-magnitudes");
    acc += v;
    table->prefix.push_back(acc);
  }
  table->logs = std::move(log_magnitudes);
  table->tail = tail;
  WeightSequence w(Kind::Tabulated, 1.0);
  w.table_ = std::move(table);
  return w;
}

WeightSequence WeightSequence::load_table(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::IoError, "cannot open weight table '" + path + "'");
  TailRule tail = TailRule::RepeatLast;
  std::vector<double> logs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto pos = line.find("tail:");
      if (pos != std::string::npos) {
        std::string rule = line.substr(pos + 5);
        rule.erase(0, rule.find_first_not_of(" \t"));
        rule.erase(rule.find_last_not_of(" \t\r") + 1);
        if (rule == "last") {
          tail = TailRule::RepeatLast;
        } else if (rule == "periodic") {
          tail = TailRule::Periodic;
        } else {
          fail(ErrorKind::InvalidInput, path + ":" + std::to_string(line_no) + ": unknown tail rule '" + rule + "'");
        }
      }
      continue;
    }
    std::istringstream fields(line);
    double v = 0.0;
    require(static_cast<bool>(fields >> v), ErrorKind::InvalidInput,
            path + ":" + std::to_string(line_no) + ": expected a log-magnitude");
    logs.push_back(v);
  }
  auto w = tabulated(std::move(logs), tail);
  std::const_pointer_cast<Table>(w.table_)->origin = path;
  return w;
}

WeightSequence WeightSequence::parse(std::string_view spec) {
  if (spec == "harmonic-up") return harmonic_up();
  if (spec == "harmonic-down") return harmonic_down();
  if (spec == "poly") return poly();
  if (spec == "inv-poly") return inv_poly();
  if (spec.starts_with("const:")) return constant(parse_positive(spec.substr(6), "const"));
  if (spec.starts_with("scale:")) {
    const auto rest = spec.substr(6);
    const auto colon = rest.find(':');
    require(colon != std::string_view::npos, ErrorKind::InvalidInput, "expected scale:<c>:<kind>");
    return scaled(parse_positive(rest.substr(0, colon), "scale"), parse(rest.substr(colon + 1)));
  }
  if (spec.starts_with("table:")) return load_table(std::string(spec.substr(6)));
  fail(ErrorKind::InvalidInput, "unknown weight kind '" + std::string(spec) + "'");
}

double WeightSequence::log_weight(std::uint64_t n) const {
  require(n >= 1, ErrorKind::InvalidInput, "weights are indexed from 1");
  const auto x = static_cast<double>(n);
  switch (kind_) {
    case Kind::Constant:
      return std::log(factor_);
    case Kind::Scaled:
      return std::log(factor_) + base_->log_weight(n);
    case Kind::HarmonicUp:
      return std::log1p(1.0 / (x + 1.0));
    case Kind::HarmonicDown:
      return std::log1p(-1.0 / (x + 1.0));
    case Kind::Poly:
      return std::log(x);
    case Kind::InvPoly:
      return -std::log(x);
    case Kind::Tabulated: {
      const auto size = table_->logs.size();
      if (n <= size) return table_->logs[n - 1];
      if (table_->tail == TailRule::RepeatLast) return table_->logs.back();
      return table_->logs[(n - 1) % size];
    }
  }
  return 0.0;
}

long double WeightSequence::prefix_log_sum(std::uint64_t n) const {
  const auto x = static_cast<long double>(n);
  switch (kind_) {
    case Kind::Constant:
      return x * std::log(static_cast<long double>(factor_));
    case Kind::Scaled:
      return x * std::log(static_cast<long double>(factor_)) + base_->prefix_log_sum(n);
    case Kind::HarmonicUp:
      // prod (l+2)/(l+1) telescopes to (n+2)/2
      return std::log((x + 2.0L) / 2.0L);
    case Kind::HarmonicDown:
      return -std::log(x + 1.0L);
    case Kind::Poly:
      return std::lgamma(x + 1.0L);
    case Kind::InvPoly:
      return -std::lgamma(x + 1.0L);
    case Kind::Tabulated: {
      const auto size = table_->logs.size();
      if (n <= size) return table_->prefix[n];
      if (table_->tail == TailRule::RepeatLast) {
        return table_->prefix[size] + static_cast<long double>(n - size) * table_->logs.back();
      }
      const auto periods = n / size;
      return static_cast<long double>(periods) * table_->prefix[size] + table_->prefix[n % size];
    }
  }
  return 0.0L;
}

double WeightSequence::sup_log() const {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::Constant:
      return std::log(factor_);
    case Kind::Scaled:
      return std::log(factor_) + base_->sup_log();
    case Kind::HarmonicUp:
      return std::log(1.5);  // attained at n = 1
    case Kind::HarmonicDown:
      return 0.0;  // approached, never attained
    case Kind::Poly:
      return kInf;
    case Kind::InvPoly:
      return 0.0;  // w_1 = 1
    case Kind::Tabulated: {
      double best = -kInf;
      for (double v : table_->logs) best = std::max(best, v);
      return best;
    }
  }
  return kInf;
}

bool WeightSequence::bounded() const { return std::isfinite(sup_log()); }

bool WeightSequence::root_bounded() const {
  // Every built-in kind grows at most polynomially, and n^{1/n} <= e^{1/e}.
  return true;
}

std::string WeightSequence::to_string() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case Kind::Constant:
      out << "const:" << factor_;
      break;
    case Kind::Scaled:
      out << "scale:" << factor_ << ":" << base_->to_string();
      break;
    case Kind::HarmonicUp:
      out << "harmonic-up";
      break;
    case Kind::HarmonicDown:
      out << "harmonic-down";
      break;
    case Kind::Poly:
      out << "poly";
      break;
    case Kind::InvPoly:
      out << "inv-poly";
      break;
    case Kind::Tabulated:
      out << "table:" << (table_->origin.empty() ? "<inline>" : table_->origin);
      break;
  }
  return out.str();
}

bool continuity_on(const SpaceKind& space, const WeightSequence& w) {
  switch (space.tag) {
    case SpaceKind::Tag::Lp:
    case SpaceKind::Tag::C0:
      return w.bounded();
    case SpaceKind::Tag::Entire:
      return w.root_bounded();
    case SpaceKind::Tag::FullProduct:
      return true;
  }
  return false;
}

}  // namespace randshift
