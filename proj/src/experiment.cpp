#include "randshift/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "randshift/cocycle.hpp"
#include "randshift/error.hpp"
#include "randshift/parallel.hpp"
#include "randshift/series.hpp"

namespace randshift {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    const auto item = trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_count(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && used > 0 && text[0] != '-', ErrorKind::InvalidInput,
          "expected a non-negative integer, got '" + text + "'");
  return v;
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && used > 0 && std::isfinite(v), ErrorKind::InvalidInput,
          "expected a number, got '" + text + "'");
  return v;
}

}  // namespace

// ---------------------------------------------------------------- checkpoints

CheckpointSpec CheckpointSpec::parse(std::string_view text) {
  CheckpointSpec spec;
  const std::string t = trim(text);
  if (t == "full") {
    spec.kind = Kind::Full;
    return spec;
  }
  if (t.rfind("geometric:", 0) == 0) {
    const auto parts = split(std::string_view(t).substr(10), ',');
    require(parts.size() == 2 || parts.size() == 3, ErrorKind::InvalidInput,
            "expected geometric:<base>,<ratio>[,<count>]");
    spec.kind = Kind::Geometric;
    spec.base = parse_count(parts[0]);
    spec.ratio = parse_real(parts[1]);
    spec.count = parts.size() == 3 ? parse_count(parts[2]) : 0;
    require(spec.base >= 1 && spec.ratio > 1.0, ErrorKind::InvalidInput, "geometric grid needs base >= 1, ratio > 1");
    return spec;
  }
  spec.kind = Kind::List;
  for (const auto& item : split(t, ',')) spec.list.push_back(parse_count(item));
  require(!spec.list.empty(), ErrorKind::InvalidInput, "empty checkpoint list");
  validate_checkpoints(spec.list);
  return spec;
}

std::vector<std::uint64_t> CheckpointSpec::resolve(std::uint64_t horizon) const {
  switch (kind) {
    case Kind::Full:
      return full_grid(horizon);
    case Kind::List:
      return list;
    case Kind::Geometric:
      break;
  }
  if (count == 0) return geometric_grid(base, ratio, horizon);
  std::vector<std::uint64_t> grid;
  double next = static_cast<double>(base);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto n = static_cast<std::uint64_t>(std::llround(next));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
    next *= ratio;
  }
  return grid;
}

std::string CheckpointSpec::to_string() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind) {
    case Kind::Full:
      return "full";
    case Kind::Geometric:
      out << "geometric:" << base << "," << ratio;
      if (count) out << "," << count;
      return out.str();
    case Kind::List:
      break;
  }
  for (std::size_t i = 0; i < list.size(); ++i) out << (i ? "," : "") << list[i];
  return out.str();
}

// ---------------------------------------------------------------- config

ExperimentConfig ExperimentConfig::parse(std::istream& in, const std::string& origin) {
  ExperimentConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::map<std::string, double> policy_overrides;
  std::size_t partition_line = 0;
  bool horizon_set = false;
  std::size_t line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    // '#' starts a comment at the beginning of a line or after whitespace
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.resize(i);
        break;
      }
    }
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string::npos) fail(ErrorKind::ConfigError, where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (seen.count(key)) {
      fail(ErrorKind::ConfigError,
           where + ": field '" + key + "' repeats line " + std::to_string(seen[key]));
    }
    seen[key] = line_no;
    require(!value.empty(), ErrorKind::ConfigError, where + ": field '" + key + "' has no value");

    try {
      if (key == "space") {
        cfg.space = SpaceKind::parse(value);
      } else if (key == "system") {
        cfg.system = ErgodicSystem::parse(value);
        cfg.system_text = value;
      } else if (key == "partition") {
        cfg.partition_text = split(value, ';');
        partition_line = line_no;
      } else if (key == "weights") {
        for (const auto& w : split(value, ';')) cfg.weights.push_back(WeightSequence::parse(w));
      } else if (key == "horizon") {
        cfg.horizon = parse_count(value);
        horizon_set = true;
      } else if (key == "checkpoints") {
        cfg.checkpoints = CheckpointSpec::parse(value);
      } else if (key == "samples") {
        cfg.samples = parse_count(value);
      } else if (key == "seed") {
        cfg.master_seed = parse_count(value);
      } else if (key == "evaluator") {
        if (value == "auto") {
          cfg.evaluator = Evaluator::Auto;
        } else if (value == "naive") {
          cfg.evaluator = Evaluator::Naive;
        } else if (value == "fast") {
          cfg.evaluator = Evaluator::Fast;
        } else {
          fail(ErrorKind::InvalidInput, "expected auto, naive or fast");
        }
      } else if (key == "workers") {
        cfg.workers = static_cast<unsigned>(parse_count(value));
      } else if (key == "format") {
        require(value == "json" || value == "csv", ErrorKind::InvalidInput, "expected json or csv");
        cfg.format = value;
      } else if (key == "output") {
        cfg.output = value;
      } else if (key == "policy.tail_fraction" || key == "policy.theta_up" || key == "policy.theta_bound" ||
                 key == "policy.slope_tolerance") {
        policy_overrides[key] = parse_real(value);
      } else {
        fail(ErrorKind::InvalidInput, "unknown field");
      }
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, where + ": field '" + key + "': " + e.what());
    }
  }

  if (!cfg.partition_text.empty()) {
    try {
      cfg.partition = Partition::parse(cfg.partition_text);
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, origin + ":" + std::to_string(partition_line) + ": field 'partition': " + e.what());
    }
  }
  cfg.policy = ClassifyPolicy::defaults_for(cfg.space);
  cfg.policy_overridden = !policy_overrides.empty();
  for (const auto& [key, v] : policy_overrides) {
    if (key == "policy.tail_fraction") cfg.policy.tail_fraction = v;
    if (key == "policy.theta_up") cfg.policy.theta_up = v;
    if (key == "policy.theta_bound") cfg.policy.theta_bound = v;
    if (key == "policy.slope_tolerance") cfg.policy.slope_tolerance = v;
  }
  if (!horizon_set && cfg.checkpoints.kind == CheckpointSpec::Kind::List) cfg.horizon = cfg.checkpoints.list.back();
  if (!horizon_set && cfg.checkpoints.kind == CheckpointSpec::Kind::Geometric && cfg.checkpoints.count) {
    cfg.horizon = cfg.checkpoints.resolve(0).back();
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DiscontinuousShift) throw;
    fail(ErrorKind::ConfigError, origin + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "': " + std::strerror(errno));
  return parse(in, path);
}

void ExperimentConfig::validate() const {
  require(!weights.empty(), ErrorKind::InvalidInput, "field 'weights' is required");
  const auto k = static_cast<unsigned>(weights.size());
  if (system.needs_partition()) {
    require(!partition.empty(), ErrorKind::InvalidInput, "system " + system_text + " needs a 'partition'");
    require(partition.size() == k, ErrorKind::InvalidInput,
            "partition has " + std::to_string(partition.size()) + " cells but " + std::to_string(k) +
                " weight families are given");
  } else {
    require(system.implicit_cells() == k, ErrorKind::InvalidInput,
            "system has " + std::to_string(system.implicit_cells()) + " symbols but " + std::to_string(k) +
                " weight families are given");
    require(partition.empty(), ErrorKind::InvalidInput, "system " + system_text + " takes no partition");
  }
  require(horizon >= 1, ErrorKind::InvalidInput, "horizon must be >= 1");
  require(samples >= 1, ErrorKind::InvalidInput, "samples must be >= 1");
  if (const auto* e = std::get_if<ExplicitSystem>(&system.kind)) {
    require(horizon <= e->symbols.size(), ErrorKind::InvalidInput, "horizon exceeds the explicit symbol stream");
  }
  const auto grid = checkpoints.resolve(horizon);
  require(!grid.empty(), ErrorKind::InvalidInput, "no checkpoints");
  validate_checkpoints(grid);
  require(grid.back() <= horizon, ErrorKind::InvalidInput, "checkpoints exceed the horizon");
  require(evaluator != Evaluator::Fast || k == 2, ErrorKind::UnsupportedArity,
          "the fast evaluator needs exactly two weight families");
  policy.validate();
  for (const auto& w : weights) {
    require(continuity_on(space, w), ErrorKind::DiscontinuousShift,
            "weights " + w.to_string() + " do not define a continuous shift on " + space.to_string());
  }
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["space"] = space.to_string();
  j["system"] = system_text;
  j["partition"] = partition_text;
  auto ws = nlohmann::ordered_json::array();
  for (const auto& w : weights) ws.push_back(w.to_string());
  j["weights"] = ws;
  j["horizon"] = horizon;
  j["checkpoints"] = checkpoints.to_string();
  j["samples"] = samples;
  j["seed"] = master_seed;
  j["evaluator"] = evaluator == Evaluator::Auto ? "auto" : evaluator == Evaluator::Naive ? "naive" : "fast";
  j["policy"] = {{"tail_fraction", policy.tail_fraction},
                 {"theta_up", policy.theta_up},
                 {"theta_bound", policy.theta_bound},
                 {"slope_tolerance", policy.slope_tolerance}};
  return j;
}

// ---------------------------------------------------------------- run

bool ExperimentReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
}

ExperimentReport run_config(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const Cocycle cocycle{cfg.weights};
  const auto grid = cfg.checkpoints.resolve(cfg.horizon);
  const bool full = cfg.checkpoints.kind == CheckpointSpec::Kind::Full;
  const bool fast = cocycle.arity() == 2 && (cfg.evaluator == Evaluator::Fast || (cfg.evaluator == Evaluator::Auto && full));
  // a full grid is classified in full but reported on the default geometric grid
  const auto reported = full ? geometric_grid(64, 2.0, cfg.horizon) : grid;

  ExperimentReport report;
  report.config = cfg.to_json();
  report.seed = cfg.master_seed;
  report.grid = reported;
  report.samples.resize(cfg.samples);

  parallel_for(
      cfg.samples,
      [&](std::size_t i) {
        const auto s = sample_symbols(cfg.system, cfg.partition, cfg.master_seed, i, cfg.horizon);
        LogProductSeries v;
        if (fast) {
          const auto all = log_product_series_fast(cocycle, s, cfg.horizon);
          v.checkpoints = grid;
          for (const auto n : grid) v.values.push_back(all.values[n - 1]);
        } else {
          v = log_product_series_naive(cocycle, s, grid);
        }
        const auto d = diagnostic_series(cfg.space, v);
        const auto verdict = classify_series(d, cfg.policy);

        auto& out = report.samples[i];
        out.sample_id = i;
        out.label = to_string(verdict.label);
        std::size_t g = 0;
        for (const auto n : reported) {
          while (v.checkpoints[g] != n) ++g;
          out.n.push_back(n);
          out.v.push_back(v.values[g]);
          out.d.push_back(d.values[g]);
        }
        out.extra["running_max"] = verdict.running_max;
        out.extra["tail_min"] = verdict.tail_min;
        out.extra["trend_slope"] = verdict.trend_slope;
      },
      cfg.workers);

  std::map<std::string, std::uint64_t> counts;
  for (const auto v : {Verdict::MixingEvidence, Verdict::WeakMixingEvidence, Verdict::Inconclusive,
                       Verdict::NonUniversalEvidence}) {
    counts[to_string(v)] = 0;
  }
  for (const auto& s : report.samples) ++counts[s.label];
  nlohmann::ordered_json hist;
  for (const auto v : {Verdict::MixingEvidence, Verdict::WeakMixingEvidence, Verdict::Inconclusive,
                       Verdict::NonUniversalEvidence}) {
    hist[to_string(v)] = counts[to_string(v)];
  }
  report.aggregates["verdicts"] = hist;
  report.aggregates["evaluator"] = fast ? "fast" : "naive";
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------- output

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_scalar(const nlohmann::ordered_json& v) { return !v.is_object() && !v.is_array(); }

void write_json(std::ostringstream& out, const nlohmann::ordered_json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (v.is_number_float()) {
    out << format_double(v.get<double>());
  } else if (v.is_object()) {
    if (v.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out << ",\n";
      first = false;
      out << inner << nlohmann::ordered_json(it.key()).dump() << ": ";
      write_json(out, it.value(), indent + 1);
    }
    out << "\n" << pad << "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out << "[]";
      return;
    }
    const bool flat = std::all_of(v.begin(), v.end(), [](const auto& e) { return is_scalar(e); });
    if (flat) {
      out << "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        write_json(out, v[i], indent + 1);
      }
      out << "]";
      return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ",\n";
      out << inner;
      write_json(out, v[i], indent + 1);
    }
    out << "\n" << pad << "]";
  } else {
    out << v.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& value) {
  std::ostringstream out;
  write_json(out, value, 0);
  out << "\n";
  return out.str();
}

std::string to_json_text(const ExperimentReport& report, bool include_wall_time) {
  nlohmann::ordered_json root;
  root["artifact"] = {{"name", kArtifactName}, {"version", kArtifactVersion}};
  if (!report.recipe.empty()) root["recipe"] = report.recipe;
  root["seed"] = report.seed;
  root["config"] = report.config;
  root["grid"] = report.grid;
  auto samples = nlohmann::ordered_json::array();
  for (const auto& s : report.samples) {
    nlohmann::ordered_json j;
    j["sample_id"] = s.sample_id;
    j["label"] = s.label;
    j["n"] = s.n;
    j["V"] = s.v;
    j["D"] = s.d;
    for (auto it = s.extra.begin(); it != s.extra.end(); ++it) j[it.key()] = it.value();
    samples.push_back(j);
  }
  root["per_sample"] = samples;
  root["aggregates"] = report.aggregates;
  if (!report.criteria.empty()) {
    auto crit = nlohmann::ordered_json::array();
    for (const auto& c : report.criteria) crit.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    root["criteria"] = crit;
    root["pass"] = report.passed();
  }
  if (include_wall_time) root["wall_time"] = report.wall_time;
  return dump_json(root);
}

std::string to_csv_text(const ExperimentReport& report) {
  std::ostringstream out;
  out << "sample_id,n,V,D,label\n";
  for (const auto& s : report.samples) {
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      out << s.sample_id << ',' << s.n[i] << ',' << format_double(s.v[i]) << ',' << format_double(s.d[i]) << ','
          << s.label << '\n';
    }
  }
  return out.str();
}

void emit(const ExperimentReport& report, const std::string& format, const std::string& path) {
  std::string text;
  if (format == "json") {
    text = to_json_text(report);
  } else if (format == "csv") {
    text = to_csv_text(report);
  } else {
    fail(ErrorKind::InvalidInput, "unknown output format '" + format + "' (expected csv or json)");
  }
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot open '" + path + "': " + std::strerror(errno));
  out << text;
  out.flush();
  if (!out) fail(ErrorKind::IoError, "write to '" + path + "' failed: " + std::strerror(errno));
}

}  // namespace randshift
