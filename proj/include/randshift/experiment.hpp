#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "randshift/ergodic.hpp"
#include "randshift/spaces.hpp"
#include "randshift/weights.hpp"

namespace randshift {

inline constexpr const char* kArtifactName = "randshift";
inline constexpr const char* kArtifactVersion = "0.1.0";

struct CheckpointSpec {
  enum class Kind { Geometric, Full, List };
  Kind kind = Kind::Geometric;
  std::uint64_t base = 64;
  double ratio = 2.0;
  std::uint64_t count = 0;  // 0: up to the horizon
  std::vector<std::uint64_t> list;

  /// "geometric:<base>,<ratio>[,<count>]" | "full" | "<n1>,<n2>,...".
  static CheckpointSpec parse(std::string_view text);
  std::vector<std::uint64_t> resolve(std::uint64_t horizon) const;
  std::string to_string() const;
};

enum class Evaluator { Auto, Naive, Fast };

/// One simulation run. Text form: "key = value" lines, '#' comments.
///   space, system, partition (cells separated by ';'), weights (families
///   separated by ';'), horizon, checkpoints, samples, seed, evaluator,
///   workers, format, output, policy.tail_fraction, policy.theta_up,
///   policy.theta_bound, policy.slope_tolerance
struct ExperimentConfig {
  SpaceKind space = SpaceKind::lp(2.0);
  std::string system_text = "bernoulli:0.5,0.5";
  ErgodicSystem system = ErgodicSystem::bernoulli({0.5, 0.5});
  std::vector<std::string> partition_text;
  Partition partition;
  std::vector<WeightSequence> weights;
  std::uint64_t horizon = 4096;
  CheckpointSpec checkpoints;
  std::uint64_t samples = 1;
  std::uint64_t master_seed = 0;
  ClassifyPolicy policy;
  bool policy_overridden = false;
  Evaluator evaluator = Evaluator::Auto;
  unsigned workers = 0;
  std::string format = "json";
  std::string output;

  static ExperimentConfig parse(std::istream& in, const std::string& origin = "<config>");
  static ExperimentConfig load(const std::string& path);

  /// Cross-field checks (cell counts, checkpoints <= horizon, continuity).
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

/// One row group of the CSV export: a series over checkpoints plus a label.
struct SampleSeries {
  std::uint64_t sample_id = 0;
  std::vector<std::uint64_t> n;
  std::vector<double> v;
  std::vector<double> d;
  std::string label;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  std::string recipe;  // empty for plain simulate runs
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> grid;
  std::vector<SampleSeries> samples;
  nlohmann::ordered_json aggregates = nlohmann::ordered_json::object();
  std::vector<CriterionResult> criteria;
  double wall_time = 0.0;

  bool passed() const;
};

ExperimentReport run_config(const ExperimentConfig& cfg);

/// JSON: floats as 17 significant digits, non-finite values as null, LF line
/// endings, "wall_time" last and on its own line.
std::string to_json_text(const ExperimentReport& report, bool include_wall_time = true);
/// CSV: header sample_id,n,V,D,label then one row per sample and checkpoint.
std::string to_csv_text(const ExperimentReport& report);
/// Writes the report; IoError on failure.
void emit(const ExperimentReport& report, const std::string& format, const std::string& path);

/// Serializer used by to_json_text, exposed for the CLI's other subcommands.
std::string dump_json(const nlohmann::ordered_json& value);

}  // namespace randshift
