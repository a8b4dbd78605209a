#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "randshift/error.hpp"
#include "randshift/experiment.hpp"
#include "randshift/parallel.hpp"
#include "randshift/cocycle.hpp"
#include "randshift/recipes.hpp"
#include "randshift/series.hpp"

using namespace randshift;

namespace {

ExperimentConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return ExperimentConfig::parse(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("checkpoint specs") {
  CHECK(CheckpointSpec::parse("geometric:64,2").resolve(1000) == std::vector<std::uint64_t>{64, 128, 256, 512, 1000});
  CHECK(CheckpointSpec::parse("geometric:10,10,3").resolve(100000) == std::vector<std::uint64_t>{10, 100, 1000});
  CHECK(CheckpointSpec::parse("full").resolve(4).size() == 4);
  CHECK(CheckpointSpec::parse("5,50,500").resolve(500) == std::vector<std::uint64_t>{5, 50, 500});
  CHECK_THROWS_AS(CheckpointSpec::parse("5,3"), Error);
  CHECK_THROWS_AS(CheckpointSpec::parse("geometric:64,1"), Error);
  CHECK(CheckpointSpec::parse(CheckpointSpec::parse("geometric:8,3").to_string()).resolve(100) ==
        CheckpointSpec::parse("geometric:8,3").resolve(100));
}

TEST_CASE("config files") {
  const auto cfg = parse_text(
      "# l^2 with harmonic weights\n"
      "space = lp:2\n"
      "system = doubling\n"
      "partition = 1:[0,0.5) ; 2:[0.5,1)\n"
      "weights = harmonic-up ; harmonic-down   # trailing comment\n"
      "horizon = 4096\n"
      "samples = 3\n"
      "seed = 9\n"
      "policy.theta_up = 6\n");
  CHECK(cfg.weights.size() == 2);
  CHECK(cfg.partition.size() == 2);
  CHECK(cfg.samples == 3);
  CHECK(cfg.master_seed == 9);
  CHECK(cfg.policy.theta_up == 6.0);
  CHECK(cfg.policy_overridden);
  CHECK(cfg.checkpoints.resolve(cfg.horizon).back() == 4096);

  CHECK(error_of("space = lp:2\nsytem = doubling\n").find("test.cfg:2") != std::string::npos);
  CHECK(error_of("space = lp:2\nsystem = tent\n").find("'system'") != std::string::npos);
  CHECK(error_of("samples = 1\nsamples = 2\n").find("repeats line 1") != std::string::npos);
  CHECK(error_of("horizon = -5\n").find("'horizon'") != std::string::npos);
  CHECK(error_of("just words\n").find("test.cfg:1") != std::string::npos);
}

TEST_CASE("cross-field validation") {
  CHECK_THROWS_AS(parse_text("system = bernoulli:0.5,0.5\nweights = const:2\n").validate(), Error);
  CHECK_THROWS_AS(parse_text("system = bernoulli:1\nweights = const:2\nhorizon = 100\ncheckpoints = 50,200\n").validate(),
                  Error);
  try {
    parse_text("system = bernoulli:1\nweights = poly\n").validate();
    FAIL("expected a continuity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DiscontinuousShift);
  }
  CHECK_NOTHROW(parse_text("space = entire\nsystem = bernoulli:1\nweights = poly\n").validate());
}

TEST_CASE("constant weight 2 is mixing on l^2") {
  const auto cfg = parse_text("system = bernoulli:1\nweights = const:2\nsamples = 8\nhorizon = 4096\n");
  const auto r = run_config(cfg);
  REQUIRE(r.samples.size() == 8);
  for (const auto& s : r.samples) CHECK(s.label == "MixingEvidence");
}

TEST_CASE("reports are deterministic and independent of the worker count") {
  const std::string base =
      "space = lp:2\nsystem = bernoulli:0.7,0.3\nweights = harmonic-up ; harmonic-down\n"
      "horizon = 20000\nsamples = 12\nseed = 5\n";
  const auto one = run_config(parse_text(base + "workers = 1\n"));
  const auto four = run_config(parse_text(base + "workers = 4\n"));
  const auto again = run_config(parse_text(base + "workers = 1\n"));
  CHECK(to_json_text(one, false) == to_json_text(again, false));
  CHECK(to_csv_text(one) == to_csv_text(four));
  CHECK(one.config.dump() != "");
  const auto json = to_json_text(one);
  CHECK(json.find("\"wall_time\"") != std::string::npos);
  CHECK(json.find('\r') == std::string::npos);
  CHECK(to_json_text(one, false).find("wall_time") == std::string::npos);
}

TEST_CASE("fast and naive evaluators give the same verdicts") {
  const std::string base =
      "space = lp:2\nsystem = bernoulli:0.6,0.4\nweights = harmonic-up ; harmonic-down\n"
      "horizon = 8192\nsamples = 4\nseed = 1\n";
  const auto naive = run_config(parse_text(base + "evaluator = naive\n"));
  const auto fast = run_config(parse_text(base + "evaluator = fast\n"));
  for (std::size_t i = 0; i < naive.samples.size(); ++i) {
    CHECK(naive.samples[i].label == fast.samples[i].label);
    for (std::size_t j = 0; j < naive.samples[i].v.size(); ++j) {
      CHECK(std::fabs(naive.samples[i].v[j] - fast.samples[i].v[j]) <= 1e-7);
    }
  }
}

TEST_CASE("csv export") {
  ExperimentReport empty;
  CHECK(to_csv_text(empty) == "sample_id,n,V,D,label\n");
  ExperimentReport r;
  for (std::uint64_t s = 0; s < 2; ++s) {
    SampleSeries row;
    row.sample_id = s;
    row.n = {1, 2, 3};
    row.v = {0.1, 0.2, 0.3};
    row.d = {0.1, 0.1, 0.1};
    row.label = "Inconclusive";
    r.samples.push_back(row);
  }
  const auto csv = to_csv_text(r);
  CHECK(count_lines(csv) == 7);
  CHECK(csv.find("1,3,0.29999999999999999,0.10000000000000001,Inconclusive\n") != std::string::npos);
  CHECK(to_csv_text(r) == csv);
}

TEST_CASE("json number formatting") {
  nlohmann::ordered_json j;
  j["x"] = 0.1;
  j["nan"] = std::numeric_limits<double>::quiet_NaN();
  j["list"] = {1, 2};
  const auto text = dump_json(j);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(text.find("\"nan\": null") != std::string::npos);
  CHECK(text.find("[1, 2]") != std::string::npos);
}

TEST_CASE("emit surfaces I/O errors") {
  ExperimentReport r;
  try {
    emit(r, "csv", "/nonexistent-dir/out.csv");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
  }
  const std::string path = "randshift_emit_test.json";
  emit(r, "json", path);
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str().find("\"artifact\"") != std::string::npos);
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit(r, "xml", path), Error);
}

TEST_CASE("parallel_for rethrows the lowest failing index") {
  std::vector<int> seen(100, 0);
  parallel_for(seen.size(), [&](std::size_t i) { seen[i] += 1; }, 4);
  CHECK(std::count(seen.begin(), seen.end(), 1) == 100);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 30 || i == 70) throw std::runtime_error(std::to_string(i));
    }, 4);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "30");
  }
}

TEST_CASE("recipe registry") {
  CHECK(recipes().size() == 9);
  try {
    reproduce("nope", 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("entire-half") != std::string::npos);
  }
}

TEST_CASE("harmonic sandwich holds for the naive evaluator") {
  const auto cfg = parse_text("system = bernoulli:0.7,0.3\nweights = harmonic-up ; harmonic-down\nhorizon = 5000\n");
  const Cocycle c{cfg.weights};
  for (std::uint64_t sample = 0; sample < 5; ++sample) {
    const auto s = sample_symbols(cfg.system, cfg.partition, 3, sample, 5000);
    const auto grid = geometric_grid(1, 2.0, 5000);
    const auto v = log_product_series_naive(c, s, grid);
    CHECK(harmonic_sandwich_violation(s, grid, v.values) <= 1e-9);
    auto shifted = v.values;
    shifted.back() += 4.0;  // the bounds are at most pi^2 / 3 apart
    CHECK(harmonic_sandwich_violation(s, grid, shifted) > 0.5);
  }
}
