// randshift command line: simulate, reproduce and the stand-alone experiments.

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randshift/averages.hpp"
#include "randshift/error.hpp"
#include "randshift/experiment.hpp"
#include "randshift/recipes.hpp"
#include "randshift/rokhlin.hpp"
#include "randshift/spaces.hpp"
#include "randshift/weights.hpp"

using namespace randshift;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

nlohmann::ordered_json header(const std::string& command) {
  nlohmann::ordered_json j;
  j["artifact"] = {{"name", kArtifactName}, {"version", kArtifactVersion}};
  j["command"] = command;
  return j;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail(ErrorKind::IoError, "cannot open '" + path + "': " + std::strerror(errno));
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) fail(ErrorKind::IoError, "cannot write '" + path + "': " + std::strerror(errno));
}

void print_criteria(const ExperimentReport& r) {
  for (const auto& c : r.criteria) {
    std::fprintf(stderr, "%s  %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  }
  if (!r.criteria.empty()) std::fprintf(stderr, "%s %s\n", r.recipe.c_str(), r.passed() ? "PASS" : "FAIL");
}

// Explicit lists carry their own horizon; geometric specs run up to `fallback`.
std::vector<std::uint64_t> parse_grid(const std::string& text, std::uint64_t fallback) {
  const auto spec = CheckpointSpec::parse(text);
  return spec.resolve(spec.list.empty() ? fallback : spec.list.back());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random products of weighted backward shifts driven by ergodic systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kArtifactName) + " " + kArtifactVersion);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run an experiment described by a config file");
  std::string config_path;
  std::uint64_t seed = 42;
  std::string out;
  std::string format;
  bool seed_set = false;
  simulate->add_option("--config", config_path, "config file (key = value lines)")->required();
  auto* seed_opt = simulate->add_option("--seed", seed, "master seed (overrides the config)");
  simulate->add_option("--out", out, "output path, '-' for stdout");
  simulate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  // reproduce
  auto* reproduce_cmd = app.add_subcommand("reproduce", "run a pinned recipe and check its thresholds");
  std::string recipe;
  std::uint64_t recipe_seed = 42;
  std::string recipe_out;
  std::string recipe_format = "json";
  bool list = false;
  reproduce_cmd->add_option("recipe", recipe, "recipe id");
  reproduce_cmd->add_option("--seed", recipe_seed, "master seed");
  reproduce_cmd->add_option("--out", recipe_out, "output path, '-' for stdout");
  reproduce_cmd->add_option("--format", recipe_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  reproduce_cmd->add_flag("--list", list, "list recipe ids");

  // single-shift
  auto* single = app.add_subcommand("single-shift", "verdict for one weighted backward shift");
  std::string space_text = "lp:2";
  std::string weight_text;
  std::uint64_t single_horizon = 100000;
  single->add_option("--space", space_text, "lp:<p>, c0, entire or full");
  single->add_option("--weights", weight_text, "weight family, e.g. const:2 or harmonic-up")->required();
  single->add_option("--horizon", single_horizon, "largest n");

  // norlund
  auto* norlund = app.add_subcommand("norlund", "L2 error of Nörlund means of 1_A1");
  std::string system_text = "bernoulli:0.5,0.5";
  std::vector<std::string> partition_text;
  std::string norlund_weights = "harmonic";
  std::string grid_text = "1000,10000,100000";
  std::uint64_t samples = 100;
  std::uint64_t aux_seed = 42;
  std::string aux_out;
  norlund->add_option("--system", system_text, "ergodic system");
  norlund->add_option("--partition", partition_text, "cells, e.g. 1:[0,0.5) 2:[0.5,1)");
  norlund->add_option("--weights", norlund_weights, "cesaro, harmonic, log or custom:<p,...>");
  norlund->add_option("--checkpoints", grid_text, "checkpoint list or geometric spec");
  norlund->add_option("--samples", samples, "number of sample points");
  norlund->add_option("--seed", aux_seed, "master seed");
  norlund->add_option("--out", aux_out, "output path");

  // oxtoby
  auto* oxtoby = app.add_subcommand("oxtoby", "sup over starts of Nörlund means along a rotation");
  std::string rotation_text = "rotation:golden";
  std::string f_text = "cos1";
  std::string oxtoby_weights = "harmonic";
  std::uint64_t oxtoby_n = 100000;
  std::uint64_t starts = 512;
  oxtoby->add_option("--system", rotation_text, "rotation:<alpha>");
  oxtoby->add_option("--f", f_text, "trigonometric polynomial, e.g. 1+0.5*cos2");
  oxtoby->add_option("--weights", oxtoby_weights, "Nörlund weights");
  oxtoby->add_option("--horizon", oxtoby_n, "n");
  oxtoby->add_option("--starts", starts, "grid of starting points");
  oxtoby->add_option("--out", aux_out, "output path");

  // clt
  auto* clt = app.add_subcommand("clt", "KS distance of standardized Birkhoff sums to N(0,1)");
  std::string clt_system = "doubling";
  std::vector<std::string> clt_partition = {"1:[0,0.5)", "2:[0.5,1)"};
  std::string clt_grid = "256,1024,4096";
  std::uint64_t clt_samples = 2000;
  clt->add_option("--system", clt_system, "ergodic system");
  clt->add_option("--partition", clt_partition, "cells");
  clt->add_option("--checkpoints", clt_grid, "checkpoint list");
  clt->add_option("--samples", clt_samples, "number of sample points");
  clt->add_option("--seed", aux_seed, "master seed");
  clt->add_option("--out", aux_out, "output path");

  // rokhlin
  auto* rokhlin = app.add_subcommand("rokhlin", "Rokhlin towers, bad set measure and harmonic sums");
  std::string bad_set = "rokhlin:heights=512,4096,32768";
  std::uint64_t measure_samples = 100000;
  std::uint64_t rokhlin_samples = 200;
  std::uint64_t rokhlin_horizon = 32768;
  rokhlin->add_option("--bad-set", bad_set, "rokhlin:heights=<n1,n2,...>");
  rokhlin->add_option("--measure-samples", measure_samples, "points for the mu(B) estimate");
  rokhlin->add_option("--samples", rokhlin_samples, "orbits for the harmonic sums");
  rokhlin->add_option("--horizon", rokhlin_horizon, "orbit length");
  rokhlin->add_option("--seed", aux_seed, "master seed");
  rokhlin->add_option("--out", aux_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }
  seed_set = seed_opt->count() > 0;

  try {
    if (*simulate) {
      auto cfg = ExperimentConfig::load(config_path);
      if (seed_set) cfg.master_seed = seed;
      if (!format.empty()) cfg.format = format;
      if (!out.empty()) cfg.output = out;
      const auto report = run_config(cfg);
      emit(report, cfg.format, cfg.output);
      return kExitPass;
    }
    if (*reproduce_cmd) {
      if (list || recipe.empty()) {
        for (const auto& r : recipes()) std::printf("%-18s %s\n", r.id.c_str(), r.summary.c_str());
        return list ? kExitPass : kExitError;
      }
      const auto report = reproduce(recipe, recipe_seed);
      emit(report, recipe_format, recipe_out);
      print_criteria(report);
      return report.passed() ? kExitPass : kExitFail;
    }
    if (*single) {
      const auto space = SpaceKind::parse(space_text);
      const auto w = WeightSequence::parse(weight_text);
      const auto v = single_shift_verdict(space, w, single_horizon);
      auto j = header("single-shift");
      j["space"] = space.to_string();
      j["weights"] = w.to_string();
      j["horizon"] = single_horizon;
      j["continuous"] = continuity_on(space, w);
      j["verdict"] = to_string(v.label);
      j["running_max"] = v.running_max;
      j["tail_min"] = v.tail_min;
      j["trend_slope"] = v.trend_slope;
      write_text(dump_json(j), "-");
      return kExitPass;
    }
    if (*norlund) {
      const auto system = ErgodicSystem::parse(system_text);
      const auto partition = partition_text.empty() ? Partition() : Partition::parse(partition_text);
      const auto p = NorlundWeights::parse(norlund_weights);
      const auto regular = check_regularity(p);
      const auto grid = parse_grid(grid_text, 100000);
      const auto r = norlund_l2_experiment(system, partition, p, grid, samples, aux_seed);
      auto j = header("norlund");
      j["system"] = system_text;
      j["weights"] = p.to_string();
      j["regular"] = regular.holds;
      if (!regular.warning.empty()) j["regularity_warning"] = regular.warning;
      j["samples"] = samples;
      j["seed"] = aux_seed;
      j["grid"] = r.grid;
      j["target"] = r.target;
      j["l2_error"] = r.l2_error;
      write_text(dump_json(j), aux_out);
      return kExitPass;
    }
    if (*oxtoby) {
      const auto system = ErgodicSystem::parse(rotation_text);
      const auto r = oxtoby_sup_experiment(system, TrigPolynomial::parse(f_text), NorlundWeights::parse(oxtoby_weights),
                                           oxtoby_n, starts);
      auto j = header("oxtoby");
      j["system"] = rotation_text;
      j["f"] = f_text;
      j["weights"] = oxtoby_weights;
      j["n"] = r.n;
      j["starts"] = r.grid_size;
      j["sup_deviation"] = r.sup_deviation;
      j["argmax_start"] = r.argmax_start;
      j["deviations"] = r.deviations;
      write_text(dump_json(j), aux_out);
      return kExitPass;
    }
    if (*clt) {
      const auto system = ErgodicSystem::parse(clt_system);
      const auto partition = Partition::parse(clt_partition);
      const auto grid = parse_grid(clt_grid, 4096);
      const auto r = clt_experiment(system, partition, grid, clt_samples, aux_seed);
      auto j = header("clt");
      j["system"] = clt_system;
      j["partition"] = clt_partition;
      j["samples"] = clt_samples;
      j["seed"] = aux_seed;
      j["grid"] = r.grid;
      j["mu"] = r.mu;
      j["variance"] = r.variance;
      j["variance_known"] = r.variance_known;
      j["degenerate"] = r.degenerate;
      j["ks"] = r.ks;
      auto q = nlohmann::ordered_json::array();
      for (const auto& row : r.raw_quantiles) q.push_back({row[0], row[1], row[2]});
      j["raw_quantiles_5_50_95"] = q;
      write_text(dump_json(j), aux_out);
      return kExitPass;
    }
    if (*rokhlin) {
      const auto b = build_bad_set(parse_bad_set_spec(bad_set));
      const auto m = estimate_measure(b, measure_samples, aux_seed);
      const auto h = harmonic_sum_experiment(b, rokhlin_samples, rokhlin_horizon, aux_seed);
      auto j = header("rokhlin");
      j["bad_set"] = bad_set;
      j["admissibility_sum"] = b.admissibility.sum_text;
      j["admissible"] = b.admissibility.admissible;
      auto towers = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < b.towers.size(); ++i) {
        const auto& t = b.towers[i];
        towers.push_back({{"height", t.height()},
                          {"marker", t.marker()},
                          {"window", t.window()},
                          {"epsilon", t.epsilon()},
                          {"top_levels", b.top_levels[i]}});
      }
      j["towers"] = towers;
      j["mu_B"] = m.estimate;
      j["mu_B_ci"] = {m.wilson.lower, m.wilson.upper};
      j["h_min_n"] = h.min_n;
      j["hit_fraction"] = h.hit_fraction;
      j["weak_mixing_fraction"] = h.weak_mixing_fraction;
      write_text(dump_json(j), aux_out);
      return kExitPass;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
