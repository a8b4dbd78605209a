#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randshift/experiment.hpp"

namespace randshift {

struct RecipeInfo {
  std::string id;
  std::string summary;
  ExperimentReport (*run)(std::uint64_t seed);
};

/// Every reproduction recipe, in a fixed order.
const std::vector<RecipeInfo>& recipes();

/// Runs the pinned configuration of a recipe and fills in its criteria.
/// Unknown ids raise InvalidInput with the list of valid ids.
ExperimentReport reproduce(const std::string& id, std::uint64_t seed);

ExperimentReport recipe_commuting_ladder(std::uint64_t seed);
ExperimentReport recipe_lp_harmonic(std::uint64_t seed);
ExperimentReport recipe_entire_poly(std::uint64_t seed);
ExperimentReport recipe_entire_half(std::uint64_t seed);
ExperimentReport recipe_norlund_l2(std::uint64_t seed);
ExperimentReport recipe_oxtoby(std::uint64_t seed);
ExperimentReport recipe_clt_doubling(std::uint64_t seed);
ExperimentReport recipe_rokhlin_badset(std::uint64_t seed);
ExperimentReport recipe_quickcheck(std::uint64_t seed);

/// V_n bounds for the cocycle 1 + 1/(l+1) on A_1, 1 - 1/(l+1) on A_2:
///   -log(n+1) + 2 sum x_l/(n-l) - 2 sum x_l/(n-l)^2 <= V_n <= -log(n+1) + 2 sum x_l/(n-l)
/// with x_l = [s_l = 1]. Returns the largest violation (0 when both hold).
double harmonic_sandwich_violation(const SymbolStream& s, const std::vector<std::uint64_t>& checkpoints,
                                   const std::vector<double>& v);

}  // namespace randshift
