#pragma once

#include <cstdint>
#include <vector>

namespace randshift {

/// V_n = log prod_{l=1}^n |eps_l(tau^{n-l} omega)| sampled at increasing
/// checkpoints n_1 < ... < n_m.
struct LogProductSeries {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> values;

  std::size_t size() const { return checkpoints.size(); }
  bool empty() const { return checkpoints.empty(); }
};

/// Checkpoint grids. `geometric_grid(64, 2, N)` is {64, 128, ...} up to N,
/// with N itself appended when it is not already a grid point.
std::vector<std::uint64_t> geometric_grid(std::uint64_t base, double ratio, std::uint64_t horizon);
std::vector<std::uint64_t> full_grid(std::uint64_t horizon);

/// Throws InvalidInput unless the list is strictly increasing and starts at >= 1.
void validate_checkpoints(const std::vector<std::uint64_t>& checkpoints);

}  // namespace randshift
