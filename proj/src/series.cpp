#include "randshift/series.hpp"

#include <cmath>

#include "randshift/error.hpp"

namespace randshift {

std::vector<std::uint64_t> geometric_grid(std::uint64_t base, double ratio, std::uint64_t horizon) {
  require(base >= 1 && ratio > 1.0, ErrorKind::InvalidInput, "geometric grid needs base >= 1 and ratio > 1");
  std::vector<std::uint64_t> grid;
  double next = static_cast<double>(base);
  while (next <= static_cast<double>(horizon)) {
    const auto n = static_cast<std::uint64_t>(std::llround(next));
    if (grid.empty() || n > grid.back()) grid.push_back(n);
    next *= ratio;
  }
  if (horizon >= 1 && (grid.empty() || grid.back() != horizon)) grid.push_back(horizon);
  return grid;
}

std::vector<std::uint64_t> full_grid(std::uint64_t horizon) {
  std::vector<std::uint64_t> grid(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) grid[n - 1] = n;
  return grid;
}

void validate_checkpoints(const std::vector<std::uint64_t>& checkpoints) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    require(checkpoints[i] >= 1, ErrorKind::InvalidInput, "checkpoints start at 1");
    require(i == 0 || checkpoints[i] > checkpoints[i - 1], ErrorKind::InvalidInput,
            "checkpoints must be strictly increasing");
  }
}

}  // namespace randshift
