#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace randshift {

using u128 = unsigned __int128;

/// A point of [0,1] in 128-bit fixed point: value = frac / 2^128, or exactly 1
/// when `is_one` is set (1 itself does not fit in 128 fractional bits).
struct UnitPoint {
  u128 frac = 0;
  bool is_one = false;

  friend bool operator==(const UnitPoint&, const UnitPoint&) = default;
};

inline constexpr u128 make_u128(std::uint64_t hi, std::uint64_t lo) {
  return (static_cast<u128>(hi) << 64) | lo;
}

inline constexpr u128 kU128Max = ~static_cast<u128>(0);

// 128-bit truncations of (sqrt(5)-1)/2 and sqrt(2)-1.
inline constexpr u128 kGoldenFrac = make_u128(0x9e3779b97f4a7c15ULL, 0xf39cc0605cedc834ULL);
inline constexpr u128 kSilverFrac = make_u128(0x6a09e667f3bcc908ULL, 0xb2fb1366ea957d3eULL);

/// Parses "0.25", "1", "0", ".5", or a named constant ("golden", "sqrt2-1",
/// "1-golden") into an exact truncated fixed-point value in [0,1].
/// Decimal digits beyond what 128 bits resolve are truncated (floor).
UnitPoint parse_unit_point(std::string_view text);

double to_double(u128 x);
double to_double(const UnitPoint& p);

std::string to_hex(u128 x);

inline int count_trailing_zeros(u128 x) {
  const auto lo = static_cast<std::uint64_t>(x);
  if (lo != 0) return __builtin_ctzll(lo);
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  return hi == 0 ? 128 : 64 + __builtin_ctzll(hi);
}

}  // namespace randshift
