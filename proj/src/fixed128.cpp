#include "randshift/fixed128.hpp"

#include <cctype>
#include <vector>

#include "randshift/error.hpp"

namespace randshift {

namespace {

// floor(0.d1d2...dk * 2^128) by repeated doubling of the decimal digit array.
u128 decimal_fraction_to_fixed(const std::string& digits) {
  std::vector<int> d;
  d.reserve(digits.size());
  for (char c : digits) d.push_back(c - '0');
  u128 out = 0;
  for (int bit = 0; bit < 128; ++bit) {
    int carry = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) {
      const int v = *it * 2 + carry;
      *it = v % 10;
      carry = v / 10;
    }
    out = (out << 1) | static_cast<u128>(carry);
  }
  return out;
}

}  // namespace

UnitPoint parse_unit_point(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());

  if (s == "golden") return {kGoldenFrac, false};
  if (s == "1-golden") return {~kGoldenFrac, false};
  if (s == "sqrt2-1" || s == "silver") return {kSilverFrac, false};

  require(!s.empty(), ErrorKind::InvalidInput, "empty unit-interval constant");
  // exact form written by to_hex: 0x followed by up to 32 hex digits of the fraction
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    const std::string hex = s.substr(2);
    if (hex.size() > 32 || hex.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
      fail(ErrorKind::InvalidInput, "not a 128-bit hex fraction: '" + s + "'");
    }
    u128 out = 0;
    for (char c : hex) {
      const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : (std::tolower(c) - 'a' + 10);
      out = (out << 4) | static_cast<u128>(v);
    }
    return {out << (4 * (32 - hex.size())), false};
  }
  std::string integer_part;
  std::string fraction_part;
  const auto dot = s.find('.');
  integer_part = s.substr(0, dot);
  if (dot != std::string::npos) fraction_part = s.substr(dot + 1);
  for (char c : integer_part + fraction_part) {
    require(std::isdigit(static_cast<unsigned char>(c)) != 0, ErrorKind::InvalidInput,
            "not a decimal in [0,1]: '" + s + "'");
  }
  while (integer_part.size() > 1 && integer_part.front() == '0') integer_part.erase(integer_part.begin());
  if (integer_part.empty()) integer_part = "0";

  const bool frac_zero = fraction_part.find_first_not_of('0') == std::string::npos;
  if (integer_part == "1" && frac_zero) return {0, true};
  require(integer_part == "0", ErrorKind::InvalidInput, "value outside [0,1]: '" + s + "'");
  if (frac_zero) return {0, false};
  return {decimal_fraction_to_fixed(fraction_part), false};
}

double to_double(u128 x) {
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  const auto lo = static_cast<std::uint64_t>(x);
  return static_cast<double>(hi) * 0x1.0p-64 + static_cast<double>(lo) * 0x1.0p-128;
}

double to_double(const UnitPoint& p) { return p.is_one ? 1.0 : to_double(p.frac); }

std::string to_hex(u128 x) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(32, '0');
  for (int i = 31; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[static_cast<unsigned>(x & 0xf)];
    x >>= 4;
  }
  return "0x" + out;
}

}  // namespace randshift
