#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "randshift/fixed128.hpp"
#include "randshift/rng.hpp"

namespace randshift {

/// Lazily generated uniform bits b_0 b_1 ... (a point of the torus in binary).
/// Bit i is the (i % 64)-th most significant bit of word i / 64.
class BitStream {
 public:
  static constexpr std::uint64_t kDefaultMaxBits = std::uint64_t{1} << 32;

  explicit BitStream(SplitMix64 source, std::uint64_t max_bits = kDefaultMaxBits)
      : source_(source), max_bits_(max_bits) {}

  /// Generates words until bits [0, nbits) exist; HorizonTooLarge past the budget.
  void ensure(std::uint64_t nbits);

  bool bit(std::uint64_t i) {
    ensure(i + 1);
    return ((words_[i >> 6] >> (63 - (i & 63))) & 1U) != 0;
  }

  std::uint64_t word(std::uint64_t w) {
    ensure((w + 1) * 64);
    return words_[w];
  }

  /// Bits i..i+127 as a 128-bit integer, bit i most significant: the
  /// fixed-point truncation of tau^i x.
  u128 window(std::uint64_t i);

  std::uint64_t max_bits() const { return max_bits_; }
  std::uint64_t generated_bits() const { return words_.size() * 64; }

 private:
  SplitMix64 source_;
  std::uint64_t max_bits_;
  std::vector<std::uint64_t> words_;
};

/// Half-open interval [lo, last + 2^-128) in units of 2^-128, i.e. the
/// integer range lo..last of 128-bit truncations.
struct Interval {
  u128 lo = 0;
  u128 last = 0;

  bool contains(u128 x) const { return lo <= x && x <= last; }
  double length() const;
};

/// Finite partition of [0,1) into cells, each a union of half-open intervals
/// with exact 128-bit endpoints. Cells are numbered 1..k.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::vector<Interval>> cells);

  /// Each spec is "l:[a,b)+[c,d)..." with l the 1-based cell index.
  static Partition parse(const std::vector<std::string>& cell_specs);
  /// A1 = [0,b), A2 = [b,1).
  static Partition split_at(UnitPoint b);

  unsigned size() const { return static_cast<unsigned>(cells_.size()); }
  bool empty() const { return cells_.empty(); }
  const std::vector<Interval>& cell(unsigned l) const { return cells_.at(l - 1); }

  /// 1-based cell containing the point with 128-bit truncation x.
  unsigned cell_of(u128 x) const;
  double measure(unsigned l) const;
  std::vector<std::string> to_specs() const;

 private:
  struct Boundary {
    u128 lo;
    unsigned cell;
  };
  std::vector<std::vector<Interval>> cells_;
  std::vector<Boundary> sorted_;
};

struct DoublingSystem {};
struct RotationSystem {
  u128 alpha = kGoldenFrac;
};
struct BernoulliSystem {
  std::vector<double> probabilities;
};
struct ExplicitSystem {
  std::vector<std::uint8_t> symbols;
  unsigned k = 1;
  std::string origin;
};

/// The measure-preserving system driving the random product.
struct ErgodicSystem {
  std::variant<DoublingSystem, RotationSystem, BernoulliSystem, ExplicitSystem> kind;

  static ErgodicSystem doubling() { return {DoublingSystem{}}; }
  static ErgodicSystem rotation(u128 alpha);
  static ErgodicSystem bernoulli(std::vector<double> probabilities);
  static ErgodicSystem explicit_symbols(std::vector<std::uint8_t> symbols, unsigned k, std::string origin = {});

  /// "doubling" | "rotation:<alpha>" | "bernoulli:<p1,..,pk>" | "explicit:<path>".
  static ErgodicSystem parse(std::string_view text);
  std::string to_string() const;

  /// Doubling and rotation need an interval partition; the others carry
  /// their cells implicitly in the symbols.
  bool needs_partition() const;
  /// Number of cells for implicit partitions (0 otherwise).
  unsigned implicit_cells() const;
};

struct DoublingPoint {
  BitStream bits;
};
struct RotationPoint {
  u128 x = 0;
};
struct BernoulliPoint {
  SplitMix64 rng;
};
struct ExplicitPoint {};

using Point = std::variant<DoublingPoint, RotationPoint, BernoulliPoint, ExplicitPoint>;

/// Orbit trace s_i = cell of tau^i(omega), symbols in 1..k.
struct SymbolStream {
  std::vector<std::uint8_t> symbols;
  unsigned k = 1;
  std::string source;

  std::size_t size() const { return symbols.size(); }
};

/// Draws omega ~ mu. Deterministic given the generator state.
Point sample_point(const ErgodicSystem& system, SplitMix64& rng);

SymbolStream symbol_stream(const ErgodicSystem& system, const Partition& partition, Point& point, std::uint64_t n);

/// a_l(n) = #{i < n : s_i = l}, returned for l = 1..k at index l-1.
std::vector<std::uint64_t> cell_counts(const SymbolStream& s, std::uint64_t n);

/// mu(A_l) for l = 1..k: interval lengths, Bernoulli probabilities, or
/// empirical frequencies for explicit streams.
std::vector<double> cell_measures(const ErgodicSystem& system, const Partition& partition);

/// Byte-per-symbol file: 4-byte magic "RSYM", u32 k, u64 N (little-endian), N bytes.
void write_symbol_file(const std::string& path, const SymbolStream& s);
SymbolStream read_symbol_file(const std::string& path);

}  // namespace randshift

namespace randshift {

/// Symbols of Monte Carlo sample `sample_index`: omega is drawn from the
/// stream sample_stream(master_seed, sample_index).
SymbolStream sample_symbols(const ErgodicSystem& system, const Partition& partition, std::uint64_t master_seed,
                            std::uint64_t sample_index, std::uint64_t n);

}  // namespace randshift
