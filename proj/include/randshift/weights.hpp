#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace randshift {

struct SpaceKind;

/// How a tabulated weight family continues past the end of its table.
enum class TailRule {
  RepeatLast,  // log|w_n| = last table entry for n > size
  Periodic,    // the table repeats
};

/// A weight family w = (w_n)_{n>=1} with nonzero entries. Only |w_n| is
/// modelled; every quantity is exposed in natural-log space.
class WeightSequence {
 public:
  enum class Kind { Constant, Scaled, HarmonicUp, HarmonicDown, Poly, InvPoly, Tabulated };

  static WeightSequence constant(double c);
  static WeightSequence scaled(double c, const WeightSequence& base);
  static WeightSequence harmonic_up();    // 1 + 1/(n+1)
  static WeightSequence harmonic_down();  // 1 - 1/(n+1)
  static WeightSequence poly();           // n
  static WeightSequence inv_poly();       // 1/n
  static WeightSequence tabulated(std::vector<double> log_magnitudes, TailRule tail);

  /// Config syntax: "const:<c>", "harmonic-up", "harmonic-down", "poly",
  /// "inv-poly", "scale:<c>:<kind>", "table:<path>".
  static WeightSequence parse(std::string_view spec);
  /// Reads a table file: optional "# tail: last|periodic" header, then one
  /// log-magnitude per line.
  static WeightSequence load_table(const std::string& path);

  Kind kind() const { return kind_; }
  /// |c| for Constant and Scaled; unused otherwise.
  double factor() const { return factor_; }
  const WeightSequence* base() const { return base_.get(); }

  /// log|w_n|, n >= 1.
  double log_weight(std::uint64_t n) const;

  /// sum_{l=1}^n log|w_l|, using closed forms where the kind admits one.
  long double prefix_log_sum(std::uint64_t n) const;

  /// sup_n log|w_n|; +inf when the family is unbounded.
  double sup_log() const;

  /// Whether sup_n |w_n| is finite.
  bool bounded() const;
  /// Whether sup_n |w_n|^{1/n} is finite.
  bool root_bounded() const;

  std::string to_string() const;

 private:
  struct Table {
    std::vector<double> logs;
    std::vector<long double> prefix;  // prefix[i] = sum of logs[0..i)
    TailRule tail;
    std::string origin;
  };

  WeightSequence(Kind kind, double factor) : kind_(kind), factor_(factor) {}

  Kind kind_;
  double factor_ = 1.0;
  std::shared_ptr<const WeightSequence> base_;
  std::shared_ptr<const Table> table_;
};

/// Whether B_w is a continuous operator on the given space.
bool continuity_on(const SpaceKind& space, const WeightSequence& w);

}  // namespace randshift
