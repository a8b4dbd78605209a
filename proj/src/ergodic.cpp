#include "randshift/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "randshift/error.hpp"

namespace randshift {

// ---------------------------------------------------------------- BitStream

void BitStream::ensure(std::uint64_t nbits) {
  if (nbits > max_bits_) {
    fail(ErrorKind::HorizonTooLarge,
         "doubling-map bit budget exceeded (" + std::to_string(nbits) + " > " + std::to_string(max_bits_) + " bits)");
  }
  const std::uint64_t need = (nbits + 63) / 64;
  while (words_.size() < need) words_.push_back(source_.next());
}

u128 BitStream::window(std::uint64_t i) {
  ensure(i + 128);
  const std::uint64_t w = i >> 6;
  const unsigned shift = static_cast<unsigned>(i & 63);
  const u128 a = make_u128(words_[w], words_[w + 1]);
  if (shift == 0) return a;
  return (a << shift) | static_cast<u128>(words_[w + 2] >> (64 - shift));
}

// ---------------------------------------------------------------- Partition

double Interval::length() const {
  if (lo == 0 && last == kU128Max) return 1.0;
  return to_double(last - lo) + 0x1.0p-128;
}

Partition::Partition(std::vector<std::vector<Interval>> cells) : cells_(std::move(cells)) {
  require(!cells_.empty(), ErrorKind::InvalidInput, "partition needs at least one cell");
  std::vector<std::pair<Interval, unsigned>> all;
  for (unsigned l = 0; l < cells_.size(); ++l) {
    require(!cells_[l].empty(), ErrorKind::InvalidInput, "cell " + std::to_string(l + 1) + " is empty");
    for (const auto& iv : cells_[l]) {
      require(iv.lo <= iv.last, ErrorKind::InvalidInput, "empty interval in cell " + std::to_string(l + 1));
      all.emplace_back(iv, l + 1);
    }
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
  u128 expected = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& iv = all[i].first;
    require(iv.lo == expected, ErrorKind::InvalidInput,
            iv.lo < expected ? "partition cells overlap" : "partition cells do not cover [0,1)");
    sorted_.push_back({iv.lo, all[i].second});
    if (iv.last == kU128Max) {
      require(i + 1 == all.size(), ErrorKind::InvalidInput, "partition cells overlap");
      return;
    }
    expected = iv.last + 1;
  }
  fail(ErrorKind::InvalidInput, "partition cells do not cover [0,1)");
}

Partition Partition::parse(const std::vector<std::string>& cell_specs) {
  std::vector<std::vector<Interval>> cells(cell_specs.size());
  std::vector<bool> seen(cell_specs.size(), false);
  for (const auto& spec : cell_specs) {
    const auto colon = spec.find(':');
    require(colon != std::string::npos, ErrorKind::InvalidInput, "cell spec '" + spec + "' lacks 'l:'");
    std::size_t index = 0;
    try {
      index = std::stoul(spec.substr(0, colon));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "bad cell index in '" + spec + "'");
    }
    require(index >= 1 && index <= cell_specs.size() && !seen[index - 1], ErrorKind::InvalidInput,
            "cell indices must be 1..k, each once ('" + spec + "')");
    seen[index - 1] = true;

    std::string rest = spec.substr(colon + 1);
    std::stringstream pieces(rest);
    std::string piece;
    while (std::getline(pieces, piece, '+')) {
      piece.erase(0, piece.find_first_not_of(" \t"));
      piece.erase(piece.find_last_not_of(" \t") + 1);
      require(piece.size() >= 5 && piece.front() == '[' && piece.back() == ')', ErrorKind::InvalidInput,
              "interval '" + piece + "' must look like [a,b)");
      const auto comma = piece.find(',');
      require(comma != std::string::npos, ErrorKind::InvalidInput, "interval '" + piece + "' lacks a comma");
      const UnitPoint a = parse_unit_point(piece.substr(1, comma - 1));
      const UnitPoint b = parse_unit_point(piece.substr(comma + 1, piece.size() - comma - 2));
      require(!a.is_one, ErrorKind::InvalidInput, "interval '" + piece + "' is empty");
      require(b.is_one || b.frac > a.frac, ErrorKind::InvalidInput, "interval '" + piece + "' is empty");
      cells[index - 1].push_back({a.frac, b.is_one ? kU128Max : b.frac - 1});
    }
  }
  return Partition(std::move(cells));
}

Partition Partition::split_at(UnitPoint b) {
  require(b.is_one || b.frac != 0, ErrorKind::InvalidInput, "split point must be positive");
  if (b.is_one) return Partition({{Interval{0, kU128Max}}});
  return Partition({{Interval{0, b.frac - 1}}, {Interval{b.frac, kU128Max}}});
}

unsigned Partition::cell_of(u128 x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x,
                             [](u128 value, const Boundary& b) { return value < b.lo; });
  return std::prev(it)->cell;
}

double Partition::measure(unsigned l) const {
  double total = 0.0;
  for (const auto& iv : cell(l)) total += iv.length();
  return total;
}

std::vector<std::string> Partition::to_specs() const {
  std::vector<std::string> out;
  for (unsigned l = 1; l <= size(); ++l) {
    std::string spec = std::to_string(l) + ":";
    bool first = true;
    for (const auto& iv : cell(l)) {
      if (!first) spec += "+";
      first = false;
      spec += "[" + to_hex(iv.lo) + "," + (iv.last == kU128Max ? std::string("1") : to_hex(iv.last + 1)) + ")";
    }
    out.push_back(spec);
  }
  return out;
}

// ---------------------------------------------------------------- systems

ErgodicSystem ErgodicSystem::rotation(u128 alpha) {
  require(alpha != 0, ErrorKind::InvalidInput, "rotation parameter must be nonzero");
  // x -> x + alpha mod 2^128 has period 2^(128 - ctz(alpha)); insist on > 2^100.
  require(count_trailing_zeros(alpha) < 28, ErrorKind::InvalidInput,
          "rotation parameter is a dyadic rational with a short period; use an irrational truncation");
  return {RotationSystem{alpha}};
}

ErgodicSystem ErgodicSystem::bernoulli(std::vector<double> probabilities) {
  require(!probabilities.empty() && probabilities.size() <= 255, ErrorKind::InvalidInput,
          "bernoulli needs 1..255 probabilities");
  double total = 0.0;
  for (double p : probabilities) {
    require(p > 0.0 && std::isfinite(p), ErrorKind::InvalidInput, "bernoulli probabilities must be positive");
    total += p;
  }
  require(std::fabs(total - 1.0) <= 1e-12, ErrorKind::InvalidInput, "bernoulli probabilities must sum to 1");
  return {BernoulliSystem{std::move(probabilities)}};
}

ErgodicSystem ErgodicSystem::explicit_symbols(std::vector<std::uint8_t> symbols, unsigned k, std::string origin) {
  require(k >= 1 && k <= 255, ErrorKind::InvalidInput, "explicit stream needs 1 <= k <= 255");
  for (auto s : symbols) {
    require(s >= 1 && s <= k, ErrorKind::InvalidInput, "explicit symbol outside 1..k");
  }
  return {ExplicitSystem{std::move(symbols), k, std::move(origin)}};
}

ErgodicSystem ErgodicSystem::parse(std::string_view text) {
  if (text == "doubling") return doubling();
  if (text.starts_with("rotation:")) {
    const UnitPoint alpha = parse_unit_point(text.substr(9));
    require(!alpha.is_one, ErrorKind::InvalidInput, "rotation parameter must lie in (0,1)");
    return rotation(alpha.frac);
  }
  if (text.starts_with("bernoulli:")) {
    std::vector<double> probs;
    std::stringstream in{std::string(text.substr(10))};
    std::string item;
    while (std::getline(in, item, ',')) {
      std::size_t used = 0;
      double p = 0.0;
      try {
        p = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == item.size() && used > 0, ErrorKind::InvalidInput, "bad probability '" + item + "'");
      probs.push_back(p);
    }
    return bernoulli(std::move(probs));
  }
  if (text.starts_with("explicit:")) {
    const std::string path(text.substr(9));
    SymbolStream s = read_symbol_file(path);
    return explicit_symbols(std::move(s.symbols), s.k, path);
  }
  fail(ErrorKind::InvalidInput, "unknown system '" + std::string(text) + "'");
}

std::string ErgodicSystem::to_string() const {
  return std::visit(
      [](const auto& sys) -> std::string {
        using T = std::decay_t<decltype(sys)>;
        if constexpr (std::is_same_v<T, DoublingSystem>) {
          return "doubling";
        } else if constexpr (std::is_same_v<T, RotationSystem>) {
          return "rotation:" + to_hex(sys.alpha);
        } else if constexpr (std::is_same_v<T, BernoulliSystem>) {
          std::ostringstream out;
          out.precision(17);
          out << "bernoulli:";
          for (std::size_t i = 0; i < sys.probabilities.size(); ++i) {
            out << (i ? "," : "") << sys.probabilities[i];
          }
          return out.str();
        } else {
          return "explicit:" + (sys.origin.empty() ? std::string("<inline>") : sys.origin);
        }
      },
      kind);
}

bool ErgodicSystem::needs_partition() const {
  return std::holds_alternative<DoublingSystem>(kind) || std::holds_alternative<RotationSystem>(kind);
}

unsigned ErgodicSystem::implicit_cells() const {
  if (const auto* b = std::get_if<BernoulliSystem>(&kind)) return static_cast<unsigned>(b->probabilities.size());
  if (const auto* e = std::get_if<ExplicitSystem>(&kind)) return e->k;
  return 0;
}

// ---------------------------------------------------------------- sampling

Point sample_point(const ErgodicSystem& system, SplitMix64& rng) {
  return std::visit(
      [&rng](const auto& sys) -> Point {
        using T = std::decay_t<decltype(sys)>;
        if constexpr (std::is_same_v<T, DoublingSystem>) {
          return DoublingPoint{BitStream(rng.split())};
        } else if constexpr (std::is_same_v<T, RotationSystem>) {
          const std::uint64_t hi = rng.next();
          const std::uint64_t lo = rng.next();
          return RotationPoint{make_u128(hi, lo)};
        } else if constexpr (std::is_same_v<T, BernoulliSystem>) {
          return BernoulliPoint{rng.split()};
        } else {
          return ExplicitPoint{};
        }
      },
      system.kind);
}

SymbolStream symbol_stream(const ErgodicSystem& system, const Partition& partition, Point& point, std::uint64_t n) {
  require(n >= 1, ErrorKind::InvalidInput, "horizon must be >= 1");
  SymbolStream out;
  out.source = system.to_string();
  if (system.needs_partition()) {
    require(!partition.empty(), ErrorKind::InvalidInput, "system " + system.to_string() + " needs a partition");
    out.k = partition.size();
  } else {
    out.k = system.implicit_cells();
  }

  if (std::holds_alternative<DoublingSystem>(system.kind)) {
    auto* p = std::get_if<DoublingPoint>(&point);
    require(p != nullptr, ErrorKind::InvalidInput, "doubling map needs a bit-stream point");
    require(n <= p->bits.max_bits() && n + 128 <= p->bits.max_bits(), ErrorKind::HorizonTooLarge,
            "horizon " + std::to_string(n) + " exceeds the doubling-map bit budget");
    out.symbols.resize(n);
    u128 w = p->bits.window(0);
    p->bits.ensure(n + 128);
    for (std::uint64_t i = 0; i < n; ++i) {
      out.symbols[i] = static_cast<std::uint8_t>(partition.cell_of(w));
      w = (w << 1) | static_cast<u128>(p->bits.bit(i + 128));
    }
    return out;
  }
  if (const auto* rot = std::get_if<RotationSystem>(&system.kind)) {
    auto* p = std::get_if<RotationPoint>(&point);
    require(p != nullptr, ErrorKind::InvalidInput, "rotation needs a fixed-point point");
    out.symbols.resize(n);
    u128 x = p->x;
    for (std::uint64_t i = 0; i < n; ++i) {
      out.symbols[i] = static_cast<std::uint8_t>(partition.cell_of(x));
      x += rot->alpha;  // wraps mod 2^128, i.e. mod 1
    }
    return out;
  }
  if (const auto* bern = std::get_if<BernoulliSystem>(&system.kind)) {
    auto* p = std::get_if<BernoulliPoint>(&point);
    require(p != nullptr, ErrorKind::InvalidInput, "bernoulli system needs a bernoulli point");
    out.symbols.resize(n);
    const auto k = bern->probabilities.size();
    for (std::uint64_t i = 0; i < n; ++i) {
      const double u = p->rng.uniform();
      double acc = 0.0;
      std::size_t cell = k;
      for (std::size_t l = 0; l + 1 < k; ++l) {
        acc += bern->probabilities[l];
        if (u < acc) {
          cell = l + 1;
          break;
        }
      }
      out.symbols[i] = static_cast<std::uint8_t>(cell);
    }
    return out;
  }
  const auto& ex = std::get<ExplicitSystem>(system.kind);
  require(n <= ex.symbols.size(), ErrorKind::InvalidInput,
          "explicit stream has " + std::to_string(ex.symbols.size()) + " symbols, " + std::to_string(n) + " requested");
  out.symbols.assign(ex.symbols.begin(), ex.symbols.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

std::vector<std::uint64_t> cell_counts(const SymbolStream& s, std::uint64_t n) {
  require(n <= s.size(), ErrorKind::InvalidInput, "count horizon exceeds the symbol stream");
  std::vector<std::uint64_t> counts(s.k, 0);
  for (std::uint64_t i = 0; i < n; ++i) ++counts[s.symbols[i] - 1];
  return counts;
}

std::vector<double> cell_measures(const ErgodicSystem& system, const Partition& partition) {
  if (system.needs_partition()) {
    std::vector<double> out;
    for (unsigned l = 1; l <= partition.size(); ++l) out.push_back(partition.measure(l));
    return out;
  }
  if (const auto* b = std::get_if<BernoulliSystem>(&system.kind)) return b->probabilities;
  const auto& ex = std::get<ExplicitSystem>(system.kind);
  std::vector<double> out(ex.k, 0.0);
  for (auto s : ex.symbols) out[s - 1] += 1.0;
  for (auto& v : out) v /= static_cast<double>(std::max<std::size_t>(ex.symbols.size(), 1));
  return out;
}

// ---------------------------------------------------------------- files

namespace {

constexpr char kMagic[4] = {'R', 'S', 'Y', 'M'};

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    require(c != EOF, ErrorKind::IoError, "truncated symbol file header");
    v |= static_cast<std::uint64_t>(c & 0xff) << (8 * i);
  }
  return v;
}

}  // namespace

void write_symbol_file(const std::string& path, const SymbolStream& s) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::IoError, "cannot write '" + path + "'");
  out.write(kMagic, 4);
  put_le(out, s.k, 4);
  put_le(out, s.symbols.size(), 8);
  out.write(reinterpret_cast<const char*>(s.symbols.data()), static_cast<std::streamsize>(s.symbols.size()));
  require(out.good(), ErrorKind::IoError, "write failed for '" + path + "'");
}

SymbolStream read_symbol_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::IoError, "cannot open '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  require(in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0, ErrorKind::IoError,
          "'" + path + "' is not a symbol file");
  SymbolStream s;
  s.k = static_cast<unsigned>(get_le(in, 4));
  const std::uint64_t n = get_le(in, 8);
  s.symbols.resize(n);
  in.read(reinterpret_cast<char*>(s.symbols.data()), static_cast<std::streamsize>(n));
  require(static_cast<std::uint64_t>(in.gcount()) == n, ErrorKind::IoError, "truncated symbol file '" + path + "'");
  for (auto sym : s.symbols) {
    if (sym < 1 || sym > s.k) fail(ErrorKind::IoError, "symbol outside 1..k in '" + path + "'");
  }
  s.source = "file:" + path;
  return s;
}

}  // namespace randshift

namespace randshift {

SymbolStream sample_symbols(const ErgodicSystem& system, const Partition& partition, std::uint64_t master_seed,
                            std::uint64_t sample_index, std::uint64_t n) {
  auto rng = sample_stream(master_seed, sample_index);
  auto point = sample_point(system, rng);
  auto s = symbol_stream(system, partition, point, n);
  s.source += " seed=" + std::to_string(master_seed) + " sample=" + std::to_string(sample_index);
  return s;
}

}  // namespace randshift
