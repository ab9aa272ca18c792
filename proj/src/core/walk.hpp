#pragma once

#include "bit_source.hpp"
#include "dyadic.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bmdim {

/// Exact value coeff / sqrt(n) of a walk in C_n.
struct WalkValue {
  Rational coeff;
  std::uint64_t n = 1;

  double to_double() const;
  friend bool operator==(const WalkValue&, const WalkValue&) = default;
};

/// A member of C_n: vanishes at 0 and has slope +-sqrt(n) on every
/// [(i-1)/n, i/n]. Stored as its code, packed LSB-first (bit 1 = +1).
class WalkPath {
 public:
  /// Code from a 0/1 string; n = bits.size() >= 1.
  static WalkPath decode(std::size_t n, std::string_view bits);
  /// n steps drawn from the source, 64 per word, LSB first.
  static WalkPath generate(BitSource& source, std::size_t n);

  std::size_t n() const { return n_; }
  /// Code symbol of step i (0-based), +1 or -1.
  int step(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U ? 1 : -1; }
  /// S_i = sum of the first i code symbols; value at i/n is S_i / sqrt(n).
  std::int64_t partial_sum(std::size_t i) const;
  double value_at_step(std::size_t i) const;
  std::string bits() const;

  /// Exact piecewise-linear interpolation; t must lie in [0,1].
  WalkValue eval(const Rational& t) const;

  /// Indices i of the cells [i/n, (i+1)/n] whose closed image contains 0.
  std::vector<std::size_t> zero_intervals() const;
  /// Same, restricted to cells with first <= i < last.
  std::vector<std::size_t> zero_cells(std::size_t first, std::size_t last) const;

  /// Text form "<n> <bits>".
  std::string serialize() const;
  static WalkPath parse(std::string_view text);

  /// Time reversal: x'(s) = x(1-s) - x(1).
  WalkPath reversed() const;

 private:
  WalkPath(std::size_t n, std::vector<std::uint64_t> words);

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
  std::vector<std::int64_t> ones_before_word_;
};

struct CoarseCode {
  std::string bits;
  std::size_t ties = 0;  // zero increments, encoded as 1
};

/// Signs of the increments over the 2^level blocks of a path with n = 2^K.
CoarseCode coarse_code(const WalkPath& path, unsigned level);

struct HalvedWalk {
  WalkPath path;
  std::size_t ties = 0;
};

/// Re-encodes consecutive step pairs as single steps of C_{n/2}; cancelling
/// pairs are ties and encode as +1.
HalvedWalk scale_half(const WalkPath& path);

}  // namespace bmdim
