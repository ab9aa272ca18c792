#include "walk.hpp"

#include "errors.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace bmdim {

namespace mp = boost::multiprecision;

double WalkValue::to_double() const { return bmdim::to_double(coeff) / std::sqrt(static_cast<double>(n)); }

WalkPath::WalkPath(std::size_t n, std::vector<std::uint64_t> words) : n_(n), words_(std::move(words)) {
  if (n_ % 64 != 0) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  ones_before_word_.resize(words_.size() + 1);
  for (std::size_t w = 0; w < words_.size(); ++w)
    ones_before_word_[w + 1] = ones_before_word_[w] + std::popcount(words_[w]);
}

WalkPath WalkPath::decode(std::size_t n, std::string_view bits) {
  require(n >= 1, ErrorKind::Structural, "decode: n must be >= 1");
  require(bits.size() == n, ErrorKind::Structural,
          "decode: expected " + std::to_string(n) + " bits, got " + std::to_string(bits.size()));
  std::vector<std::uint64_t> words((n + 63) / 64, 0);
  for (std::size_t i = 0; i < n; ++i) {
    require(bits[i] == '0' || bits[i] == '1', ErrorKind::Structural, "decode: bits must be 0/1");
    if (bits[i] == '1') words[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return WalkPath(n, std::move(words));
}

WalkPath WalkPath::generate(BitSource& source, std::size_t n) {
  require(n >= 1, ErrorKind::Structural, "generate: n must be >= 1");
  std::vector<std::uint64_t> words((n + 63) / 64);
  for (auto& w : words) w = source.next_word();
  return WalkPath(n, std::move(words));
}

std::int64_t WalkPath::partial_sum(std::size_t i) const {
  require(i <= n_, ErrorKind::Range, "partial_sum: index beyond n");
  const std::size_t w = i / 64;
  std::int64_t ones = ones_before_word_[w];
  if (i % 64 != 0) ones += std::popcount(words_[w] & ((std::uint64_t{1} << (i % 64)) - 1));
  return 2 * ones - static_cast<std::int64_t>(i);
}

double WalkPath::value_at_step(std::size_t i) const {
  return static_cast<double>(partial_sum(i)) / std::sqrt(static_cast<double>(n_));
}

std::string WalkPath::bits() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i)
    if (step(i) > 0) s[i] = '1';
  return s;
}

WalkValue WalkPath::eval(const Rational& t) const {
  require(t >= 0 && t <= 1, ErrorKind::Range, "eval: t outside [0,1]");
  const Rational pos = t * n_;
  const BigInt whole = mp::numerator(pos) / mp::denominator(pos);
  const std::size_t i = whole.convert_to<std::size_t>();
  Rational coeff(partial_sum(i));
  if (i < n_) coeff += (pos - Rational(whole)) * step(i);
  return WalkValue{coeff, n_};
}

std::vector<std::size_t> WalkPath::zero_cells(std::size_t first, std::size_t last) const {
  require(first <= last && last <= n_, ErrorKind::Range, "zero_cells: bad cell range");
  std::vector<std::size_t> out;
  if (first == last) return out;
  std::int64_t s = partial_sum(first);
  for (std::size_t i = first; i < last; ++i) {
    const std::int64_t next = s + step(i);
    if (s == 0 || next == 0) out.push_back(i);
    s = next;
  }
  return out;
}

std::vector<std::size_t> WalkPath::zero_intervals() const { return zero_cells(0, n_); }

std::string WalkPath::serialize() const { return std::to_string(n_) + " " + bits() + "\n"; }

WalkPath WalkPath::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t n = 0;
  std::string bits;
  if (!(in >> n >> bits)) fail(ErrorKind::Structural, "walk text must be '<n> <bits>'");
  std::string extra;
  if (in >> extra) fail(ErrorKind::Structural, "trailing data after walk text");
  return decode(n, bits);
}

WalkPath WalkPath::reversed() const {
  std::vector<std::uint64_t> words((n_ + 63) / 64, 0);
  for (std::size_t i = 0; i < n_; ++i)
    if (step(n_ - 1 - i) < 0) words[i / 64] |= std::uint64_t{1} << (i % 64);
  // x'(s) = x(1-s) - x(1) has increments equal to the negated reversed code.
  return WalkPath(n_, std::move(words));
}

CoarseCode coarse_code(const WalkPath& path, unsigned level) {
  const std::size_t n = path.n();
  require(std::has_single_bit(n), ErrorKind::Structural, "coarse_code: n must be a power of two");
  const unsigned k_max = static_cast<unsigned>(std::countr_zero(n));
  require(level <= k_max, ErrorKind::Range,
          "coarse_code: level " + std::to_string(level) + " exceeds K = " + std::to_string(k_max));
  const std::size_t blocks = std::size_t{1} << level;
  const std::size_t width = n / blocks;
  CoarseCode out;
  out.bits.assign(blocks, '0');
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::int64_t inc = path.partial_sum((b + 1) * width) - path.partial_sum(b * width);
    if (inc >= 0) out.bits[b] = '1';
    if (inc == 0) ++out.ties;
  }
  return out;
}

HalvedWalk scale_half(const WalkPath& path) {
  const std::size_t n = path.n();
  require(n % 2 == 0, ErrorKind::Structural, "scale_half: n must be even");
  std::string bits(n / 2, '0');
  std::size_t ties = 0;
  for (std::size_t j = 0; j < n / 2; ++j) {
    const int inc = path.step(2 * j) + path.step(2 * j + 1);
    if (inc >= 0) bits[j] = '1';
    if (inc == 0) ++ties;
  }
  return HalvedWalk{WalkPath::decode(n / 2, bits), ties};
}

}  // namespace bmdim
