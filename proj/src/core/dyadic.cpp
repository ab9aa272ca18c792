#include "dyadic.hpp"

#include "errors.hpp"

#include <cmath>
#include <limits>

namespace bmdim {

namespace mp = boost::multiprecision;

Dyadic::Dyadic(BigInt numerator, std::uint64_t exponent) : num_(std::move(numerator)), exp_(exponent) {
  normalize();
}

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  if (exp_ == 0) return;
  // scan1 sees the same lowest set bit for x and -x, so no abs copy is needed.
  const std::uint64_t twos = mpz_scan1(num_.backend().data(), 0);
  const std::uint64_t shift = twos < exp_ ? twos : exp_;
  if (shift > 0) {
    num_ >>= shift;
    exp_ -= shift;
  }
}

Dyadic Dyadic::pow2(std::int64_t power) {
  if (power >= 0) return Dyadic(BigInt(1) << power, 0);
  return Dyadic(BigInt(1), static_cast<std::uint64_t>(-power));
}

Dyadic Dyadic::floor_of(double x, std::uint64_t exponent) {
  require(std::isfinite(x), ErrorKind::Range, "floor_of: non-finite value");
  const double scaled = std::floor(std::ldexp(x, static_cast<int>(exponent)));
  return Dyadic(BigInt(scaled), exponent);
}

Dyadic Dyadic::ceil_of(double x, std::uint64_t exponent) {
  require(std::isfinite(x), ErrorKind::Range, "ceil_of: non-finite value");
  const double scaled = std::ceil(std::ldexp(x, static_cast<int>(exponent)));
  return Dyadic(BigInt(scaled), exponent);
}

BigInt Dyadic::numerator_at(std::uint64_t e) const {
  if (e < exp_) fail(ErrorKind::Structural, "numerator_at: exponent below canonical exponent");
  return num_ << (e - exp_);
}

double Dyadic::to_double() const {
  if (num_ == 0) return 0.0;
  // Keep the top 64 bits so very long numerators do not overflow convert_to.
  const std::uint64_t bits = mp::msb(mp::abs(num_)) + 1;
  if (bits <= 1000) return std::ldexp(num_.convert_to<double>(), -static_cast<int>(exp_));
  const std::uint64_t drop = bits - 64;
  const BigInt top = num_ >> drop;
  return std::ldexp(top.convert_to<double>(), static_cast<int>(drop) - static_cast<int>(exp_));
}

Rational Dyadic::to_rational() const { return Rational(num_, BigInt(1) << exp_); }

std::string Dyadic::to_string() const {
  if (exp_ == 0) return num_.str();
  return num_.str() + "/2^" + std::to_string(exp_);
}

Dyadic Dyadic::operator-() const { return Dyadic(-num_, exp_); }

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.exp_ >= b.exp_) return Dyadic(a.num_ + (b.num_ << (a.exp_ - b.exp_)), a.exp_);
  return Dyadic((a.num_ << (b.exp_ - a.exp_)) + b.num_, b.exp_);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  if (a.exp_ >= b.exp_) return Dyadic(a.num_ - (b.num_ << (a.exp_ - b.exp_)), a.exp_);
  return Dyadic((a.num_ << (b.exp_ - a.exp_)) - b.num_, b.exp_);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_); }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const int sa = a.num_.sign();
  const int sb = b.num_.sign();
  if (sa != sb) return sa <=> sb;
  const int c = a.exp_ >= b.exp_ ? a.num_.compare(BigInt(b.num_ << (a.exp_ - b.exp_)))
                                  : BigInt(a.num_ << (b.exp_ - a.exp_)).compare(b.num_);
  return c <=> 0;
}

std::strong_ordering compare(const Dyadic& d, const Rational& q) {
  // d.num / 2^e  vs  n / m  (m > 0)  <=>  d.num * m  vs  n * 2^e
  const BigInt lhs = d.numerator() * mp::denominator(q);
  const BigInt rhs = mp::numerator(q) << d.exponent();
  return lhs.compare(rhs) <=> 0;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) fail(ErrorKind::Config, "not a rational number: '" + std::string(whole) + "'");
  BigInt v{std::string(s)};
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) fail(ErrorKind::Config, "empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(text.substr(0, slash), text);
    std::string_view den = text.substr(slash + 1);
    BigInt d;
    if (den.size() > 2 && den.substr(0, 2) == "2^") {
      const std::string_view e = den.substr(2);
      if (!all_digits(e) || e.size() > 7) fail(ErrorKind::Config, "bad dyadic exponent in '" + std::string(text) + "'");
      d = BigInt(1) << std::stoul(std::string(e));
    } else {
      d = parse_integer(den, text);
    }
    if (d <= 0) fail(ErrorKind::Config, "non-positive denominator in '" + std::string(text) + "'");
    return Rational(num, d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = text.substr(dot + 1);
    bool neg = false;
    if (!ip.empty() && (ip.front() == '-' || ip.front() == '+')) {
      neg = ip.front() == '-';
      ip.remove_prefix(1);
    }
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      fail(ErrorKind::Config, "not a rational number: '" + std::string(text) + "'");
    const BigInt scale = mp::pow(BigInt(10), static_cast<unsigned>(fp.size()));
    BigInt num = (ip.empty() ? BigInt(0) : BigInt(std::string(ip))) * scale + (fp.empty() ? BigInt(0) : BigInt(std::string(fp)));
    if (neg) num = -num;
    return Rational(num, scale);
  }
  return Rational(parse_integer(text, text));
}

bool to_dyadic(const Rational& q, Dyadic& out) {
  const BigInt& den = mp::denominator(q);
  const std::uint64_t low = mp::lsb(den);
  if ((den >> low) != 1) return false;
  out = Dyadic(mp::numerator(q), low);
  return true;
}

Dyadic parse_dyadic(std::string_view text) {
  Dyadic d;
  if (!to_dyadic(parse_rational(text), d)) fail(ErrorKind::Config, "not a dyadic rational: '" + std::string(text) + "'");
  return d;
}

std::string rational_to_string(const Rational& q) {
  if (mp::denominator(q) == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace bmdim
