#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace bmdim {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Exact value numerator / 2^exponent. Stored in lowest terms (odd numerator,
/// or numerator 0 with exponent 0), so structural equality is value equality.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(std::int64_t integer) : num_(integer) {}  // NOLINT(implicit)
  Dyadic(BigInt numerator, std::uint64_t exponent);

  static Dyadic pow2(std::int64_t power);  // 2^power, power may be negative
  /// floor(x * 2^exponent) / 2^exponent for a finite double.
  static Dyadic floor_of(double x, std::uint64_t exponent);
  static Dyadic ceil_of(double x, std::uint64_t exponent);

  const BigInt& numerator() const { return num_; }
  std::uint64_t exponent() const { return exp_; }

  /// Numerator rescaled to the (larger or equal) exponent e.
  BigInt numerator_at(std::uint64_t e) const;

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_.sign(); }
  double to_double() const;
  Rational to_rational() const;
  /// "k/2^e" (or "k" when e == 0).
  std::string to_string() const;

  Dyadic operator-() const;
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic half() const { return Dyadic(num_, exp_ + 1); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.exp_ == b.exp_ && a.num_ == b.num_; }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();

  BigInt num_{0};
  std::uint64_t exp_{0};
};

inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

/// Exact comparison of a dyadic against a rational.
std::strong_ordering compare(const Dyadic& d, const Rational& q);

/// Parses "p/q", "k/2^e", integers and finite decimal literals ("0.25"), all
/// exactly. Throws Error(Config) on anything else.
Rational parse_rational(std::string_view text);
/// Like parse_rational but the value must be dyadic.
Dyadic parse_dyadic(std::string_view text);
/// Returns the value as a Dyadic when its denominator is a power of two.
bool to_dyadic(const Rational& q, Dyadic& out);
std::string rational_to_string(const Rational& q);
double to_double(const Rational& q);

}  // namespace bmdim
