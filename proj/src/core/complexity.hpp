#pragma once

#include "bit_source.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bmdim {

/// Bits are stored one per byte, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

Bits bits_from_string(std::string_view text);
std::string bits_to_string(const Bits& bits);

struct RateEstimate {
  std::size_t length = 0;
  std::size_t phrases = 0;
  double bits = 0.0;
  double rate = 0.0;
};

/// Codelength of c phrases: c * (bit_width(c) + 1), i.e. ceil(log2(c+1)) + 1 bits per phrase.
double phrase_codelength(std::size_t phrases);

/// Exhaustive-history (LZ76) parsing: each phrase is the shortest extension
/// that does not occur starting strictly earlier.
std::size_t lz76_phrases(const Bits& bits);
/// Incremental (LZ78) parsing into distinct phrases; a trailing incomplete
/// phrase counts once.
std::size_t lz78_phrases(const Bits& bits);

/// The complexity proxy used throughout: LZ76 phrase count and the codelength above.
RateEstimate lz_estimate(const Bits& bits);
RateEstimate lz78_estimate(const Bits& bits);

/// Z = {n : n mod q < p}, 1 <= p <= q.
class ResidueMask {
 public:
  ResidueMask(std::uint64_t p, std::uint64_t q);

  std::uint64_t p() const { return p_; }
  std::uint64_t q() const { return q_; }
  bool contains(std::uint64_t n) const { return n % q_ < p_; }
  double density() const { return static_cast<double>(p_) / static_cast<double>(q_); }
  /// 0-indexed position of the m-th element (m >= 1).
  std::uint64_t element(std::uint64_t m) const { return q_ * ((m - 1) / p_) + (m - 1) % p_; }
  /// Number of elements below n.
  std::uint64_t count_below(std::uint64_t n) const { return p_ * (n / q_) + std::min(n % q_, p_); }

 private:
  std::uint64_t p_;
  std::uint64_t q_;
};

/// out(n) = b(j) when n is the j-th element of Z, else a(i) when n is the
/// i-th element of the complement. `in_z` gives Z explicitly when non-empty.
Bits masked_join(const Bits& a, const Bits& b, const std::vector<bool>& in_z, std::size_t length);
Bits masked_join(const Bits& a, const Bits& b, const ResidueMask& mask, std::size_t length);

/// Prefix of a path through T_Z: source bits on Z, zeros elsewhere.
Bits tz_sequence(const ResidueMask& mask, BitSource& source, std::size_t n);
/// True when every position outside Z carries 0.
bool in_tz(const ResidueMask& mask, const Bits& bits);

/// Median coin-flip rate at length n over `seeds` seeded sources; memoized per (n, seeds).
double coin_rate(std::size_t n, std::size_t seeds = 5);

struct DimensionProxyOptions {
  std::size_t min_length = 4096;
  std::size_t baseline_seeds = 5;
};

enum class DimensionVerdict { BelowAlpha, NotBelow };

struct DimensionProxyResult {
  DimensionVerdict verdict = DimensionVerdict::NotBelow;
  double rate = 0.0;
  double baseline = 0.0;
  double normalized = 0.0;
};

/// BelowAlpha iff rate < alpha * coin_rate(n). Shorter input than
/// min_length is a calibration error (Error(Range)).
DimensionProxyResult dimension_proxy(const Bits& bits, double alpha, const DimensionProxyOptions& options = {});

}  // namespace bmdim
