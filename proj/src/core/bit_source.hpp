#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bmdim {

/// splitmix64 finalizer; used for seed derivation only.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent seed for (purpose, index) from a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose, std::uint64_t index = 0);

/// Deterministic bit/number stream over std::mt19937_64 (fully specified by
/// the standard, so streams are identical on every platform). Distributions
/// are implemented here rather than with <random>'s, whose output is
/// implementation-defined.
class BitSource {
 public:
  explicit BitSource(std::uint64_t seed) : engine_(seed), seed_(seed) {}
  BitSource(std::uint64_t root, std::string_view purpose, std::uint64_t index = 0)
      : BitSource(derive_seed(root, purpose, index)) {}

  std::uint64_t seed() const { return seed_; }

  /// 64 fresh bits; bit j (LSB first) is the j-th bit of the stream's word.
  std::uint64_t next_word() { return engine_(); }
  bool next_bit();
  /// Uniform on [0,1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via the Marsaglia polar method.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t buffer_ = 0;
  int buffered_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bmdim
