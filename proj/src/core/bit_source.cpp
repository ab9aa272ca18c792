#include "bit_source.hpp"

#include <cmath>

namespace bmdim {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view purpose, std::uint64_t index) {
  // FNV-1a over the purpose tag, then mixed with root and index.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(mix64(root ^ h) + mix64(index + 0x632be59bd9b4e019ULL));
}

bool BitSource::next_bit() {
  if (buffered_ == 0) {
    buffer_ = engine_();
    buffered_ = 64;
  }
  const bool bit = buffer_ & 1U;
  buffer_ >>= 1;
  --buffered_;
  return bit;
}

double BitSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t BitSource::below(std::uint64_t bound) {
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return x % bound;
}

double BitSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

}  // namespace bmdim
