#include "complexity.hpp"
#include "errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace bmdim;

namespace {

Bits coin(std::uint64_t seed, std::size_t n) {
  BitSource s(seed, "test-coin");
  Bits b(n);
  for (auto& x : b) x = s.next_bit() ? 1 : 0;
  return b;
}

// Kaspar-Schuster scan, quadratic; reference for the automaton version.
std::size_t reference_lz76(const Bits& s) {
  const std::size_t n = s.size();
  if (n == 1) return 1;
  std::size_t i = 0, k = 1, l = 1, c = 1, kmax = 1;
  while (true) {
    if (s[i + k - 1] == s[l + k - 1]) {
      ++k;
      if (l + k > n) {
        ++c;
        break;
      }
    } else {
      kmax = std::max(k, kmax);
      ++i;
      if (i == l) {
        ++c;
        l += kmax;
        if (l + 1 > n) break;
        i = 0;
        k = 1;
        kmax = 1;
      } else {
        k = 1;
      }
    }
  }
  return c;
}

}  // namespace

TEST_CASE("lz estimate examples") {
  const auto one = lz_estimate(bits_from_string("1"));
  CHECK(one.phrases == 1);
  CHECK(one.bits == 2);
  CHECK(one.rate == 2);
  const auto zeros = lz_estimate(Bits(131072, 0));
  CHECK(zeros.phrases == 2);
  CHECK(zeros.rate < 0.1);
  CHECK_THROWS_AS(lz_estimate(Bits{}), Error);
  CHECK(lz76_phrases(bits_from_string("0001101001000101")) == 6);
}

TEST_CASE("automaton parse matches the direct scan") {
  BitSource src(77, "lz-ref");
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + src.below(300);
    const double p = trial % 3 == 0 ? 0.1 : 0.5;
    Bits b(n);
    for (auto& x : b) x = src.uniform() < p ? 1 : 0;
    CHECK(lz76_phrases(b) == reference_lz76(b));
  }
}

TEST_CASE("lz estimate is deterministic and phrase count grows with length") {
  const Bits b = coin(3, 5000);
  CHECK(lz_estimate(b).phrases == lz_estimate(b).phrases);
  std::size_t prev = 0;
  for (std::size_t n = 100; n <= 5000; n += 100) {
    const auto c = lz76_phrases(Bits(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(n)));
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("lz78 parse") {
  // 1|0|10|11|01|1 (trailing partial phrase)
  CHECK(lz78_phrases(bits_from_string("101011011")) == 6);
  CHECK(lz78_phrases(bits_from_string("1")) == 1);
}

TEST_CASE("masked join") {
  const Bits a = bits_from_string("1111");
  const Bits b = bits_from_string("0000");
  CHECK(bits_to_string(masked_join(a, b, ResidueMask(1, 2), 8)) == "01010101");
  std::vector<bool> none(4, false);
  CHECK(masked_join(a, b, none, 4) == a);
  std::vector<bool> odd{false, true, false, true};
  CHECK(bits_to_string(masked_join(bits_from_string("11"), bits_from_string("00"), odd, 4)) == "1010");
  CHECK_THROWS_AS(masked_join(a, b, ResidueMask(1, 2), 9), Error);
}

TEST_CASE("tz sequences") {
  BitSource s1(5, "tz");
  BitSource s2(5, "tz");
  const Bits t = tz_sequence(ResidueMask(2, 3), s1, 30);
  std::size_t j = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    if (i % 3 == 2) {
      CHECK(t[i] == 0);
    } else {
      CHECK(t[i] == (s2.next_bit() ? 1 : 0));
      ++j;
    }
  }
  CHECK(in_tz(ResidueMask(2, 3), t));
  CHECK_FALSE(in_tz(ResidueMask(2, 3), bits_from_string("111")));
  BitSource s3(6, "tz");
  BitSource s4(6, "tz");
  const Bits full = tz_sequence(ResidueMask(1, 1), s3, 64);
  for (auto x : full) CHECK(x == (s4.next_bit() ? 1 : 0));
  CHECK_THROWS_AS(ResidueMask(0, 3), Error);
  CHECK_THROWS_AS(ResidueMask(4, 3), Error);
}

TEST_CASE("residue mask arithmetic") {
  const ResidueMask m(2, 3);
  CHECK(m.element(1) == 0);
  CHECK(m.element(2) == 1);
  CHECK(m.element(3) == 3);
  CHECK(m.element(4) == 4);
  for (std::uint64_t n = 0; n < 40; ++n) {
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < n; ++i) count += m.contains(i);
    CHECK(m.count_below(n) == count);
  }
}

TEST_CASE("dimension proxy") {
  const std::size_t n = 1 << 17;
  BitSource s(1, "proxy");
  const auto tz = dimension_proxy(tz_sequence(ResidueMask(2, 3), s, n), 0.75);
  CHECK(tz.verdict == DimensionVerdict::BelowAlpha);
  CHECK(tz.normalized == doctest::Approx(2.0 / 3).epsilon(0.15));
  CHECK(dimension_proxy(coin(9, n), 0.75).verdict == DimensionVerdict::NotBelow);
  CHECK(dimension_proxy(Bits(n, 0), 0.1).verdict == DimensionVerdict::BelowAlpha);
  CHECK_THROWS_AS(dimension_proxy(Bits(100, 0), 0.5), Error);
  // Monotone in alpha.
  bool below = false;
  for (double alpha = 0.05; alpha < 1.2; alpha += 0.05) {
    const bool now = dimension_proxy(tz_sequence(ResidueMask(2, 3), s, 8192), alpha).verdict == DimensionVerdict::BelowAlpha;
    if (below) CHECK(now);
    below = below || now;
  }
}

TEST_CASE("masked coin rate follows density") {
  const std::size_t n = 1 << 17;
  for (auto [p, q] : {std::pair<int, int>{1, 3}, {1, 2}, {2, 3}}) {
    const ResidueMask z(p, q);
    const Bits joined = masked_join(coin(p * 10 + q, n), Bits(n, 0), z, n);
    const double normalized = lz_estimate(joined).rate / coin_rate(n);
    CHECK(std::fabs(normalized - (1 - z.density())) <= 0.1);
  }
}
