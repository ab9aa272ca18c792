#include "complexity.hpp"

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>
#include <unordered_map>

namespace bmdim {

Bits bits_from_string(std::string_view text) {
  Bits out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      out.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else if (ch != ' ' && ch != '\n' && ch != '\r' && ch != '\t') {
      fail(ErrorKind::Config, std::string("bit strings contain only 0 and 1, got '") + ch + "'");
    }
  }
  return out;
}

std::string bits_to_string(const Bits& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) s[i] = '1';
  return s;
}

double phrase_codelength(std::size_t phrases) {
  return static_cast<double>(phrases) * static_cast<double>(std::bit_width(phrases) + 1);
}

namespace {

// Suffix automaton over {0,1}; firstpos is the end index of the first occurrence.
struct SuffixAutomaton {
  struct State {
    std::array<std::int32_t, 2> next{-1, -1};
    std::int32_t link = -1;
    std::int32_t len = 0;
    std::int32_t firstpos = -1;
  };
  std::vector<State> st;

  explicit SuffixAutomaton(const Bits& s) {
    st.reserve(2 * s.size() + 2);
    st.emplace_back();
    std::int32_t last = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const int c = s[i];
      const auto cur = static_cast<std::int32_t>(st.size());
      st.push_back(State{{-1, -1}, -1, st[last].len + 1, static_cast<std::int32_t>(i)});
      std::int32_t p = last;
      while (p != -1 && st[p].next[c] == -1) {
        st[p].next[c] = cur;
        p = st[p].link;
      }
      if (p == -1) {
        st[cur].link = 0;
      } else {
        const std::int32_t q = st[p].next[c];
        if (st[p].len + 1 == st[q].len) {
          st[cur].link = q;
        } else {
          const auto clone = static_cast<std::int32_t>(st.size());
          State cl = st[q];
          cl.len = st[p].len + 1;
          st.push_back(cl);
          while (p != -1 && st[p].next[c] == q) {
            st[p].next[c] = clone;
            p = st[p].link;
          }
          st[q].link = clone;
          st[cur].link = clone;
        }
      }
      last = cur;
    }
  }
};

}  // namespace

std::size_t lz76_phrases(const Bits& bits) {
  const std::size_t n = bits.size();
  if (n == 0) return 0;
  const SuffixAutomaton sam(bits);
  std::size_t phrases = 0;
  std::size_t l = 0;
  while (l < n) {
    std::int32_t state = 0;
    std::size_t k = 0;
    // Extend while s[l..l+k] also starts before l.
    while (l + k < n) {
      state = sam.st[state].next[bits[l + k]];
      const auto first_start = static_cast<std::int64_t>(sam.st[state].firstpos) - static_cast<std::int64_t>(k);
      ++k;
      if (first_start >= static_cast<std::int64_t>(l)) break;
    }
    ++phrases;
    l += k;
  }
  return phrases;
}

std::size_t lz78_phrases(const Bits& bits) {
  std::vector<std::array<std::int32_t, 2>> trie(1, {-1, -1});
  std::size_t phrases = 0;
  std::int32_t node = 0;
  for (std::uint8_t b : bits) {
    const std::int32_t child = trie[node][b];
    if (child >= 0) {
      node = child;
      continue;
    }
    trie[node][b] = static_cast<std::int32_t>(trie.size());
    trie.push_back({-1, -1});
    ++phrases;
    node = 0;
  }
  if (node != 0) ++phrases;
  return phrases;
}

namespace {

RateEstimate make_estimate(std::size_t n, std::size_t phrases) {
  RateEstimate r;
  r.length = n;
  r.phrases = phrases;
  r.bits = phrase_codelength(phrases);
  r.rate = n == 0 ? 0.0 : r.bits / static_cast<double>(n);
  return r;
}

}  // namespace

RateEstimate lz_estimate(const Bits& bits) {
  require(!bits.empty(), ErrorKind::Range, "lz_estimate: empty input");
  return make_estimate(bits.size(), lz76_phrases(bits));
}

RateEstimate lz78_estimate(const Bits& bits) {
  require(!bits.empty(), ErrorKind::Range, "lz78_estimate: empty input");
  return make_estimate(bits.size(), lz78_phrases(bits));
}

ResidueMask::ResidueMask(std::uint64_t p, std::uint64_t q) : p_(p), q_(q) {
  require(p >= 1, ErrorKind::Structural, "residue mask needs p >= 1 (p = 0 leaves a single path)");
  require(p <= q, ErrorKind::Structural, "residue mask needs p <= q");
}

Bits masked_join(const Bits& a, const Bits& b, const std::vector<bool>& in_z, std::size_t length) {
  require(in_z.size() >= length, ErrorKind::Range, "masked_join: membership vector shorter than output");
  Bits out(length);
  std::size_t i = 0;
  std::size_t j = 0;
  for (std::size_t n = 0; n < length; ++n) {
    if (in_z[n]) {
      require(j < b.size(), ErrorKind::Range, "masked_join: second source exhausted");
      out[n] = b[j++];
    } else {
      require(i < a.size(), ErrorKind::Range, "masked_join: first source exhausted");
      out[n] = a[i++];
    }
  }
  return out;
}

Bits masked_join(const Bits& a, const Bits& b, const ResidueMask& mask, std::size_t length) {
  std::vector<bool> in_z(length);
  for (std::size_t n = 0; n < length; ++n) in_z[n] = mask.contains(n);
  return masked_join(a, b, in_z, length);
}

Bits tz_sequence(const ResidueMask& mask, BitSource& source, std::size_t n) {
  require(n >= 1, ErrorKind::Range, "tz_sequence: n must be positive");
  Bits out(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (mask.contains(i)) out[i] = source.next_bit() ? 1 : 0;
  return out;
}

bool in_tz(const ResidueMask& mask, const Bits& bits) {
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] && !mask.contains(i)) return false;
  return true;
}

double coin_rate(std::size_t n, std::size_t seeds) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({n, seeds}); it != cache.end()) return it->second;
  }
  std::vector<double> rates;
  for (std::size_t s = 0; s < seeds; ++s) {
    BitSource source(0, "coin-baseline", s);
    Bits b(n);
    for (auto& x : b) x = source.next_bit() ? 1 : 0;
    rates.push_back(lz_estimate(b).rate);
  }
  std::sort(rates.begin(), rates.end());
  const double median = seeds % 2 ? rates[seeds / 2] : 0.5 * (rates[seeds / 2 - 1] + rates[seeds / 2]);
  std::lock_guard lock(mutex);
  cache[{n, seeds}] = median;
  return median;
}

DimensionProxyResult dimension_proxy(const Bits& bits, double alpha, const DimensionProxyOptions& options) {
  require(bits.size() >= options.min_length, ErrorKind::Range,
          "dimension_proxy: " + std::to_string(bits.size()) + " bits is below the calibrated minimum " +
              std::to_string(options.min_length));
  DimensionProxyResult r;
  r.rate = lz_estimate(bits).rate;
  r.baseline = coin_rate(bits.size(), options.baseline_seeds);
  r.normalized = r.rate / r.baseline;
  r.verdict = r.rate < alpha * r.baseline ? DimensionVerdict::BelowAlpha : DimensionVerdict::NotBelow;
  return r;
}

}  // namespace bmdim
