#include "fractal_energy.hpp"

#include "errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace bmdim {

Dyadic MassTree::cylinder_mass(const Bits& sigma) const {
  require(sigma.size() <= cap_, ErrorKind::Range, "cylinder_mass: string longer than the depth cap");
  if (!in_tz(mask_, sigma)) return Dyadic(0);
  return Dyadic::pow2(-static_cast<std::int64_t>(mask_.count_below(sigma.size())));
}

Bits MassTree::sample(BitSource& source, std::size_t n) const { return n == 0 ? Bits{} : tz_sequence(mask_, source, n); }

std::optional<std::size_t> ultrametric_exponent(const Bits& x, const Bits& y) {
  require(x.size() == y.size(), ErrorKind::Range, "ultrametric: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return i;
  return std::nullopt;
}

namespace {

bool diverges(const ResidueMask& mask, const Rational& alpha) {
  // Block ratio 2^(alpha q - p) >= 1.
  return alpha * Rational(static_cast<long>(mask.q())) >= Rational(static_cast<long>(mask.p()));
}

double term(const ResidueMask& mask, double alpha, std::uint64_t m) {
  return std::exp2(-static_cast<double>(m) + alpha * static_cast<double>(mask.element(m)));
}

// Sum over m > M of 2^-m 2^(alpha n_m), M = b p + r.
double tail_after(const ResidueMask& mask, double alpha, std::uint64_t terms) {
  const auto p = mask.p();
  const double ratio = std::exp2(alpha * static_cast<double>(mask.q()) - static_cast<double>(p));
  double sum = 0.0;
  std::uint64_t m = terms + 1;
  for (; (m - 1) % p != 0; ++m) sum += term(mask, alpha, m);
  double block = 0.0;
  for (std::uint64_t r = 0; r < p; ++r) block += term(mask, alpha, m + r);
  return sum + block / (1.0 - ratio);
}

}  // namespace

EnergyExact energy_exact(const ResidueMask& mask, const Rational& alpha, std::size_t terms) {
  require(alpha >= 0, ErrorKind::Range, "energy: alpha must be nonnegative");
  EnergyExact e;
  if (diverges(mask, alpha)) {
    e.divergent = true;
    return e;
  }
  const double a = to_double(alpha);
  for (std::uint64_t m = 1; m <= terms; ++m) e.partial += term(mask, a, m);
  e.tail = tail_after(mask, a, terms);
  e.value = e.partial + e.tail;
  return e;
}

EnergyMc energy_mc(const ResidueMask& mask, const Rational& alpha, const EnergyMcOptions& options) {
  require(alpha >= 0, ErrorKind::Range, "energy: alpha must be nonnegative");
  if (diverges(mask, alpha))
    fail(ErrorKind::Divergent, "energy_mc: alpha " + rational_to_string(alpha) + " >= p/q, the energy is infinite");
  require(options.samples >= 2, ErrorKind::Range, "energy_mc: need at least 2 samples");
  const double a = to_double(alpha);

  std::size_t depth = options.depth;
  if (depth == 0) {
    const auto target = static_cast<std::uint64_t>(std::max(1, static_cast<int>(std::bit_width(options.samples)) - 5));
    depth = static_cast<std::size_t>(mask.element(target) + 1);
  }
  const std::uint64_t branches = mask.count_below(depth);
  require(branches >= 1, ErrorKind::Range, "energy_mc: depth holds no branch position");
  std::vector<double> level_value(branches + 1);
  for (std::uint64_t m = 1; m <= branches; ++m) level_value[m] = std::exp2(a * static_cast<double>(mask.element(m)));
  level_value[0] = std::exp2(a * static_cast<double>(depth));  // pairs that never split

  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t chunks = (options.samples + kChunk - 1) / kChunk;
  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  const auto words = static_cast<std::size_t>((branches + 63) / 64);
  auto partials = parallel_map<Partial>(chunks, options.threads, [&](std::size_t c) {
    BitSource source(options.seed, "energy-mc", c);
    const std::uint64_t count = std::min(kChunk, options.samples - c * kChunk);
    Partial part;
    for (std::uint64_t s = 0; s < count; ++s) {
      // Branch bits of x and y; the pair separates at the first differing branch.
      std::uint64_t level = 0;
      for (std::size_t w = 0; w < words && level == 0; ++w) {
        std::uint64_t diff = source.next_word() ^ source.next_word();
        const std::uint64_t valid = std::min<std::uint64_t>(64, branches - 64 * w);
        if (valid < 64) diff &= (std::uint64_t{1} << valid) - 1;
        if (diff) level = 64 * w + std::countr_zero(diff) + 1;
      }
      const double v = level_value[level];
      part.sum += v;
      part.sum_sq += v * v;
    }
    return part;
  });
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const auto n = static_cast<double>(options.samples);
  EnergyMc out;
  out.depth = depth;
  out.samples = options.samples;
  out.mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1));
  out.std_error = std::sqrt(var / n);
  out.truncation = std::max(0.0, tail_after(mask, a, branches) - std::exp2(-static_cast<double>(branches)) * level_value[0]);
  out.ci_low = out.mean - options.z * out.std_error;
  out.ci_high = out.mean + options.z * out.std_error + out.truncation;
  return out;
}

std::vector<DensityRow> density_check(const ResidueMask& mask, const Rational& alpha, std::uint64_t samples,
                                      const std::vector<std::size_t>& depths, std::uint64_t seed) {
  require(!depths.empty(), ErrorKind::Range, "density_check: no depths");
  const MassTree tree(mask);
  const std::size_t max_depth = *std::max_element(depths.begin(), depths.end()) + 1;
  const double a = to_double(alpha);
  std::vector<DensityRow> rows;
  for (auto d : depths) rows.push_back(DensityRow{d, 0.0});
  BitSource source(seed, "density");
  for (std::uint64_t s = 0; s < samples; ++s) {
    Bits x = tree.sample(source, max_depth);
    for (auto& row : rows) {
      const Bits prefix(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(row.depth + 1));
      const double ratio = tree.cylinder_mass(prefix).to_double() * std::exp2(a * static_cast<double>(row.depth));
      row.max_ratio = std::max(row.max_ratio, ratio);
    }
  }
  return rows;
}

std::optional<Rational> dimension_lower_bound(const ResidueMask& mask, const std::vector<Rational>& grid) {
  std::optional<Rational> best;
  for (const auto& a : grid) {
    require(a >= 0 && a < 1, ErrorKind::Range, "dimension_lower_bound: grid must lie in [0,1)");
    if (!diverges(mask, a) && (!best || *best < a)) best = a;
  }
  return best;
}

std::vector<Rational> alpha_grid(std::uint64_t denominator) {
  std::vector<Rational> grid;
  for (std::uint64_t k = 1; k < denominator; ++k)
    grid.emplace_back(static_cast<long>(k), static_cast<long>(denominator));
  return grid;
}

}  // namespace bmdim
