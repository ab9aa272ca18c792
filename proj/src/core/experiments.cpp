#include "experiments.hpp"

#include "errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace bmdim {

namespace {

// Position t * n as an integer step index when t lies on the walk's grid.
std::optional<std::size_t> grid_index(const Dyadic& t, std::size_t n) {
  const Dyadic pos = t * Dyadic(static_cast<std::int64_t>(n));
  if (pos.exponent() != 0) return std::nullopt;
  return pos.numerator().convert_to<std::size_t>();
}

double value_at(const WalkPath& path, const Dyadic& t) {
  if (auto i = grid_index(t, path.n())) return path.value_at_step(*i);
  return path.eval(t.to_rational()).to_double();
}

}  // namespace

double lil_statistic(const WalkPath& path, const Dyadic& t, const std::vector<Dyadic>& h_grid) {
  require(!h_grid.empty(), ErrorKind::Range, "lil_statistic: empty h grid");
  require(t.sign() >= 0 && t <= Dyadic(1), ErrorKind::Range, "lil_statistic: t outside [0,1]");
  const double base = value_at(path, t);
  double best = 0.0;
  for (const auto& h : h_grid) {
    const double ah = std::fabs(h.to_double());
    const double denom_sq = 2.0 * ah * std::log(std::log(1.0 / ah));
    if (h.is_zero() || !(denom_sq > 0.0))
      fail(ErrorKind::Range, "lil_statistic: grid value " + h.to_string() + " has no positive iterated logarithm");
    const Dyadic th = t + h;
    if (th.sign() < 0 || Dyadic(1) < th)
      fail(ErrorKind::Range, "lil_statistic: t + h = " + th.to_string() + " leaves [0,1]");
    best = std::max(best, std::fabs(value_at(path, th) - base) / std::sqrt(denom_sq));
  }
  return best;
}

std::vector<Dyadic> lil_grid(unsigned j_min, unsigned j_max) {
  require(j_min >= 2 && j_min <= j_max, ErrorKind::Range, "lil grid needs 2 <= j_min <= j_max");
  std::vector<Dyadic> grid;
  for (unsigned j = j_min; j <= j_max; ++j) {
    grid.push_back(Dyadic::pow2(-static_cast<std::int64_t>(j)));
    grid.push_back(-Dyadic::pow2(-static_cast<std::int64_t>(j)));
  }
  return grid;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  require(!sorted.empty(), ErrorKind::Range, "quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

LilReport lil_sweep(const LilOptions& o) {
  require(o.paths >= 1, ErrorKind::Range, "lil_sweep: need at least one path");
  require(o.resolution >= 1 && o.resolution <= 30, ErrorKind::Range, "lil_sweep: resolution must be in 1..30");
  require(o.j_max <= o.resolution, ErrorKind::Range, "lil_sweep: h grid finer than the resolution");
  const auto grid = lil_grid(o.j_min, o.j_max);
  const std::size_t n = std::size_t{1} << o.resolution;
  const std::size_t times = o.explicit_times.empty() ? o.times : o.explicit_times.size();
  require(times >= 1, ErrorKind::Range, "lil_sweep: need at least one time");
  const std::uint64_t pad = std::uint64_t{1} << (o.resolution - o.j_min);

  auto per_path = parallel_map<std::vector<LilSample>>(o.paths, o.threads, [&](std::size_t s) {
    BitSource steps(o.seed, "lil-path", s);
    BitSource clock(o.seed, "lil-times", s);
    const WalkPath path = WalkPath::generate(steps, n);
    std::vector<LilSample> out;
    out.reserve(times);
    for (std::size_t k = 0; k < times; ++k) {
      Dyadic t;
      if (o.explicit_times.empty()) {
        const std::uint64_t i = pad + clock.below(n - 2 * pad + 1);
        t = Dyadic(BigInt(i), o.resolution);
      } else {
        t = o.explicit_times[k];
      }
      out.push_back(LilSample{s, t, lil_statistic(path, t, grid)});
    }
    return out;
  });

  LilReport report;
  std::vector<double> values;
  for (auto& v : per_path)
    for (auto& sample : v) {
      values.push_back(sample.statistic);
      report.samples.push_back(std::move(sample));
    }
  std::sort(values.begin(), values.end());
  report.median = quantile_sorted(values, 0.5);
  report.p01 = quantile_sorted(values, 0.01);
  report.p99 = quantile_sorted(values, 0.99);
  report.min = values.front();
  report.max = values.back();
  return report;
}

Interval95 wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  require(trials > 0 && hits <= trials, ErrorKind::Range, "wilson_interval: bad counts");
  const auto n = static_cast<double>(trials);
  const double phat = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  const double low = hits == 0 ? 0.0 : std::max(0.0, centre - half);
  const double high = hits == trials ? 1.0 : std::min(1.0, centre + half);
  return Interval95{phat, low, high};
}

namespace {

struct PathHits {
  std::vector<std::uint8_t> hit;       // per scale
  std::vector<ZeroWitness> witnesses;  // first qualifying zero per hit scale
  bool origin = false;
};

}  // namespace

ZeroHitReport zero_hit_experiment(const ZeroHitOptions& o) {
  const ResidueMask mask(o.p, o.q);
  const unsigned K = o.resolution;
  require(K <= 40, ErrorKind::Range, "zerohit: resolution must be at most 40");
  require(o.n_min >= 1 && o.n_min <= o.n_max, ErrorKind::Range, "zerohit: need 1 <= n_min <= n_max");
  require(o.n_max + 2 <= K, ErrorKind::Range, "zerohit: resolution must be finer than the smallest scale");
  require(o.paths >= 1, ErrorKind::Range, "zerohit: need at least one path");

  // forbidden[j]: digits at positions m >= j with (m - j) outside Z, as bits of the K-digit index.
  std::vector<std::uint64_t> forbidden(K + 1, 0);
  for (unsigned j = 0; j <= K; ++j)
    for (unsigned m = j; m < K; ++m)
      if (!mask.contains(m - j)) forbidden[j] |= std::uint64_t{1} << (K - 1 - m);
  auto qualifying_shift = [&](std::uint64_t i) -> std::optional<unsigned> {
    const unsigned lead = i == 0 ? K : K - static_cast<unsigned>(std::bit_width(i));
    for (unsigned j = 0; j <= lead; ++j)
      if ((i & forbidden[j]) == 0) return j;
    return std::nullopt;
  };

  const std::size_t scales = o.n_max - o.n_min + 1;
  const std::uint64_t first = std::uint64_t{1} << (K - o.n_max - 1);
  const std::uint64_t last = std::uint64_t{1} << (K - o.n_min);
  const double baseline = coin_rate(K, o.baseline_seeds);

  auto results = parallel_map<PathHits>(o.paths, o.threads, [&](std::size_t s) {
    BitSource source(o.seed, "zerohit-path", s);
    // Steps beyond time 2^-n_min never influence the scanned window.
    const WalkPath path = WalkPath::generate(source, static_cast<std::size_t>(last));
    PathHits r;
    r.hit.assign(scales, 0);
    r.origin = qualifying_shift(0).has_value();
    std::int64_t sum = path.partial_sum(static_cast<std::size_t>(first));
    for (std::uint64_t i = first; i <= last; ++i) {
      if (i > first) sum += path.step(static_cast<std::size_t>(i - 1));
      if (sum != 0) continue;
      const auto shift = qualifying_shift(i);
      if (!shift) continue;
      // i / 2^K lies in [2^-(n+1), 2^-n] for n = K - bit_width(i), and also for n + 1 at powers of two.
      const unsigned n_hi = K - static_cast<unsigned>(std::bit_width(i));
      for (unsigned n : {n_hi, std::has_single_bit(i) ? n_hi + 1 : n_hi}) {
        if (n < o.n_min || n > o.n_max || r.hit[n - o.n_min]) continue;
        r.hit[n - o.n_min] = 1;
        ZeroWitness w;
        w.path = s;
        w.scale = n;
        w.index = i;
        w.shift = *shift;
        w.expansion.resize(K);
        for (unsigned m = 0; m < K; ++m) w.expansion[m] = (i >> (K - 1 - m)) & 1 ? '1' : '0';
        const Bits digits = bits_from_string(w.expansion);
        const Bits suffix(digits.begin() + w.shift, digits.end());
        w.certified = in_tz(mask, suffix) && path.partial_sum(static_cast<std::size_t>(i)) == 0;
        w.rate = lz_estimate(digits).rate;
        w.normalized_rate = w.rate / baseline;
        r.witnesses.push_back(std::move(w));
      }
    }
    return r;
  });

  ZeroHitReport report;
  report.baseline_rate = baseline;
  std::vector<std::uint64_t> hits(scales, 0);
  std::uint64_t origin = 0;
  for (auto& r : results) {
    origin += r.origin ? 1 : 0;
    for (std::size_t k = 0; k < scales; ++k) hits[k] += r.hit[k];
    for (auto& w : r.witnesses) report.witnesses.push_back(std::move(w));
  }
  report.origin_rate = static_cast<double>(origin) / static_cast<double>(o.paths);
  report.monotone = true;
  report.all_positive = true;
  for (std::size_t k = 0; k < scales; ++k) {
    ZeroHitScale row;
    row.scale = o.n_min + static_cast<unsigned>(k);
    row.hits = hits[k];
    row.probability = wilson_interval(hits[k], o.paths);
    if (hits[k] == 0) report.all_positive = false;
    if (k > 0 && row.probability.high < report.scales.back().probability.low) report.monotone = false;
    report.scales.push_back(row);
  }
  std::size_t pass = 0;
  for (const auto& w : report.witnesses)
    if (w.certified && w.normalized_rate < o.rate_threshold) ++pass;
  report.witness_pass_fraction =
      report.witnesses.empty() ? 0.0 : static_cast<double>(pass) / static_cast<double>(report.witnesses.size());
  return report;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::Range, "ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(std::size_t n, std::size_t m, double level) {
  require(level > 0 && level < 1, ErrorKind::Range, "ks_critical_value: level must be in (0,1)");
  const double c = std::sqrt(-0.5 * std::log(level / 2));
  const auto dn = static_cast<double>(n);
  const auto dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

std::vector<ScalingRow> scaling_test(const ScalingOptions& o) {
  require(o.a >= 1, ErrorKind::Range, "scaling: a must be positive");
  require(o.samples >= 1, ErrorKind::Range, "scaling: need samples");
  require(o.resolution >= 1 && o.resolution <= 30, ErrorKind::Range, "scaling: resolution must be in 1..30");
  const std::size_t n = std::size_t{1} << o.resolution;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double sqrt_a = std::sqrt(static_cast<double>(o.a));
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (o.samples + kChunk - 1) / kChunk;

  std::vector<ScalingRow> rows;
  for (std::size_t ti = 0; ti < o.times.size(); ++ti) {
    const Rational& t = o.times[ti];
    require(t > 0 && t <= 1, ErrorKind::Range, "scaling: t must lie in (0,1]");
    const Rational at = t * Rational(static_cast<long>(o.a));
    if (at > 1) fail(ErrorKind::Range, "scaling: a*t = " + rational_to_string(at) + " exceeds 1");
    Dyadic dt;
    Dyadic dat;
    require(to_dyadic(t, dt) && to_dyadic(at, dat), ErrorKind::Range, "scaling: t must be dyadic");
    const auto step_b = grid_index(dt, n);
    const auto step_a = grid_index(dat, n);
    require(step_a && step_b && *step_b > 0, ErrorKind::Range, "scaling: t must lie on the 2^-resolution grid");

    auto draw = [&](std::string_view purpose, std::size_t steps, double scale) {
      auto parts = parallel_map<std::vector<double>>(chunks, o.threads, [&](std::size_t c) {
        BitSource source(o.seed, std::string(purpose) + ":" + std::to_string(ti), c);
        const std::size_t count = std::min(kChunk, o.samples - c * kChunk);
        std::vector<double> v;
        v.reserve(count);
        for (std::size_t s = 0; s < count; ++s) {
          const WalkPath path = WalkPath::generate(source, steps);
          // S has fixed parity, so its lattice spacing is 2.
          const double jitter = 2.0 * (source.uniform() - 0.5);
          v.push_back((static_cast<double>(path.partial_sum(steps)) + jitter) / (sqrt_n * scale));
        }
        return v;
      });
      std::vector<double> all;
      all.reserve(o.samples);
      for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
      return all;
    };
    const auto scaled = draw("scaling-A", *step_a, sqrt_a);
    const auto plain = draw("scaling-B", *step_b, 1.0);
    ScalingRow row;
    row.t = t;
    row.ks = ks_two_sample(scaled, plain);
    row.critical = ks_critical_value(scaled.size(), plain.size(), o.level);
    row.pass = row.ks < row.critical;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bmdim
