#pragma once

#include "complexity.hpp"
#include "dyadic.hpp"
#include "walk.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bmdim {

/// max over h of |x(t+h) - x(t)| / sqrt(2|h| ln ln(1/|h|)). Every h needs
/// 0 < |h| < 1/e and t + h in [0,1], else Error(Range).
double lil_statistic(const WalkPath& path, const Dyadic& t, const std::vector<Dyadic>& h_grid);

/// {+-2^-j : j_min <= j <= j_max}.
std::vector<Dyadic> lil_grid(unsigned j_min, unsigned j_max);

struct LilOptions {
  std::size_t paths = 200;
  unsigned resolution = 20;  // K: paths have 2^K steps
  std::size_t times = 100;
  unsigned j_min = 6;
  unsigned j_max = 18;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::vector<Dyadic> explicit_times;  // used for every path instead of random times when non-empty
};

struct LilSample {
  std::size_t path = 0;
  Dyadic t;
  double statistic = 0.0;
};

struct LilReport {
  std::vector<LilSample> samples;
  double median = 0.0;
  double p01 = 0.0;
  double p99 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

LilReport lil_sweep(const LilOptions& options);

/// Linearly interpolated quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q);

struct Interval95 {
  double estimate = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval.
Interval95 wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = 1.959963984540054);

struct ZeroHitOptions {
  std::uint64_t p = 2;
  std::uint64_t q = 3;
  unsigned n_min = 2;
  unsigned n_max = 8;
  std::size_t paths = 10'000;
  unsigned resolution = 20;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double rate_threshold = 0.8;
  std::size_t baseline_seeds = 101;
};

struct ZeroWitness {
  std::size_t path = 0;
  unsigned scale = 0;
  std::uint64_t index = 0;   // zero time index / 2^resolution
  std::string expansion;     // resolution binary digits of the zero time
  unsigned shift = 0;        // expansion[shift..] is the certified T_Z prefix
  bool certified = false;
  double rate = 0.0;
  double normalized_rate = 0.0;
};

struct ZeroHitScale {
  unsigned scale = 0;
  std::uint64_t hits = 0;
  Interval95 probability;
};

struct ZeroHitReport {
  std::vector<ZeroHitScale> scales;
  std::vector<ZeroWitness> witnesses;
  double origin_rate = 0.0;     // paths whose zero at t = 0 lies in X
  double baseline_rate = 0.0;   // median coin rate at `resolution` bits
  bool monotone = false;        // no interval lies entirely below its predecessor
  bool all_positive = false;
  double witness_pass_fraction = 0.0;
};

/// X is the set of reals whose expansion, after dropping at most as many
/// leading zeros as it has, is a path through T_Z. Scale n hits when the
/// path has a zero time in [2^-(n+1), 2^-n] whose resolution-digit
/// expansion qualifies.
ZeroHitReport zero_hit_experiment(const ZeroHitOptions& options);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// Asymptotic critical value at significance level `level` (0.01 -> 1.6276 sqrt((n+m)/(nm))).
double ks_critical_value(std::size_t n, std::size_t m, double level);

struct ScalingOptions {
  std::uint64_t a = 2;
  std::vector<Rational> times;
  std::size_t samples = 100'000;
  unsigned resolution = 16;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double level = 0.01;
};

struct ScalingRow {
  Rational t;
  double ks = 0.0;
  double critical = 0.0;
  bool pass = false;
};

/// Compares path(a t)/sqrt(a) against path(t) over independent path sets.
/// Lattice values are spread uniformly over their lattice cell before the
/// comparison so that the two different lattices do not register as a
/// distribution difference.
std::vector<ScalingRow> scaling_test(const ScalingOptions& options);

}  // namespace bmdim
