#include "wiener_events.hpp"

#include "errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace bmdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Gaussian mass beyond kTail standard deviations is < 2e-19.
constexpr double kTail = 9.0;
constexpr double kRoundoff = 1e-13;
constexpr std::uint64_t kChunk = 1ULL << 16;

constexpr std::array<double, 4> kGaussNodes = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                              0.9602898564975363};
constexpr std::array<double, 4> kGaussWeights = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                0.1012285362903763};

// One constrained observation time after reduction: lo <= B_time < hi.
struct Window {
  Rational time;
  std::optional<Rational> lo;
  std::optional<Rational> hi;
};

struct Reduced {
  bool empty = false;
  std::vector<Window> windows;  // sorted by time, only constrained times
};

Reduced reduce(const EventAtom& atom) {
  require(atom.mask.size() <= atom.generators.size(), ErrorKind::Structural, "atom mask longer than generator list");
  std::map<Rational, Window> by_time;
  for (std::size_t k = 0; k < atom.mask.size(); ++k) {
    const char b = atom.mask[k];
    require(b == '0' || b == '1', ErrorKind::Structural, "atom mask must contain only 0/1");
    const GeneratorEvent& g = atom.generators[k];
    Window& w = by_time[g.time];
    w.time = g.time;
    if (b == '1') {
      if (!w.hi || g.threshold < *w.hi) w.hi = g.threshold;
    } else {
      if (!w.lo || g.threshold > *w.lo) w.lo = g.threshold;
    }
  }
  Reduced r;
  for (auto& [t, w] : by_time) {
    if (w.lo && w.hi && !(*w.lo < *w.hi)) {
      r.empty = true;
      r.windows.clear();
      return r;
    }
    r.windows.push_back(std::move(w));
  }
  return r;
}

struct Level {
  double sigma;     // sd of the increment since the previous window
  double marginal;  // sd of B at this time
  double lo;
  double hi;
};

std::vector<Level> to_levels(const Reduced& r) {
  std::vector<Level> levels;
  double prev = 0.0;
  for (const auto& w : r.windows) {
    const double t = to_double(w.time);
    levels.push_back(Level{std::sqrt(t - prev), std::sqrt(t), w.lo ? to_double(*w.lo) : -kInf,
                           w.hi ? to_double(*w.hi) : kInf});
    prev = t;
  }
  return levels;
}

// Nested composite Gauss-Legendre over the values of B at each window,
// with the last window integrated in closed form. Panel width is `scale`
// times the smaller of the two increment deviations the integrand depends on.
class NestedQuadrature {
 public:
  NestedQuadrature(const std::vector<Level>& levels, double scale, std::uint64_t budget)
      : levels_(levels), scale_(scale), budget_(budget) {}

  double run() { return conditional(0, 0.0); }
  std::uint64_t evaluations() const { return evals_; }

 private:
  double conditional(std::size_t j, double x) {
    const Level& lv = levels_[j];
    if (j + 1 == levels_.size()) {
      if (++evals_ > budget_) fail(ErrorKind::Budget, "quadrature node budget exhausted (" + std::to_string(budget_) + " evaluations)");
      return normal_cdf((lv.hi - x) / lv.sigma) - normal_cdf((lv.lo - x) / lv.sigma);
    }
    const double a = std::max({lv.lo, x - kTail * lv.sigma, -kTail * lv.marginal});
    const double b = std::min({lv.hi, x + kTail * lv.sigma, kTail * lv.marginal});
    if (!(a < b)) return 0.0;
    const double width = scale_ * std::min(lv.sigma, levels_[j + 1].sigma);
    const std::size_t panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / width)));
    const double h = (b - a) / static_cast<double>(panels);
    const double norm = 1.0 / (lv.sigma * std::sqrt(2.0 * M_PI));
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * h;
      for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
        for (double sgn : {-1.0, 1.0}) {
          const double y = mid + sgn * 0.5 * h * kGaussNodes[k];
          const double z = (y - x) / lv.sigma;
          sum += 0.5 * h * kGaussWeights[k] * norm * std::exp(-0.5 * z * z) * conditional(j + 1, y);
        }
      }
    }
    return sum;
  }

  const std::vector<Level>& levels_;
  double scale_;
  std::uint64_t budget_;
  std::uint64_t evals_ = 0;
};

MeasureEstimate snap(double value, double err, unsigned precision, MeasureMethod method) {
  const std::uint64_t grid = precision + 2;
  MeasureEstimate m;
  m.method = method;
  m.estimate = value;
  m.lower = max(Dyadic(0), Dyadic::floor_of(value - err, grid));
  m.upper = min(Dyadic(1), Dyadic::ceil_of(value + err, grid));
  if (m.upper < m.lower) m.upper = m.lower;
  return m;
}

MeasureEstimate quadrature(const std::vector<Level>& levels, unsigned precision, const MeasureOptions& options) {
  const double target = std::ldexp(1.0, -static_cast<int>(precision) - 2);
  const double truncation = 4.0 * static_cast<double>(levels.size()) * normal_cdf(-kTail);
  if (levels.size() == 1) {
    NestedQuadrature q(levels, 1.0, options.node_budget);
    return snap(q.run(), kRoundoff, precision, MeasureMethod::Quadrature);
  }
  std::uint64_t used = 0;
  double scale = 1.0;
  NestedQuadrature coarse(levels, scale, options.node_budget);
  double previous = coarse.run();
  used += coarse.evaluations();
  for (;;) {
    scale *= 0.5;
    NestedQuadrature fine(levels, scale, options.node_budget - std::min(used, options.node_budget));
    const double current = fine.run();
    used += fine.evaluations();
    const double err = std::abs(current - previous) + truncation + kRoundoff;
    if (err <= target) return snap(current, err, precision, MeasureMethod::Quadrature);
    if (scale < 1.0 / 64) fail(ErrorKind::Budget, "quadrature did not reach precision 2^-" + std::to_string(precision));
    previous = current;
  }
}

MeasureEstimate monte_carlo(const std::vector<Level>& levels, unsigned precision, const MeasureOptions& options) {
  const std::uint64_t n = options.samples ? options.samples : monte_carlo_samples_for(precision);
  if (n > options.sample_budget)
    fail(ErrorKind::Budget, "Monte Carlo at precision 2^-" + std::to_string(precision) + " requires " +
                                std::to_string(n) + " samples; budget is " + std::to_string(options.sample_budget));
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  const auto hits = parallel_map<std::uint64_t>(chunks, options.threads, [&](std::size_t c) {
    BitSource src(options.seed, "atom-measure-mc", c);
    const std::uint64_t count = std::min(kChunk, n - c * kChunk);
    std::uint64_t inside = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
      double b = 0.0;
      bool ok = true;
      for (const Level& lv : levels) {
        b += lv.sigma * src.normal();
        if (!(lv.lo <= b && b < lv.hi)) {
          ok = false;
          break;
        }
      }
      inside += ok;
    }
    return inside;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;

  // Wilson score interval.
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(total) / nn;
  const double z2 = kMonteCarloZ * kMonteCarloZ;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = kMonteCarloZ / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  MeasureEstimate m = snap(center, half, precision, MeasureMethod::MonteCarlo);
  m.estimate = p;
  m.samples = n;
  m.confidence = kMonteCarloConfidence;
  if (m.width() > Dyadic::pow2(-static_cast<std::int64_t>(precision)))
    fail(ErrorKind::Budget, std::to_string(n) + " Monte Carlo samples cannot reach precision 2^-" +
                                std::to_string(precision) + "; requires " + std::to_string(monte_carlo_samples_for(precision)));
  return m;
}

}  // namespace

GeneratorEvent::GeneratorEvent(Rational t, Rational y) : time(std::move(t)), threshold(std::move(y)) {
  require(time > 0 && time <= 1, ErrorKind::Range, "generator time must lie in (0,1]");
}

std::string GeneratorEvent::to_string() const {
  return "{B_" + rational_to_string(time) + " < " + rational_to_string(threshold) + "}";
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::uint64_t monte_carlo_samples_for(unsigned precision) {
  const double root = kMonteCarloZ * std::ldexp(1.0, static_cast<int>(precision) + 1);
  return static_cast<std::uint64_t>(std::ceil(root * root));
}

bool syntactically_empty(const EventAtom& atom) { return reduce(atom).empty; }

MeasureEstimate atom_measure(const EventAtom& atom, unsigned precision, const MeasureOptions& options) {
  if (precision > options.max_precision)
    fail(ErrorKind::Budget, "precision 2^-" + std::to_string(precision) + " beyond configured maximum 2^-" +
                                std::to_string(options.max_precision));
  const Reduced r = reduce(atom);
  if (r.empty || r.windows.empty()) {
    MeasureEstimate m;
    m.exact = true;
    m.lower = m.upper = Dyadic(r.empty ? 0 : 1);
    m.estimate = r.empty ? 0.0 : 1.0;
    return m;
  }
  const std::vector<Level> levels = to_levels(r);
  const bool use_mc = options.method == MeasureOptions::Method::MonteCarlo ||
                      (options.method == MeasureOptions::Method::Auto && levels.size() > options.max_quadrature_dim);
  return use_mc ? monte_carlo(levels, precision, options) : quadrature(levels, precision, options);
}

Membership path_in_event(const WalkPath& path, const GeneratorEvent& event) {
  const WalkValue v = path.eval(event.time);
  Membership m;
  m.margin = v.to_double() - to_double(event.threshold);
  const Rational& c = v.coeff;
  const Rational& y = event.threshold;
  // c / sqrt(n) < y, decided without square roots.
  int cmp;  // sign of (c/sqrt(n) - y)
  if (c.sign() != y.sign() || c.sign() == 0) {
    cmp = (c.sign() > y.sign()) ? 1 : (c.sign() < y.sign() ? -1 : 0);
  } else {
    const Rational lhs = c * c;
    const Rational rhs = y * y * static_cast<unsigned long>(v.n);
    const int mag = lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    cmp = c.sign() > 0 ? mag : -mag;
  }
  m.kind = cmp < 0 ? Membership::Kind::In : (cmp > 0 ? Membership::Kind::Out : Membership::Kind::Indeterminate);
  if (m.kind == Membership::Kind::Indeterminate) m.margin = 0.0;
  return m;
}

NonatomicReport check_nonatomic(const std::vector<GeneratorEvent>& generators, std::size_t depth, const Dyadic& bound,
                                unsigned precision, const MeasureOptions& options, std::size_t depth_cap) {
  require(depth <= generators.size(), ErrorKind::Range, "check_nonatomic: depth exceeds generator count");
  if (depth > depth_cap)
    fail(ErrorKind::Budget, "check_nonatomic: depth " + std::to_string(depth) + " exceeds cap " + std::to_string(depth_cap));
  NonatomicReport report;
  report.max_upper = Dyadic(-1);
  EventAtom atom{generators, ""};
  auto visit = [&](auto& self) -> void {
    if (syntactically_empty(atom)) {
      ++report.pruned;
      if (report.max_upper < Dyadic(0)) report.max_upper = Dyadic(0);
      return;
    }
    if (atom.mask.size() == depth) {
      const MeasureEstimate m = atom_measure(atom, precision, options);
      ++report.atoms_evaluated;
      if (report.max_upper < m.upper) {
        report.max_upper = m.upper;
        report.argmax_mask = atom.mask;
      }
      return;
    }
    for (char b : {'1', '0'}) {
      atom.mask.push_back(b);
      self(self);
      atom.mask.pop_back();
    }
  };
  visit(visit);
  report.pass = report.max_upper <= bound;
  return report;
}

}  // namespace bmdim
