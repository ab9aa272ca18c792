// Acceptance criteria 1-10. One PASS/FAIL line per criterion, each with its
// measured runtime against its limit. Exit status is nonzero when a criterion
// fails that was not declared with --known-red.
#include "bit_source.hpp"
#include "complexity.hpp"
#include "dyadic.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "fractal_energy.hpp"
#include "intervals.hpp"
#include "measure_iso.hpp"
#include "presentation.hpp"
#include "wiener_events.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace bmdim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

// 1. Random exact assignments of depth <= 8.
Outcome homomorphism_suite() {
  BitSource src(1, "acceptance-homomorphism");
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t depth = 1 + src.below(8);
    std::map<std::string, Dyadic> measure{{"1", Dyadic(BigInt(src.below(65)), 6)}};
    measure["0"] = Dyadic(1) - measure["1"];
    IntervalAssignment a = phi_base(measure["1"]);
    for (std::size_t d = 1; d < depth; ++d) {
      std::map<std::string, Dyadic> splits;
      for (const auto& cell : a.atoms()) {
        const Dyadic parent = measure.at(cell.mask);
        const Dyadic s = parent * Dyadic(BigInt(src.below(65)), 6);
        splits[cell.mask] = s;
        measure[cell.mask + "1"] = s;
        measure[cell.mask + "0"] = parent - s;
      }
      a = extend_phi(a, splits);
    }

    IntervalSet all;
    Dyadic cursor(0);
    for (const auto& cell : a.atoms()) {
      if (cell.interval.left != cursor || cell.interval.length() != measure.at(cell.mask)) ++failures;
      cursor = cell.interval.right;
      all = all.unite(IntervalSet({cell.interval}));
    }
    if (cursor != Dyadic(1) || all != IntervalSet::unit()) ++failures;

    for (int k = 0; k < 10; ++k) {
      Element s, t, s_co;
      Dyadic s_measure(0);
      std::set<std::string> st;
      for (const auto& cell : a.atoms()) {
        if (src.next_bit()) {
          s.push_back(cell.mask);
          s_measure += measure.at(cell.mask);
          st.insert(cell.mask);
        } else {
          s_co.push_back(cell.mask);
        }
        if (src.next_bit()) {
          t.push_back(cell.mask);
          st.insert(cell.mask);
        }
      }
      const Element s_or_t(st.begin(), st.end());
      const IntervalSet ps = phi_of_element(a, s);
      if (phi_of_element(a, s_or_t) != ps.unite(phi_of_element(a, t))) ++failures;
      if (phi_of_element(a, s_co) != ps.complement()) ++failures;
      if (ps.measure() != s_measure) ++failures;
    }
  }
  return {failures == 0, fmt("100 assignments x 10 element pairs, %d violations", failures)};
}

// 2. Orthant {B_1/2 < 0} & {B_1 < 0} has measure 3/8.
Outcome orthant() {
  const EventAtom atom{{GeneratorEvent(Rational(1, 2), Rational(0)), GeneratorEvent(Rational(1), Rational(0))}, "11"};
  const Rational truth(3, 8);
  MeasureOptions mc;
  mc.method = MeasureOptions::Method::MonteCarlo;
  mc.samples = 10'000'000;
  mc.seed = 2;
  // 10^7 samples give a 99.9% bracket of width about 2^-9.
  const auto m = atom_measure(atom, 9, mc);
  MeasureOptions qd;
  qd.method = MeasureOptions::Method::Quadrature;
  const auto q = atom_measure(atom, 10, qd);
  const bool mc_ok = compare(m.lower, truth) <= 0 && compare(m.upper, truth) >= 0;
  const double q_err = std::fabs(q.midpoint().to_double() - 0.375);
  const bool q_ok = compare(q.lower, truth) <= 0 && compare(q.upper, truth) >= 0 && q_err <= std::ldexp(1.0, -10);
  return {mc_ok && q_ok && m.samples == mc.samples, fmt("MC N=%llu [%.6f, %.6f]; quadrature [%.8f, %.8f], |mid - 3/8| = %.2e", static_cast<unsigned long long>(m.samples), m.lower.to_double(),
                             m.upper.to_double(), q.lower.to_double(), q.upper.to_double(), q_err)};
}

// 3. Energy finiteness threshold and Monte Carlo coverage.
Outcome energy_threshold() {
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> masks{{1, 2}, {2, 3}, {3, 4}};
  int wrong = 0;
  for (const auto& [p, q] : masks)
    for (long k = 1; k <= 19; ++k) {
      const Rational alpha(k, 20);
      const bool finite = !energy_exact(ResidueMask(p, q), alpha).divergent;
      if (finite != (alpha < Rational(p, q))) ++wrong;
    }
  std::ostringstream detail;
  detail << "threshold errors " << wrong << "; coverage";
  bool coverage_ok = true;
  for (const auto& [p, q] : masks)
    for (const Rational alpha : {Rational(1, 4), Rational(1, 2)}) {
      const ResidueMask mask(p, q);
      const auto exact = energy_exact(mask, alpha);
      if (exact.divergent) {
        detail << " (" << p << "," << q << ")@" << rational_to_string(alpha) << "=divergent";
        continue;
      }
      int covered = 0;
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        EnergyMcOptions o;
        o.samples = 1'000'000;
        o.seed = seed;
        const auto r = energy_mc(mask, alpha, o);
        if (r.ci_low <= exact.value && exact.value <= r.ci_high) ++covered;
      }
      if (covered < 95) coverage_ok = false;
      detail << " (" << p << "," << q << ")@" << rational_to_string(alpha) << "=" << covered << "/100";
    }
  return {wrong == 0 && coverage_ok, detail.str()};
}

// 4. Dimension lower bounds on the 0.01 grid.
Outcome dimension_bound() {
  const auto grid = alpha_grid(100);
  const auto a = dimension_lower_bound(ResidueMask(2, 3), grid);
  const auto b = dimension_lower_bound(ResidueMask(1, 2), grid);
  const bool ok = a && b && *a == Rational(66, 100) && *b == Rational(49, 100);
  return {ok, fmt("(2,3) -> %s, (1,2) -> %s", a ? rational_to_string(*a).c_str() : "none",
                  b ? rational_to_string(*b).c_str() : "none")};
}

// 5. Compression rates at n = 2^17.
Outcome compression() {
  const std::size_t n = std::size_t{1} << 17;
  std::vector<double> zeros, coin, ratio;
  const ResidueMask mask(2, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BitSource c(seed, "acceptance-coin");
    Bits bits(n);
    for (auto& b : bits) b = c.next_bit();
    const double coin_rate_s = lz_estimate(bits).rate;
    BitSource t(seed, "acceptance-tz");
    zeros.push_back(lz_estimate(Bits(n, 0)).rate);
    coin.push_back(coin_rate_s);
    ratio.push_back(lz_estimate(tz_sequence(mask, t, n)).rate / coin_rate_s);
  }
  const double z = median(zeros), c = median(coin), r = median(ratio);
  return {z < 0.1 && c > 0.8 && r >= 0.55 && r <= 0.80,
          fmt("medians: zeros %.5f (<0.1), coin %.4f (>0.8), T_Z/coin %.4f (in [0.55,0.80])", z, c, r)};
}

// 6. LIL sweep with the default calibration.
Outcome lil() {
  LilOptions o;
  o.seed = 6;
  const auto r = lil_sweep(o);
  return {r.median >= 0.6 && r.median <= 1.4 && r.p99 < 2.5,
          fmt("%zu statistics: median %.4f (band [0.6,1.4]), p99 %.4f (<2.5), max %.4f", r.samples.size(), r.median,
              r.p99, r.max)};
}

// 7. Zero-hit monotonicity, positivity and witness compression.
Outcome zero_hit() {
  ZeroHitOptions o;
  o.seed = 7;
  const auto r = zero_hit_experiment(o);
  std::ostringstream detail;
  detail << "hit probabilities";
  for (const auto& s : r.scales) detail << ' ' << s.scale << ':' << fmt("%.4f", s.probability.estimate);
  std::vector<double> normalized;
  for (const auto& w : r.witnesses) normalized.push_back(w.normalized_rate);
  detail << "; monotone " << (r.monotone ? "yes" : "no") << ", positive " << (r.all_positive ? "yes" : "no")
         << fmt("; witnesses passing %.3f (>=0.9) of %zu, median normalized rate %.3f", r.witness_pass_fraction,
                r.witnesses.size(), normalized.empty() ? 0.0 : median(normalized));
  return {r.monotone && r.all_positive && r.witness_pass_fraction >= 0.9, detail.str()};
}

// 8. Brownian scaling, a = 2.
Outcome scaling() {
  ScalingOptions o;
  o.a = 2;
  o.times = {Rational(1, 8), Rational(1, 4), Rational(1, 2)};
  o.samples = 100'000;
  o.seed = 8;
  const auto rows = scaling_test(o);
  bool ok = rows.size() == 3;
  std::ostringstream detail;
  detail << "KS";
  for (const auto& row : rows) {
    ok = ok && row.pass && row.ks < row.critical;
    detail << fmt(" %.5f", row.ks);
  }
  detail << fmt(" vs critical %.5f", rows.empty() ? 0.0 : rows.front().critical);
  return {ok, detail.str()};
}

// 9. Semidecidable comparison and the endpoint dichotomy.
Outcome semidecidability() {
  BitSource src(9, "acceptance-compare");
  const auto random_rational = [&src] {
    const long den = 1 + static_cast<long>(src.below(10'000));
    return Rational(static_cast<long>(src.below(20'000)) - 10'000, den);
  };
  int wrong = 0, unequal = 0;
  while (unequal < 1000) {
    const Rational x = random_rational(), y = random_rational();
    if (x == y) continue;
    ++unequal;
    const auto px = Presentation::of_rational(x), py = Presentation::of_rational(y);
    const bool less = x < y;
    const auto& lo = less ? px : py;
    const auto& hi = less ? py : px;
    if (compare_presentations(lo, hi, 10'000) != Comparison::StrictlyLess) ++wrong;
    // Soundness in the other order; separation needs about 30 indices here.
    if (compare_presentations(hi, lo, 256) != Comparison::Unresolved) ++wrong;
  }
  int answered = 0;
  for (int i = 0; i < 100; ++i) {
    const Rational x = random_rational();
    // Same value, different presentation: shrinking approximations from above.
    const auto a = Presentation::of_rational(x);
    const auto b = Presentation::from_approximations([x](std::size_t k) {
      // floor(x 2^k) + 1/2, over 2^(k+1): within 2^-(k+1) of x.
      const BigInt num = boost::multiprecision::numerator(x) << k;
      const BigInt& den = boost::multiprecision::denominator(x);
      BigInt fl = num / den;
      if (num.sign() < 0 && fl * den != num) fl -= 1;
      return Dyadic(2 * fl + 1, k + 1);
    });
    const bool flip = i % 2 == 1;
    if (compare_presentations(flip ? b : a, flip ? a : b, 10'000) != Comparison::Unresolved) ++answered;
  }

  const Dyadic tol = Dyadic::pow2(-40);
  std::vector<RationalOpenInterval> right_shrinks, left_shrinks, both_shrink;
  for (long n = 1; n <= 40; ++n) {
    right_shrinks.push_back({Rational(0), Rational(1, n)});
    left_shrinks.push_back({Rational(1, 2) - Rational(1, n + 1), Rational(1, 2)});
    both_shrink.push_back({Rational(-1, n), Rational(1, n)});
  }
  const auto v1 = nested_endpoint_detector(right_shrinks, tol);
  const auto v2 = nested_endpoint_detector(left_shrinks, tol);
  const auto v3 = nested_endpoint_detector(both_shrink, tol);
  const bool families = v1.kind == EndpointVerdict::Kind::LeftConstant && v1.value == 0 &&
                        v2.kind == EndpointVerdict::Kind::RightConstant && v2.value == Rational(1, 2) &&
                        v3.kind == EndpointVerdict::Kind::Inconclusive;
  return {wrong == 0 && answered == 0 && families,
          fmt("unequal pairs wrong %d/1000, equal pairs answered %d/100, endpoint families %s", wrong, answered,
              families ? "correct" : "WRONG")};
}

// 10. Forward and back transfer of tests over depth-6 algebras.
Outcome transfer() {
  int forward_bad = 0, back_bad = 0, levels = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BitSource src(seed, "acceptance-transfer");
    std::vector<GeneratorEvent> g;
    for (int k = 0; k < 8; ++k)
      g.emplace_back(src.next_bit() ? Rational(1) : Rational(1, 2), Rational(static_cast<long>(src.below(17)) - 8, 8));
    PhiBuildOptions o;
    o.precision = 12;
    const auto phi = PhiConstruction::build(g, 8, o);

    // Forward: levels chosen from measure upper bounds, so each is a genuine test.
    const auto& a6 = phi.at(6);
    const std::vector<GeneratorEvent> g6(g.begin(), g.begin() + 6);
    std::vector<std::pair<std::string, Dyadic>> uppers;
    for (const auto& cell : a6.atoms()) uppers.emplace_back(cell.mask, atom_measure(EventAtom{g6, cell.mask}, 14).upper);
    MLTest test;
    test.slack = Dyadic(0);
    for (std::size_t n = 0; n < 6; ++n) {
      std::vector<std::size_t> order(uppers.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[src.below(i)]);
      Element e;
      Dyadic used(0);
      for (const auto i : order)
        if (used + uppers[i].second <= MLTest::bound(n)) {
          used += uppers[i].second;
          e.push_back(uppers[i].first);
        }
      test.levels.push_back(TestLevel{{e}});
    }
    try {
      const auto image = transfer_test_forward(test, a6);
      for (std::size_t n = 0; n < image.levels.size(); ++n) {
        ++levels;
        const auto atoms = static_cast<std::int64_t>(test.levels[n].elements[0].size());
        if (image.levels[n].length > MLTest::bound(n) + Dyadic(atoms) * a6.error_budget()) ++forward_bad;
      }
    } catch (const Error&) {
      ++forward_bad;
    }

    // Back: a fixed cylinder test pulled back through depths 2..8.
    CylinderTest cylinders;
    for (std::size_t i = 0; i < 4; ++i) {
      std::vector<std::string> level;
      for (int c = 0; c < 2; ++c) {
        std::string s;
        for (std::size_t b = 0; b < i + 2; ++b) s += src.next_bit() ? '1' : '0';
        level.push_back(s);
      }
      cylinders.push_back(level);
    }
    std::optional<BackTransfer> prev;
    for (std::size_t d = 2; d <= 8; ++d) {
      auto back = transfer_test_back(cylinders, phi.at(d), 64);
      if (prev) {
        if (back.total_deficit > prev->total_deficit) ++back_bad;
        for (std::size_t i = 0; i < back.deficit.size(); ++i)
          if (back.deficit[i] > prev->deficit[i]) ++back_bad;
      }
      prev = std::move(back);
    }
  }
  return {forward_bad == 0 && back_bad == 0,
          fmt("20 tests: forward levels over bound %d/%d, deficit increases %d", forward_bad, levels, back_bad)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  std::vector<int> known_red;
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--known-red", known_red, "Criteria whose failure does not fail the exit status")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "homomorphism suite", 5, homomorphism_suite},
      {2, "orthant probability", 30, orthant},
      {3, "energy threshold", 120, energy_threshold},
      {4, "dimension lower bound", 60, dimension_bound},
      {5, "compression separation", 60, compression},
      {6, "LIL sweep", 300, lil},
      {7, "zero-hit monotonicity", 600, zero_hit},
      {8, "Brownian scaling", 120, scaling},
      {9, "semidecidability suite", 5, semidecidability},
      {10, "test transfer", 60, transfer},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = out.pass && in_time;
    const bool waived = std::find(known_red.begin(), known_red.end(), c.id) != known_red.end();
    std::printf("criterion %2d %s: %s [%.1fs / %.0fs]%s | %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                c.limit_seconds, pass || !waived ? "" : " (known red)", out.detail.c_str());
    std::fflush(stdout);
    if (!pass && !waived) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
