#include "errors.hpp"
#include "wiener_events.hpp"

#include <doctest.h>

#include <cmath>

using namespace bmdim;

namespace {

GeneratorEvent ev(long tn, long td, long yn, long yd) { return GeneratorEvent(Rational(tn, td), Rational(yn, yd)); }

bool brackets(const MeasureEstimate& e, double x) { return e.lower.to_double() <= x && x <= e.upper.to_double(); }

const double kOrthant = 0.25 + std::asin(std::sqrt(0.5)) / (2 * M_PI);  // 3/8

}  // namespace

TEST_CASE("generator times must lie in (0,1]") {
  CHECK_THROWS_AS(ev(0, 1, 0, 1), Error);
  CHECK_THROWS_AS(ev(3, 2, 0, 1), Error);
  CHECK_NOTHROW(ev(1, 1, 0, 1));
}

TEST_CASE("atom measure examples") {
  const auto half = atom_measure(EventAtom{{ev(1, 1, 0, 1)}, "1"}, 6);
  CHECK(brackets(half, 0.5));
  CHECK(half.width() <= Dyadic::pow2(-6));

  const auto orthant = atom_measure(EventAtom{{ev(1, 2, 0, 1), ev(1, 1, 0, 1)}, "11"}, 8);
  CHECK(kOrthant == doctest::Approx(0.375));
  CHECK(brackets(orthant, 0.375));
  CHECK(orthant.method == MeasureMethod::Quadrature);

  const EventAtom contradictory{{ev(1, 1, 0, 1), ev(1, 1, 1, 1)}, "10"};
  CHECK(syntactically_empty(contradictory));
  const auto zero = atom_measure(contradictory, 10);
  CHECK(zero.exact);
  CHECK(zero.lower == Dyadic(0));
  CHECK(zero.upper == Dyadic(0));

  const auto whole = atom_measure(EventAtom{{}, ""}, 10);
  CHECK(whole.exact);
  CHECK(whole.lower == Dyadic(1));
}

TEST_CASE("monte carlo brackets agree with quadrature") {
  MeasureOptions mc;
  mc.method = MeasureOptions::Method::MonteCarlo;
  mc.seed = 9;
  const EventAtom atom{{ev(1, 4, 1, 4), ev(1, 2, -1, 3), ev(1, 1, 1, 2)}, "101"};
  const auto a = atom_measure(atom, 7, mc);
  const auto b = atom_measure(atom, 7);
  CHECK(a.method == MeasureMethod::MonteCarlo);
  CHECK(a.confidence == doctest::Approx(kMonteCarloConfidence));
  CHECK(a.samples == monte_carlo_samples_for(7));
  CHECK(a.lower <= b.upper);
  CHECK(b.lower <= a.upper);
}

TEST_CASE("budget errors name the required sample count") {
  MeasureOptions mc;
  mc.method = MeasureOptions::Method::MonteCarlo;
  mc.sample_budget = 1000;
  try {
    atom_measure(EventAtom{{ev(1, 1, 0, 1)}, "1"}, 10, mc);
    FAIL("expected a budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Budget);
    CHECK(std::string(e.what()).find(std::to_string(monte_carlo_samples_for(10))) != std::string::npos);
  }
  CHECK_THROWS_AS(atom_measure(EventAtom{{ev(1, 1, 0, 1)}, "1"}, 31), Error);
}

TEST_CASE("additivity, total mass and symmetry") {
  const std::vector<GeneratorEvent> g{ev(1, 3, 1, 5), ev(2, 3, -1, 4), ev(1, 1, 1, 3)};
  const unsigned k = 9;
  Dyadic lo(0);
  Dyadic hi(0);
  for (std::string mask : {"000", "001", "010", "011", "100", "101", "110", "111"}) {
    const auto e = atom_measure(EventAtom{g, mask}, k);
    lo += e.lower;
    hi += e.upper;
    // Refinements at the last generator bracket the parent.
    const auto parent = atom_measure(EventAtom{{g[0], g[1]}, mask.substr(0, 2)}, k);
    const auto sibling = atom_measure(EventAtom{g, mask.substr(0, 2) + (mask[2] == '1' ? "0" : "1")}, k);
    CHECK(e.lower + sibling.lower <= parent.upper);
    CHECK(parent.lower <= e.upper + sibling.upper);
    // Mirror: negate thresholds and flip the mask.
    std::vector<GeneratorEvent> m;
    for (const auto& x : g) m.emplace_back(x.time, -x.threshold);
    std::string flipped = mask;
    for (auto& c : flipped) c = c == '1' ? '0' : '1';
    const auto mirrored = atom_measure(EventAtom{m, flipped}, k);
    CHECK(mirrored.lower <= e.upper);
    CHECK(e.lower <= mirrored.upper);
  }
  CHECK(lo <= Dyadic(1));
  CHECK(Dyadic(1) <= hi);
}

TEST_CASE("path membership is exact") {
  const auto up = WalkPath::decode(4, "1111");
  CHECK(path_in_event(up, ev(1, 2, 2, 1)).kind == Membership::Kind::In);
  const auto tie = path_in_event(up, ev(1, 2, 1, 1));
  CHECK(tie.kind == Membership::Kind::Indeterminate);
  CHECK(tie.margin == 0.0);
  CHECK(path_in_event(WalkPath::decode(2, "10"), ev(1, 1, -1, 4)).kind == Membership::Kind::Out);
  // sqrt(2)/2 at t = 1/2 for n = 2: compare against rationals on either side.
  const auto p = WalkPath::decode(2, "11");
  CHECK(path_in_event(p, ev(1, 2, 7072, 10000)).kind == Membership::Kind::In);
  CHECK(path_in_event(p, ev(1, 2, 7071, 10000)).kind == Membership::Kind::Out);
}

TEST_CASE("non-atomicity checks") {
  const auto one = check_nonatomic({ev(1, 1, 0, 1)}, 1, Dyadic::floor_of(0.6, 10), 8);
  CHECK(one.pass);
  const auto two = check_nonatomic({ev(1, 2, 0, 1), ev(1, 1, 0, 1)}, 2, Dyadic::floor_of(0.4, 10), 8);
  CHECK(two.pass);
  CHECK(two.max_upper.to_double() == doctest::Approx(0.375).epsilon(0.02));
  const auto dup = check_nonatomic({ev(1, 1, 0, 1), ev(1, 1, 0, 1)}, 2, Dyadic::floor_of(0.4, 10), 8);
  CHECK_FALSE(dup.pass);
  CHECK(dup.pruned >= 2);
  const std::vector<GeneratorEvent> many(20, ev(1, 1, 0, 1));
  CHECK_THROWS_AS(check_nonatomic(many, 17, Dyadic(1), 4), Error);
}
