#include "measure_iso.hpp"

#include "errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bmdim {

IntervalAssignment IntervalAssignment::root() {
  IntervalAssignment a;
  a.atoms_.push_back(AtomCell{"", HalfOpenInterval(0, 1)});
  a.index_.emplace("", 0);
  return a;
}

const HalfOpenInterval& IntervalAssignment::interval(std::string_view mask) const {
  require(mask.size() == depth_, ErrorKind::Structural,
          "mask length " + std::to_string(mask.size()) + " does not match assignment depth " + std::to_string(depth_));
  const auto it = index_.find(std::string(mask));
  if (it == index_.end()) fail(ErrorKind::Structural, "unknown atom mask '" + std::string(mask) + "'");
  return atoms_[it->second].interval;
}

std::string IntervalAssignment::to_table() const {
  std::uint64_t e = 0;
  for (const auto& a : atoms_) e = std::max({e, a.interval.left.exponent(), a.interval.right.exponent()});
  std::ostringstream out;
  out << "mask,left,right,exponent\n";
  for (const auto& a : atoms_)
    out << a.mask << ',' << a.interval.left.numerator_at(e) << ',' << a.interval.right.numerator_at(e) << ',' << e << '\n';
  return out.str();
}

IntervalAssignment extend_phi(const IntervalAssignment& assignment, const std::map<std::string, Dyadic>& split_measures,
                              const Dyadic& measure_error) {
  require(measure_error.sign() >= 0, ErrorKind::Range, "extend_phi: negative measure error");
  IntervalAssignment next;
  next.depth_ = assignment.depth_ + 1;
  next.budget_ = assignment.budget_ + measure_error;
  next.atoms_.reserve(2 * assignment.atoms_.size());
  for (const auto& parent : assignment.atoms_) {
    Dyadic split(0);
    if (const auto it = split_measures.find(parent.mask); it != split_measures.end()) {
      split = it->second;
    } else if (!parent.interval.empty()) {
      fail(ErrorKind::Structural, "extend_phi: no split measure for atom '" + parent.mask + "'");
    }
    if (split.sign() < 0 || parent.interval.length() < split)
      fail(ErrorKind::Consistency, "extend_phi: split " + split.to_string() + " for atom '" + parent.mask +
                                       "' outside [0, " + parent.interval.length().to_string() + "]");
    const Dyadic cut = parent.interval.left + split;
    next.atoms_.push_back(AtomCell{parent.mask + "1", HalfOpenInterval(parent.interval.left, cut)});
    next.atoms_.push_back(AtomCell{parent.mask + "0", HalfOpenInterval(cut, parent.interval.right)});
  }
  for (std::size_t i = 0; i < next.atoms_.size(); ++i) next.index_.emplace(next.atoms_[i].mask, i);
  return next;
}

IntervalAssignment phi_base(const Dyadic& mu_a1, const Dyadic& measure_error) {
  require(mu_a1.sign() >= 0 && mu_a1 <= Dyadic(1), ErrorKind::Structural,
          "phi_base: measure " + mu_a1.to_string() + " outside [0,1]");
  return extend_phi(IntervalAssignment::root(), {{"", mu_a1}}, measure_error);
}

IntervalSet phi_of_element(const IntervalAssignment& assignment, const Element& element) {
  std::vector<HalfOpenInterval> pieces;
  pieces.reserve(element.size());
  for (const auto& mask : element) pieces.push_back(assignment.interval(mask));
  return IntervalSet(std::move(pieces));
}

Dyadic split_from_estimate(const MeasureEstimate& estimate, unsigned precision, const Dyadic& parent_length) {
  // round(mid * 2^p) / 2^p, half-up
  const Dyadic mid = estimate.midpoint();
  const Dyadic shifted = mid * Dyadic::pow2(precision) + Dyadic::pow2(-1);
  const BigInt fl = shifted.numerator() >> static_cast<unsigned>(shifted.exponent());
  Dyadic split(fl, precision);
  if (split.sign() < 0) split = Dyadic(0);
  if (parent_length < split) split = parent_length;
  return split;
}

PhiConstruction PhiConstruction::build(std::vector<GeneratorEvent> generators, std::size_t depth,
                                       const PhiBuildOptions& options) {
  require(depth <= generators.size(), ErrorKind::Range, "phi: depth exceeds generator count");
  PhiConstruction phi;
  phi.generators_ = std::move(generators);
  phi.chain_.push_back(IntervalAssignment::root());
  const Dyadic step_error = Dyadic::pow2(-static_cast<std::int64_t>(options.precision));
  for (std::size_t d = 0; d < depth; ++d) {
    const IntervalAssignment& prev = phi.chain_.back();
    std::map<std::string, Dyadic> splits;
    EventAtom atom{std::vector<GeneratorEvent>(phi.generators_.begin(), phi.generators_.begin() + d + 1), ""};
    for (const auto& cell : prev.atoms()) {
      if (cell.interval.empty()) continue;
      atom.mask = cell.mask + "1";
      MeasureOptions mo = options.measure;
      mo.seed = derive_seed(options.measure.seed, "phi-split:" + atom.mask);
      const MeasureEstimate est = atom_measure(atom, options.precision, mo);
      splits.emplace(cell.mask, split_from_estimate(est, options.precision, cell.interval.length()));
    }
    phi.chain_.push_back(extend_phi(prev, splits, step_error));
  }
  return phi;
}

PhiConstruction PhiConstruction::from_chain(std::vector<IntervalAssignment> chain, std::vector<GeneratorEvent> generators) {
  require(!chain.empty(), ErrorKind::Structural, "phi chain must contain depth 0");
  for (std::size_t i = 0; i < chain.size(); ++i)
    require(chain[i].depth() == i, ErrorKind::Structural, "phi chain entry " + std::to_string(i) + " has wrong depth");
  PhiConstruction phi;
  phi.chain_ = std::move(chain);
  phi.generators_ = std::move(generators);
  return phi;
}

const IntervalAssignment& PhiConstruction::at(std::size_t depth) const {
  require(depth < chain_.size(), ErrorKind::Range, "phi: depth " + std::to_string(depth) + " not constructed");
  return chain_[depth];
}

std::vector<HalfOpenInterval> phi_point_chain(const WalkPath& path, const PhiConstruction& phi, std::size_t depth) {
  require(depth <= phi.depth(), ErrorKind::Range, "phi_point: depth beyond construction");
  require(depth <= phi.generators().size(), ErrorKind::Range, "phi_point: construction has too few generators");
  std::vector<HalfOpenInterval> out;
  std::string mask;
  out.push_back(phi.at(0).interval(mask));
  for (std::size_t k = 0; k < depth; ++k) {
    const Membership m = path_in_event(path, phi.generators()[k]);
    if (m.kind == Membership::Kind::Indeterminate)
      fail(ErrorKind::Boundary, "phi_point: path lies on the boundary of generator " + std::to_string(k) + " " +
                                    phi.generators()[k].to_string());
    mask.push_back(m.kind == Membership::Kind::In ? '1' : '0');
    out.push_back(phi.at(k + 1).interval(mask));
  }
  return out;
}

HalfOpenInterval phi_point(const WalkPath& path, const PhiConstruction& phi, std::size_t depth) {
  return phi_point_chain(path, phi, depth).back();
}

IntervalTest transfer_test_forward(const MLTest& test, const IntervalAssignment& assignment) {
  IntervalTest out;
  for (std::size_t i = 0; i < test.levels.size(); ++i) {
    std::set<std::string> atoms;
    std::vector<HalfOpenInterval> pieces;
    for (const auto& element : test.levels[i].elements)
      for (const auto& mask : element) {
        pieces.push_back(assignment.interval(mask));
        atoms.insert(mask);
      }
    const IntervalSet image(std::move(pieces));
    IntervalTestLevel level;
    level.length = image.measure();
    level.bound = MLTest::bound(i);
    level.allowance = level.bound + test.slack + Dyadic(static_cast<std::int64_t>(atoms.size())) * assignment.error_budget();
    if (level.allowance < level.length)
      fail(ErrorKind::InvalidTest, "test level " + std::to_string(i + 1) + " has measure " + level.length.to_string() +
                                       " above its allowance " + level.allowance.to_string());
    for (const auto& p : image.pieces()) level.open_intervals.push_back(OpenInterval{p.left, p.right});
    out.levels.push_back(std::move(level));
  }
  return out;
}

BackTransfer transfer_test_back(const CylinderTest& cylinders, const IntervalAssignment& assignment, std::size_t fuel) {
  BackTransfer out;
  out.test.slack = Dyadic(0);
  for (const auto& level : cylinders) {
    TestLevel event_level;
    std::vector<HalfOpenInterval> target;
    std::vector<HalfOpenInterval> covered;
    for (const auto& sigma : level) {
      const ClosedInterval c = iota(sigma);
      target.emplace_back(c.left, c.right);
      const OpenInterval outer{c.left, c.right};
      Element element;
      for (const auto& atom : assignment.atoms()) {
        const auto& iv = atom.interval;
        // Only atoms meeting the cylinder can be inside it.
        if (iv.empty() || iv.right <= c.left || c.right <= iv.left) continue;
        if (bi_properly_contains(outer, iv, fuel) == Containment::Affirmed) {
          element.push_back(atom.mask);
          covered.push_back(iv);
        }
      }
      event_level.elements.push_back(std::move(element));
    }
    const IntervalSet target_set(std::move(target));
    const IntervalSet covered_set = IntervalSet(std::move(covered)).intersect(target_set);
    const Dyadic deficit = target_set.measure() - covered_set.measure();
    out.total_deficit += deficit;
    out.deficit.push_back(deficit);
    out.test.levels.push_back(std::move(event_level));
  }
  return out;
}

}  // namespace bmdim
