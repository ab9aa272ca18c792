#pragma once

#include "intervals.hpp"
#include "presentation.hpp"
#include "walk.hpp"
#include "wiener_events.hpp"

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bmdim {

struct AtomCell {
  std::string mask;  // mask[k] is membership in generator k (oldest first)
  HalfOpenInterval interval;
};

/// The finite-stage homomorphism: each atom of the algebra generated by the
/// first `depth` generators gets a half-open interval; the intervals tile
/// [0,1) exactly, ordered left to right, and each length is within
/// error_budget of the atom's Wiener measure.
class IntervalAssignment {
 public:
  /// Depth 0: the whole space maps to [0,1).
  static IntervalAssignment root();

  std::size_t depth() const { return depth_; }
  const std::vector<AtomCell>& atoms() const { return atoms_; }
  const HalfOpenInterval& interval(std::string_view mask) const;
  const Dyadic& error_budget() const { return budget_; }

  /// Audit table with header "mask,left,right,exponent": endpoints are
  /// integer numerators over the common denominator 2^exponent.
  std::string to_table() const;

 private:
  friend IntervalAssignment extend_phi(const IntervalAssignment&, const std::map<std::string, Dyadic>&, const Dyadic&);

  std::size_t depth_ = 0;
  std::vector<AtomCell> atoms_;
  std::unordered_map<std::string, std::size_t> index_;
  Dyadic budget_;
};

/// Depth 1: mask "1" -> [0, mu), mask "0" -> [mu, 1).
IntervalAssignment phi_base(const Dyadic& mu_a1, const Dyadic& measure_error = Dyadic(0));

/// Splits every atom [x, x') into mask+"1" -> [x, x + split) and
/// mask+"0" -> [x + split, x'). split_measures is keyed by the parent mask;
/// a split outside [0, x' - x] is a consistency error. measure_error is the
/// accuracy of the split measures and is added to the error budget.
IntervalAssignment extend_phi(const IntervalAssignment& assignment, const std::map<std::string, Dyadic>& split_measures,
                              const Dyadic& measure_error = Dyadic(0));

using Element = std::vector<std::string>;

/// Union of the atom intervals of the element, merged.
IntervalSet phi_of_element(const IntervalAssignment& assignment, const Element& element);

struct PhiBuildOptions {
  unsigned precision = 10;  // split measures accurate to 2^-precision
  MeasureOptions measure;
};

/// Assignments at every depth 0..n for an ordered generator list.
class PhiConstruction {
 public:
  static PhiConstruction build(std::vector<GeneratorEvent> generators, std::size_t depth, const PhiBuildOptions& options);
  /// From a prepared chain (depth i at position i); generators optional.
  static PhiConstruction from_chain(std::vector<IntervalAssignment> chain, std::vector<GeneratorEvent> generators = {});

  std::size_t depth() const { return chain_.size() - 1; }
  const IntervalAssignment& at(std::size_t depth) const;
  const IntervalAssignment& final() const { return chain_.back(); }
  const std::vector<GeneratorEvent>& generators() const { return generators_; }

 private:
  std::vector<IntervalAssignment> chain_;
  std::vector<GeneratorEvent> generators_;
};

/// Split measure rule: bracket midpoint rounded to the 2^-precision grid and
/// clamped into [0, parent_length].
Dyadic split_from_estimate(const MeasureEstimate& estimate, unsigned precision, const Dyadic& parent_length);

/// Atom interval containing the path at the given depth. Throws
/// Error(Boundary) when the path sits exactly on a generator's threshold.
HalfOpenInterval phi_point(const WalkPath& path, const PhiConstruction& phi, std::size_t depth);
/// Intervals at depths 0..depth (nested).
std::vector<HalfOpenInterval> phi_point_chain(const WalkPath& path, const PhiConstruction& phi, std::size_t depth);

struct TestLevel {
  std::vector<Element> elements;
};

/// Finite truncation of a test over the generated algebra: level i (0-based)
/// has declared bound 2^-(i+1).
struct MLTest {
  std::vector<TestLevel> levels;
  Dyadic slack;

  static Dyadic bound(std::size_t level) { return Dyadic::pow2(-static_cast<std::int64_t>(level) - 1); }
};

struct IntervalTestLevel {
  std::vector<OpenInterval> open_intervals;  // interiors of the image pieces
  Dyadic length;
  Dyadic bound;
  Dyadic allowance;  // bound + slack + atoms * error_budget
};

struct IntervalTest {
  std::vector<IntervalTestLevel> levels;
};

/// Maps every level through Phi. A level whose image is longer than its
/// allowance is an invalid test (Error(InvalidTest)).
IntervalTest transfer_test_forward(const MLTest& test, const IntervalAssignment& assignment);

/// Level i holds cylinders as bit strings.
using CylinderTest = std::vector<std::vector<std::string>>;

struct BackTransfer {
  MLTest test;                  // one element per cylinder: the atoms enumerated inside it
  std::vector<Dyadic> deficit;  // per level: Lebesgue measure of the cylinders not yet covered
  Dyadic total_deficit;
};

/// Enumerates, within fuel, the atoms whose image is bi-properly contained in
/// iota of each cylinder.
BackTransfer transfer_test_back(const CylinderTest& cylinders, const IntervalAssignment& assignment, std::size_t fuel);

}  // namespace bmdim
