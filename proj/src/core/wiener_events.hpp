#pragma once

#include "dyadic.hpp"
#include "walk.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bmdim {

/// The event {B_time < threshold}, time in (0,1].
struct GeneratorEvent {
  Rational time;
  Rational threshold;

  GeneratorEvent() = default;
  GeneratorEvent(Rational t, Rational y);
  std::string to_string() const;
  friend bool operator==(const GeneratorEvent&, const GeneratorEvent&) = default;
};

/// Intersection over k of generators[k] (mask[k] == '1') or its complement
/// (mask[k] == '0'). The empty mask is the whole space.
struct EventAtom {
  std::vector<GeneratorEvent> generators;
  std::string mask;
};

enum class MeasureMethod { Quadrature, MonteCarlo };

/// Bracket for a Wiener measure. Quadrature brackets are numerical error
/// bounds; Monte Carlo brackets are `confidence`-level intervals.
struct MeasureEstimate {
  Dyadic lower;
  Dyadic upper;
  MeasureMethod method = MeasureMethod::Quadrature;
  bool exact = false;          // syntactically empty, whole space, or otherwise exact
  std::uint64_t samples = 0;   // Monte Carlo sample count
  double confidence = 1.0;     // 0.999 for Monte Carlo brackets
  double estimate = 0.0;       // point estimate before snapping

  Dyadic width() const { return upper - lower; }
  Dyadic midpoint() const { return (lower + upper).half(); }
};

struct MeasureOptions {
  enum class Method { Auto, Quadrature, MonteCarlo };
  Method method = Method::Auto;
  std::uint64_t samples = 0;                 // Monte Carlo sample count; 0 = derive from precision
  std::uint64_t seed = 0;
  unsigned threads = 1;
  unsigned max_precision = 30;               // largest k accepted for precision 2^-k
  std::uint64_t sample_budget = 100'000'000;
  std::uint64_t node_budget = 200'000'000;   // total quadrature integrand evaluations
  unsigned max_quadrature_dim = 4;
};

/// Confidence level and two-sided normal quantile used for every Monte Carlo bracket.
inline constexpr double kMonteCarloConfidence = 0.999;
inline constexpr double kMonteCarloZ = 3.2905267314919255;

/// Wiener measure of the atom to within 2^-precision.
MeasureEstimate atom_measure(const EventAtom& atom, unsigned precision, const MeasureOptions& options = {});

/// True when the atom's constraints are contradictory at some time.
bool syntactically_empty(const EventAtom& atom);

/// Sample count that makes a 99.9% Monte Carlo bracket no wider than 2^-precision.
std::uint64_t monte_carlo_samples_for(unsigned precision);

struct Membership {
  enum class Kind { In, Out, Indeterminate };
  Kind kind = Kind::Indeterminate;
  double margin = 0.0;  // path value minus threshold
};

/// Exact decision of path(time) < threshold (squared comparison against sqrt(n)).
Membership path_in_event(const WalkPath& path, const GeneratorEvent& event);

struct NonatomicReport {
  bool pass = false;
  Dyadic max_upper;
  std::string argmax_mask;
  std::size_t atoms_evaluated = 0;
  std::size_t pruned = 0;
};

/// Max over the 2^depth atoms of the measure upper bound; pass iff <= bound.
NonatomicReport check_nonatomic(const std::vector<GeneratorEvent>& generators, std::size_t depth, const Dyadic& bound,
                                unsigned precision, const MeasureOptions& options = {}, std::size_t depth_cap = 16);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace bmdim
