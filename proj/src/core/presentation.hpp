#pragma once

#include "dyadic.hpp"
#include "intervals.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace bmdim {

/// Pull-based presentation of a real: interval(n) is an open interval of
/// diameter <= 2^-n containing the presented value. Every interval handed out
/// is validated; a generator that violates the diameter bound raises
/// Error(Structural).
class Presentation {
 public:
  using Generator = std::function<OpenInterval(std::size_t)>;

  explicit Presentation(Generator gen) : gen_(std::move(gen)) {}

  static Presentation of_rational(const Rational& q);
  static Presentation of_dyadic(const Dyadic& d);
  /// From approximations with |approx(k) - x| < 2^-k.
  static Presentation from_approximations(std::function<Dyadic(std::size_t)> approx);

  OpenInterval interval(std::size_t n) const;

 private:
  Generator gen_;
};

enum class Comparison { StrictlyLess, Unresolved };

/// Semidecides a < b: searches index pairs below `fuel` for I_n entirely to
/// the left of J_m. Unresolved means "not yet", never "not less".
Comparison compare_presentations(const Presentation& a, const Presentation& b, std::size_t fuel);

/// Number of indices pulled before StrictlyLess was established; nullopt when
/// unresolved within fuel.
std::optional<std::size_t> separation_index(const Presentation& a, const Presentation& b, std::size_t fuel);

enum class Containment { Affirmed, Unresolved };

/// Semidecides c < a and b < d for outer (c,d) and inner [a,b).
Containment bi_properly_contains(const Presentation& outer_left, const Presentation& outer_right,
                                 const Presentation& inner_left, const Presentation& inner_right, std::size_t fuel);
Containment bi_properly_contains(const OpenInterval& outer, const HalfOpenInterval& inner, std::size_t fuel);

struct RationalOpenInterval {
  Rational left;
  Rational right;
};

struct EndpointVerdict {
  enum class Kind { LeftConstant, RightConstant, Inconclusive };
  Kind kind = Kind::Inconclusive;
  Rational value;
};

/// Finite-prefix reading of the nested-interval dichotomy: reports an endpoint
/// that stayed within `tolerance` of its final value over the trailing half of
/// the prefix while the other endpoint moved. Non-nested input is an error.
EndpointVerdict nested_endpoint_detector(const std::vector<RationalOpenInterval>& prefix, const Dyadic& tolerance);

}  // namespace bmdim
