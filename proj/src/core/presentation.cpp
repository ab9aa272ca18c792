#include "presentation.hpp"

#include "errors.hpp"

namespace bmdim {

namespace mp = boost::multiprecision;

Presentation Presentation::of_rational(const Rational& q) {
  Dyadic exact;
  if (to_dyadic(q, exact)) return of_dyadic(exact);
  return Presentation([q](std::size_t n) {
    const std::uint64_t e = n + 1;
    // floor(q * 2^e) via integer division; q is not dyadic so the floor is strict.
    BigInt num = mp::numerator(q) << e;
    BigInt fl = num / mp::denominator(q);
    if (num.sign() < 0 && fl * mp::denominator(q) != num) fl -= 1;
    return OpenInterval{Dyadic(fl - 1, e), Dyadic(fl + 1, e)};
  });
}

Presentation Presentation::of_dyadic(const Dyadic& d) {
  return Presentation([d](std::size_t n) {
    const Dyadic r = Dyadic::pow2(-static_cast<std::int64_t>(n) - 1);
    return OpenInterval{d - r, d + r};
  });
}

Presentation Presentation::from_approximations(std::function<Dyadic(std::size_t)> approx) {
  return Presentation([approx = std::move(approx)](std::size_t n) {
    const Dyadic a = approx(n + 2);
    const Dyadic r = Dyadic::pow2(-static_cast<std::int64_t>(n) - 2);
    return OpenInterval{a - r, a + r};
  });
}

OpenInterval Presentation::interval(std::size_t n) const {
  OpenInterval iv = gen_(n);
  if (!(iv.left < iv.right)) fail(ErrorKind::Structural, "presentation interval " + std::to_string(n) + " is empty");
  if (iv.diameter() > Dyadic::pow2(-static_cast<std::int64_t>(n)))
    fail(ErrorKind::Structural, "presentation interval " + std::to_string(n) + " exceeds diameter 2^-n");
  return iv;
}

std::optional<std::size_t> separation_index(const Presentation& a, const Presentation& b, std::size_t fuel) {
  // Some pair (n, m) with n, m < s has right(I_n) < left(J_m) iff the smallest
  // right endpoint seen for a is below the largest left endpoint seen for b.
  std::optional<Dyadic> min_right;
  std::optional<Dyadic> max_left;
  for (std::size_t s = 0; s < fuel; ++s) {
    OpenInterval i = a.interval(s);
    OpenInterval j = b.interval(s);
    if (!min_right || i.right < *min_right) min_right = std::move(i.right);
    if (!max_left || *max_left < j.left) max_left = std::move(j.left);
    if (*min_right < *max_left) return s + 1;
  }
  return std::nullopt;
}

Comparison compare_presentations(const Presentation& a, const Presentation& b, std::size_t fuel) {
  require(fuel >= 1, ErrorKind::Range, "compare_presentations: fuel must be >= 1");
  return separation_index(a, b, fuel) ? Comparison::StrictlyLess : Comparison::Unresolved;
}

Containment bi_properly_contains(const Presentation& outer_left, const Presentation& outer_right,
                                 const Presentation& inner_left, const Presentation& inner_right, std::size_t fuel) {
  if (compare_presentations(outer_left, inner_left, fuel) == Comparison::StrictlyLess &&
      compare_presentations(inner_right, outer_right, fuel) == Comparison::StrictlyLess)
    return Containment::Affirmed;
  return Containment::Unresolved;
}

Containment bi_properly_contains(const OpenInterval& outer, const HalfOpenInterval& inner, std::size_t fuel) {
  return bi_properly_contains(Presentation::of_dyadic(outer.left), Presentation::of_dyadic(outer.right),
                              Presentation::of_dyadic(inner.left), Presentation::of_dyadic(inner.right), fuel);
}

EndpointVerdict nested_endpoint_detector(const std::vector<RationalOpenInterval>& prefix, const Dyadic& tolerance) {
  require(tolerance.sign() >= 0, ErrorKind::Range, "nested_endpoint_detector: negative tolerance");
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    require(prefix[i].left < prefix[i].right, ErrorKind::Structural, "nested_endpoint_detector: empty interval");
    if (i > 0)
      require(prefix[i - 1].left <= prefix[i].left && prefix[i].right <= prefix[i - 1].right, ErrorKind::Structural,
              "nested_endpoint_detector: interval " + std::to_string(i) + " is not nested in its predecessor");
  }
  EndpointVerdict verdict;
  if (prefix.size() < 2) return verdict;

  const Rational tol = tolerance.to_rational();
  const auto& last = prefix.back();
  bool left_const = true;
  bool right_const = true;
  for (std::size_t i = prefix.size() / 2; i < prefix.size(); ++i) {
    if (mp::abs(prefix[i].left - last.left) > tol) left_const = false;
    if (mp::abs(prefix[i].right - last.right) > tol) right_const = false;
  }
  // Both endpoints frozen means the intervals stopped shrinking, so the
  // intersection is not empty and the dichotomy says nothing.
  if (left_const && !right_const) {
    verdict.kind = EndpointVerdict::Kind::LeftConstant;
    verdict.value = last.left;
  } else if (right_const && !left_const) {
    verdict.kind = EndpointVerdict::Kind::RightConstant;
    verdict.value = last.right;
  }
  return verdict;
}

}  // namespace bmdim
