#pragma once

#include "dyadic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bmdim {

/// [left, right) with exact dyadic endpoints; empty iff left == right.
struct HalfOpenInterval {
  Dyadic left;
  Dyadic right;

  HalfOpenInterval() = default;
  HalfOpenInterval(Dyadic l, Dyadic r);

  bool empty() const { return left == right; }
  Dyadic length() const { return right - left; }
  bool contains(const Dyadic& x) const { return left <= x && x < right; }
  bool contains(const HalfOpenInterval& o) const { return o.empty() || (left <= o.left && o.right <= right); }
  std::string to_string() const;

  friend bool operator==(const HalfOpenInterval&, const HalfOpenInterval&) = default;
};

/// Closed interval [left, right]; the images of cylinders under iota.
struct ClosedInterval {
  Dyadic left;
  Dyadic right;

  Dyadic length() const { return right - left; }
  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

/// Open interval (left, right).
struct OpenInterval {
  Dyadic left;
  Dyadic right;

  Dyadic diameter() const { return right - left; }
  friend bool operator==(const OpenInterval&, const OpenInterval&) = default;
};

/// Finite union of half-open intervals, kept as sorted, pairwise disjoint,
/// non-adjacent, non-empty pieces, so equality of sets is equality of pieces.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<HalfOpenInterval> pieces);

  static IntervalSet unit() { return IntervalSet({HalfOpenInterval(0, 1)}); }

  const std::vector<HalfOpenInterval>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  Dyadic measure() const;

  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet intersect(const IntervalSet& o) const;
  /// Complement relative to [0,1).
  IntervalSet complement() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<HalfOpenInterval> pieces_;
};

/// iota(sigma): [0,1] halved once per bit, 0 = left half.
ClosedInterval iota(std::string_view sigma);

}  // namespace bmdim
