#include "intervals.hpp"

#include "errors.hpp"

#include <algorithm>

namespace bmdim {

HalfOpenInterval::HalfOpenInterval(Dyadic l, Dyadic r) : left(std::move(l)), right(std::move(r)) {
  require(left <= right, ErrorKind::Structural, "half-open interval with left > right");
}

std::string HalfOpenInterval::to_string() const { return "[" + left.to_string() + ", " + right.to_string() + ")"; }

IntervalSet::IntervalSet(std::vector<HalfOpenInterval> pieces) {
  std::erase_if(pieces, [](const HalfOpenInterval& p) { return p.empty(); });
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.left < b.left; });
  for (auto& p : pieces) {
    if (!pieces_.empty() && p.left <= pieces_.back().right) {
      if (pieces_.back().right < p.right) pieces_.back().right = p.right;
    } else {
      pieces_.push_back(std::move(p));
    }
  }
}

Dyadic IntervalSet::measure() const {
  Dyadic total;
  for (const auto& p : pieces_) total += p.length();
  return total;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  std::vector<HalfOpenInterval> all = pieces_;
  all.insert(all.end(), o.pieces_.begin(), o.pieces_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  std::vector<HalfOpenInterval> out;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < o.pieces_.size()) {
    const Dyadic& l = max(pieces_[i].left, o.pieces_[j].left);
    const Dyadic& r = min(pieces_[i].right, o.pieces_[j].right);
    if (l < r) out.emplace_back(l, r);
    if (pieces_[i].right < o.pieces_[j].right)
      ++i;
    else
      ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::complement() const {
  std::vector<HalfOpenInterval> out;
  Dyadic cursor(0);
  for (const auto& p : pieces_) {
    if (cursor < p.left) out.emplace_back(cursor, p.left);
    cursor = p.right;
  }
  if (cursor < Dyadic(1)) out.emplace_back(cursor, Dyadic(1));
  return IntervalSet(std::move(out));
}

ClosedInterval iota(std::string_view sigma) {
  BigInt left = 0;
  for (char c : sigma) {
    require(c == '0' || c == '1', ErrorKind::Structural, "iota: bit string must contain only 0/1");
    left = (left << 1) + (c == '1' ? 1 : 0);
  }
  const std::uint64_t e = sigma.size();
  return ClosedInterval{Dyadic(left, e), Dyadic(left + 1, e)};
}

}  // namespace bmdim
