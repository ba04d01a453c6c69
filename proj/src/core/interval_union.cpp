#include "interval_union.hpp"

#include <algorithm>

namespace uniflow::num {

IntervalUnion IntervalUnion::single(double a, double b) {
  IntervalUnion u;
  if (a < b) u.parts_.emplace_back(a, b);
  return u;
}

IntervalUnion IntervalUnion::from_pieces(std::vector<std::pair<double, double>> pieces) {
  IntervalUnion u;
  u.parts_ = std::move(pieces);
  u.normalize();
  return u;
}

void IntervalUnion::normalize() {
  std::erase_if(parts_, [](auto& p) { return !(p.first < p.second); });
  std::sort(parts_.begin(), parts_.end());
  std::vector<std::pair<double, double>> merged;
  for (auto& p : parts_) {
    if (!merged.empty() && p.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, p.second);
    else
      merged.push_back(p);
  }
  parts_ = std::move(merged);
}

double IntervalUnion::measure() const {
  double m = 0;
  for (auto& p : parts_) m += p.second - p.first;
  return m;
}

bool IntervalUnion::contains(double t) const {
  for (auto& p : parts_)
    if (t >= p.first && t <= p.second) return true;
  return false;
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& o) const {
  std::vector<std::pair<double, double>> all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  return from_pieces(std::move(all));
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& o) const {
  std::vector<std::pair<double, double>> out;
  size_t i = 0, j = 0;
  while (i < parts_.size() && j < o.parts_.size()) {
    double lo = std::max(parts_[i].first, o.parts_[j].first);
    double hi = std::min(parts_[i].second, o.parts_[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (parts_[i].second < o.parts_[j].second)
      ++i;
    else
      ++j;
  }
  return from_pieces(std::move(out));
}

IntervalUnion IntervalUnion::clip(double lo, double hi) const {
  return intersect(single(lo, hi));
}

IntervalUnion IntervalUnion::complement_in(double lo, double hi) const {
  std::vector<std::pair<double, double>> out;
  double cursor = lo;
  for (auto& p : parts_) {
    if (p.second <= lo || p.first >= hi) continue;
    double a = std::max(p.first, lo), b = std::min(p.second, hi);
    if (cursor < a) out.emplace_back(cursor, a);
    cursor = std::max(cursor, b);
  }
  if (cursor < hi) out.emplace_back(cursor, hi);
  return from_pieces(std::move(out));
}

}  // namespace uniflow::num
