#pragma once

#include <utility>
#include <vector>

namespace uniflow::num {

/// Finite union of closed intervals with sorted, pairwise-disjoint parts.
/// Endpoints come from root isolation, so they carry the isolation tolerance;
/// boundary points have measure zero and open/closed flags are not tracked.
class IntervalUnion {
public:
  IntervalUnion() = default;
  static IntervalUnion single(double a, double b);
  static IntervalUnion from_pieces(std::vector<std::pair<double, double>> pieces);

  const std::vector<std::pair<double, double>>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  int components() const { return static_cast<int>(parts_.size()); }

  double measure() const;
  bool contains(double t) const;

  IntervalUnion unite(const IntervalUnion& o) const;
  IntervalUnion intersect(const IntervalUnion& o) const;
  IntervalUnion clip(double lo, double hi) const;
  /// Complement within [lo, hi].
  IntervalUnion complement_in(double lo, double hi) const;

private:
  std::vector<std::pair<double, double>> parts_;
  void normalize();
};

}  // namespace uniflow::num
