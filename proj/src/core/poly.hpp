#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "exact.hpp"

namespace uniflow::num {

/// Dense univariate polynomial, coefficients in ascending degree order.
/// Instantiated with double (general use) and exact::Rational (exact wedge
/// expansion when all inputs are rational).
template <class T>
class BasicPoly {
public:
  BasicPoly() : c_{} {}
  explicit BasicPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) {}
  static BasicPoly constant(const T& v) { return BasicPoly(std::vector<T>{v}); }

  const std::vector<T>& coeffs() const { return c_; }
  bool is_zero() const {
    for (auto& v : c_)
      if (!(v == T(0))) return false;
    return true;
  }
  int degree() const {  // -1 for the zero polynomial
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i)
      if (!(c_[i] == T(0))) return i;
    return -1;
  }
  T coeff(size_t i) const { return i < c_.size() ? c_[i] : T(0); }

  T eval(const T& x) const {
    T acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  BasicPoly operator+(const BasicPoly& o) const {
    std::vector<T> r(std::max(c_.size(), o.c_.size()), T(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] = r[i] + c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] + o.c_[i];
    return BasicPoly(std::move(r));
  }
  BasicPoly operator-(const BasicPoly& o) const {
    std::vector<T> r(std::max(c_.size(), o.c_.size()), T(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] = r[i] + c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] - o.c_[i];
    return BasicPoly(std::move(r));
  }
  BasicPoly operator*(const BasicPoly& o) const {
    if (c_.empty() || o.c_.empty()) return BasicPoly();
    std::vector<T> r(c_.size() + o.c_.size() - 1, T(0));
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == T(0)) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
    }
    return BasicPoly(std::move(r));
  }
  BasicPoly operator*(const T& s) const {
    std::vector<T> r(c_);
    for (auto& v : r) v = v * s;
    return BasicPoly(std::move(r));
  }
  BasicPoly operator-() const { return *this * T(-1); }

  BasicPoly derivative() const {
    if (c_.size() <= 1) return BasicPoly();
    std::vector<T> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * T(static_cast<long>(i));
    return BasicPoly(std::move(r));
  }

private:
  std::vector<T> c_;
};

using Poly = BasicPoly<double>;
using RatPoly = BasicPoly<exact::Rational>;

Poly to_double_poly(const RatPoly& p);

/// Drop trailing coefficients below rel_tol * max|c|.
Poly trimmed(const Poly& p, double rel_tol = 1e-13);

// ---------------------------------------------------------------------------
// Real root isolation on an interval.
//
// Primary method: Sturm sequences with normalized remainders, bisection down
// to `endpoint_tol`. When the chain degenerates numerically the companion
// matrix spectrum (Eigen) is used instead; tests cross-check the two.
// ---------------------------------------------------------------------------

struct RootOptions {
  double endpoint_tol = 1e-12;
  bool force_companion = false;  // test hook
};

/// Distinct real roots of p in [lo, hi], ascending, each located within
/// endpoint_tol. Multiple roots are reported once.
std::vector<double> real_roots_in_interval(const Poly& p, double lo, double hi,
                                           const RootOptions& opt = {});

/// max |p| over [lo, hi], attained at an endpoint or a critical point.
double sup_abs_on_interval(const Poly& p, double lo, double hi);

/// (min, max) of p over [lo, hi].
std::pair<double, double> range_on_interval(const Poly& p, double lo, double hi);

}  // namespace uniflow::num
