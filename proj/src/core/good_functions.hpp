#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "interval_union.hpp"
#include "lattice_geometry.hpp"
#include "lie_core.hpp"
#include "poly.hpp"

namespace uniflow::good {

/// Polynomial or square-root-of-polynomial function of one variable.
struct PolyFunction {
  num::Poly inner;
  bool sqrt_wrapped = false;
  int degree_bound = 0;

  double eval(double t) const {
    double v = inner.eval(t);
    return sqrt_wrapped ? std::sqrt(std::max(0.0, v)) : v;
  }
  static PolyFunction poly(num::Poly p) {
    PolyFunction f;
    f.degree_bound = std::max(0, p.degree());
    f.inner = std::move(p);
    return f;
  }
};

/// sup |f| over [a,b], exact via critical points of the inner polynomial.
double sup_abs(const PolyFunction& f, double a, double b);

/// {t in [a,b] : |f(t)| < eps} as an interval union with isolated endpoints.
num::IntervalUnion sublevel_set(const PolyFunction& f, double a, double b, double eps);
double sublevel_measure(const PolyFunction& f, double a, double b, double eps);

struct GoodnessConstants {
  double c;
  double alpha;
};

/// Constants for polynomials of degree <= k: (k(k+1)^{1/k}, 1/k).
GoodnessConstants polynomial_goodness_constants(int k);

struct SamplingPlan {
  int subintervals = 50;  // random subintervals of [a,b]; [a,b] itself is always included
  int eps_count = 20;     // log-spaced eps per subinterval, spanning [1e-6, 1] * sup
  std::uint64_t seed = 1;
};

struct GoodnessCertificate {
  double c = 0, alpha = 0;
  double a = 0, b = 0;
  double worst_ratio = 0;
  double worst_sub_a = 0, worst_sub_b = 0, worst_eps = 0;
  int checks = 0;
  bool pass = false;
};

/// Grid-based falsification of the defining inequality
///   m({t in J' : |f| < eps}) <= C (eps / sup_{J'} |f|)^alpha m(J').
/// The certificate records the grid; this corroborates, it does not prove.
GoodnessCertificate verify_goodness(const PolyFunction& f, double c, double alpha, double a,
                                    double b, const SamplingPlan& plan = {});

/// Wraps f as sqrt(f) and transforms (C, alpha) -> (C, 2 alpha); f must be
/// nonnegative on [a,b] (checked by root isolation of the range).
std::pair<PolyFunction, GoodnessConstants> sqrt_goodness(const PolyFunction& f, double c,
                                                         double alpha, double a, double b);

/// t -> covolume of h(t) Delta, h(t) = exp(t n), as sqrt of the exact
/// Gram-determinant polynomial det(V(t)^T G V(t)). Euclidean G = I form.
PolyFunction covolume_flow_function(const Eigen::MatrixXd& nilpotent,
                                    const lattice::LatticeBasis& delta);

/// Same with an explicit inner-product Gram matrix on the ambient space.
PolyFunction covolume_flow_function_weighted(const Eigen::MatrixXd& nilpotent,
                                             const lattice::LatticeBasis& delta,
                                             const Eigen::MatrixXd& gram);

/// Algebra-coordinates form: h_t = Ad_{exp(tu)} with the Killing-derived
/// inner product of the spec.
PolyFunction covolume_flow_function(const lie::AlgebraVector& u,
                                    const std::vector<lie::AlgebraVector>& delta);

/// Exact-rational variant of the Gram-determinant expansion, for rational
/// flow matrices, basis vectors and Gram. Used as the exact cross-check.
num::RatPoly covolume_flow_squared_exact(const std::vector<std::vector<exact::Rational>>& ad,
                                         const std::vector<std::vector<exact::Rational>>& basis,
                                         const std::vector<std::vector<exact::Rational>>& gram,
                                         int nilpotency_index);

struct ConstancyResult {
  bool constant;
  double value;  // f(0) when constant
};

/// Constant iff all inner coefficients above degree 0 vanish to 1e-10
/// relative to the constant term.
ConstancyResult constancy_test(const PolyFunction& f);

}  // namespace uniflow::good
