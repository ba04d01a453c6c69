#include "good_functions.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace uniflow::good {

using num::IntervalUnion;
using num::Poly;
using num::RatPoly;

double sup_abs(const PolyFunction& f, double a, double b) {
  if (f.sqrt_wrapped) {
    auto [mn, mx] = num::range_on_interval(f.inner, a, b);
    return std::sqrt(std::max(0.0, mx));
  }
  return num::sup_abs_on_interval(f.inner, a, b);
}

IntervalUnion sublevel_set(const PolyFunction& f, double a, double b, double eps) {
  if (!(eps > 0)) fail(Errc::precondition, "sublevel threshold must be positive");
  if (!(a < b)) return IntervalUnion();

  std::vector<double> cuts{a, b};
  if (f.sqrt_wrapped) {
    Poly shifted = f.inner - Poly::constant(eps * eps);
    for (double r : num::real_roots_in_interval(shifted, a, b)) cuts.push_back(r);
  } else {
    Poly up = f.inner - Poly::constant(eps);
    Poly dn = f.inner + Poly::constant(eps);
    for (double r : num::real_roots_in_interval(up, a, b)) cuts.push_back(r);
    for (double r : num::real_roots_in_interval(dn, a, b)) cuts.push_back(r);
  }
  std::sort(cuts.begin(), cuts.end());

  std::vector<std::pair<double, double>> pieces;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i], hi = cuts[i + 1];
    if (!(hi > lo)) continue;
    double mid = 0.5 * (lo + hi);
    if (std::fabs(f.eval(mid)) < eps) pieces.emplace_back(lo, hi);
  }
  return IntervalUnion::from_pieces(std::move(pieces));
}

double sublevel_measure(const PolyFunction& f, double a, double b, double eps) {
  return sublevel_set(f, a, b, eps).measure();
}

GoodnessConstants polynomial_goodness_constants(int k) {
  if (k < 1) fail(Errc::precondition, "degree must be at least 1");
  return {k * std::pow(k + 1.0, 1.0 / k), 1.0 / k};
}

GoodnessCertificate verify_goodness(const PolyFunction& f, double c, double alpha, double a,
                                    double b, const SamplingPlan& plan) {
  GoodnessCertificate cert;
  cert.c = c;
  cert.alpha = alpha;
  cert.a = a;
  cert.b = b;

  Rng rng(plan.seed);
  std::vector<std::pair<double, double>> subs{{a, b}};
  for (int i = 0; i < plan.subintervals; ++i) {
    double x = rng.real_in(a, b), y = rng.real_in(a, b);
    if (x > y) std::swap(x, y);
    if (y - x < 1e-6 * (b - a)) continue;
    subs.emplace_back(x, y);
  }

  for (auto [lo, hi] : subs) {
    double sup = sup_abs(f, lo, hi);
    if (!(sup > 0)) continue;  // zero function: the bound is vacuous
    for (int j = 0; j < plan.eps_count; ++j) {
      // log-spaced in [1e-6, 1] * sup
      double frac = plan.eps_count == 1 ? 1.0
                                        : std::pow(10.0, -6.0 * (plan.eps_count - 1 - j) /
                                                              (plan.eps_count - 1));
      double eps = sup * frac;
      double measured = sublevel_measure(f, lo, hi, eps);
      double bound = c * std::pow(eps / sup, alpha) * (hi - lo);
      double ratio = bound > 0 ? measured / bound : (measured > 0 ? 1e300 : 0.0);
      ++cert.checks;
      if (ratio > cert.worst_ratio) {
        cert.worst_ratio = ratio;
        cert.worst_sub_a = lo;
        cert.worst_sub_b = hi;
        cert.worst_eps = eps;
      }
    }
  }
  cert.pass = cert.worst_ratio <= 1.0 + tols().goodness_slack;
  return cert;
}

std::pair<PolyFunction, GoodnessConstants> sqrt_goodness(const PolyFunction& f, double c,
                                                         double alpha, double a, double b) {
  if (f.sqrt_wrapped) fail(Errc::precondition, "function is already a square root");
  auto [mn, mx] = num::range_on_interval(f.inner, a, b);
  if (mn < -1e-12 * std::max(1.0, std::fabs(mx)))
    fail(Errc::precondition, "inner polynomial is negative on the domain");
  PolyFunction g;
  g.inner = f.inner;
  g.sqrt_wrapped = true;
  g.degree_bound = f.degree_bound;
  return {g, GoodnessConstants{c, 2.0 * alpha}};
}

// ---------------------------------------------------------------------------
// Covolume along a unipotent flow
// ---------------------------------------------------------------------------

namespace {

template <class T>
using PolyMat = std::vector<std::vector<num::BasicPoly<T>>>;

template <class T>
num::BasicPoly<T> poly_det(const PolyMat<T>& m) {
  const size_t n = m.size();
  if (n == 0) return num::BasicPoly<T>::constant(T(1));
  if (n == 1) return m[0][0];
  num::BasicPoly<T> acc;
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    PolyMat<T> minor;
    minor.reserve(n - 1);
    for (size_t i = 1; i < n; ++i) {
      std::vector<num::BasicPoly<T>> row;
      row.reserve(n - 1);
      for (size_t jj = 0; jj < n; ++jj)
        if (jj != j) row.push_back(m[i][jj]);
      minor.push_back(std::move(row));
    }
    num::BasicPoly<T> term = m[0][j] * poly_det(minor);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

int matrix_nilpotency_index(const Eigen::MatrixXd& n, double tol) {
  const int k = static_cast<int>(n.rows());
  double base = std::max(1.0, n.norm());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(k, k);
  for (int m = 1; m <= k; ++m) {
    p = p * n;
    if (p.norm() <= tol * std::pow(base, m)) return m;
  }
  return -1;
}

// Entries of exp(t n) as polynomials (finite series; n nilpotent).
PolyMat<double> flow_matrix_polys(const Eigen::MatrixXd& n, int index) {
  const int k = static_cast<int>(n.rows());
  std::vector<Eigen::MatrixXd> powers{Eigen::MatrixXd::Identity(k, k)};
  double factorial = 1;
  std::vector<double> inv_f{1.0};
  for (int p = 1; p < index; ++p) {
    powers.push_back(powers.back() * n);
    factorial *= p;
    inv_f.push_back(1.0 / factorial);
  }
  PolyMat<double> out(static_cast<size_t>(k), std::vector<Poly>(static_cast<size_t>(k)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      std::vector<double> coeffs(static_cast<size_t>(index));
      for (int p = 0; p < index; ++p) coeffs[static_cast<size_t>(p)] = powers[static_cast<size_t>(p)](i, j) * inv_f[static_cast<size_t>(p)];
      out[static_cast<size_t>(i)][static_cast<size_t>(j)] = num::trimmed(Poly(std::move(coeffs)), 1e-14);
    }
  return out;
}

}  // namespace

PolyFunction covolume_flow_function_weighted(const Eigen::MatrixXd& nilpotent,
                                             const lattice::LatticeBasis& delta,
                                             const Eigen::MatrixXd& gram) {
  const int k = static_cast<int>(nilpotent.rows());
  const int m = delta.rank();
  if (m == 0) fail(Errc::precondition, "covolume flow of a rank-0 lattice");
  int index = matrix_nilpotency_index(nilpotent, tols().nilpotency);
  if (index < 0) fail(Errc::not_nilpotent, "flow generator is not nilpotent");

  auto a = flow_matrix_polys(nilpotent, index);
  // Columns: c_i(t) = A(t) gamma_i.
  std::vector<std::vector<Poly>> cols(static_cast<size_t>(m), std::vector<Poly>(static_cast<size_t>(k)));
  for (int i = 0; i < m; ++i)
    for (int row = 0; row < k; ++row) {
      Poly acc;
      for (int j = 0; j < k; ++j) {
        double g = delta.vectors[static_cast<size_t>(i)](j);
        if (g == 0.0) continue;
        acc = acc + a[static_cast<size_t>(row)][static_cast<size_t>(j)] * g;
      }
      cols[static_cast<size_t>(i)][static_cast<size_t>(row)] = acc;
    }
  // M(t) = V(t)^T G V(t).
  PolyMat<double> mm(static_cast<size_t>(m), std::vector<Poly>(static_cast<size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      Poly acc;
      for (int r = 0; r < k; ++r)
        for (int s = 0; s < k; ++s) {
          double g = gram(r, s);
          if (g == 0.0) continue;
          acc = acc + cols[static_cast<size_t>(i)][static_cast<size_t>(r)] * cols[static_cast<size_t>(j)][static_cast<size_t>(s)] * g;
        }
      mm[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc;
      if (j != i) mm[static_cast<size_t>(j)][static_cast<size_t>(i)] = acc;
    }
  PolyFunction f;
  f.inner = num::trimmed(poly_det(mm), 1e-13);
  f.sqrt_wrapped = true;
  f.degree_bound = std::max(0, k * (k - 1) * m / 2);  // conservative
  return f;
}

PolyFunction covolume_flow_function(const Eigen::MatrixXd& nilpotent,
                                    const lattice::LatticeBasis& delta) {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(nilpotent.rows(), nilpotent.cols());
  return covolume_flow_function_weighted(nilpotent, delta, id);
}

PolyFunction covolume_flow_function(const lie::AlgebraVector& u,
                                    const std::vector<lie::AlgebraVector>& delta) {
  if (delta.empty()) fail(Errc::precondition, "covolume flow of a rank-0 lattice");
  const auto& spec = *u.spec;
  lattice::LatticeBasis b;
  b.ambient_dim = spec.dim();
  for (auto& v : delta) {
    if (v.spec.get() != u.spec.get()) fail(Errc::spec_mismatch, "mixed specs in covolume flow");
    b.vectors.push_back(v.coords);
  }
  return covolume_flow_function_weighted(spec.ad(u.coords), b, spec.killing_gram());
}

num::RatPoly covolume_flow_squared_exact(const std::vector<std::vector<exact::Rational>>& ad,
                                         const std::vector<std::vector<exact::Rational>>& basis,
                                         const std::vector<std::vector<exact::Rational>>& gram,
                                         int nilpotency_index) {
  using exact::Rational;
  using RP = num::RatPoly;
  const int k = static_cast<int>(ad.size());
  const int m = static_cast<int>(basis.size());

  // Powers of ad with inverse factorials.
  std::vector<std::vector<std::vector<Rational>>> powers;
  std::vector<std::vector<Rational>> ident(static_cast<size_t>(k),
                                           std::vector<Rational>(static_cast<size_t>(k), Rational(0)));
  for (int i = 0; i < k; ++i) ident[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  powers.push_back(ident);
  for (int p = 1; p < nilpotency_index; ++p) {
    auto& prev = powers.back();
    std::vector<std::vector<Rational>> cur(static_cast<size_t>(k),
                                           std::vector<Rational>(static_cast<size_t>(k), Rational(0)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        Rational acc(0);
        for (int l = 0; l < k; ++l) acc += prev[static_cast<size_t>(i)][static_cast<size_t>(l)] * ad[static_cast<size_t>(l)][static_cast<size_t>(j)];
        cur[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc;
      }
    powers.push_back(std::move(cur));
  }
  Rational factorial(1);
  std::vector<Rational> inv_f{Rational(1)};
  for (int p = 1; p < nilpotency_index; ++p) {
    factorial *= p;
    inv_f.push_back(1 / factorial);
  }

  auto entry = [&](int i, int j) {
    std::vector<Rational> c(static_cast<size_t>(nilpotency_index), Rational(0));
    for (int p = 0; p < nilpotency_index; ++p)
      c[static_cast<size_t>(p)] = powers[static_cast<size_t>(p)][static_cast<size_t>(i)][static_cast<size_t>(j)] * inv_f[static_cast<size_t>(p)];
    return RP(std::move(c));
  };

  std::vector<std::vector<RP>> cols(static_cast<size_t>(m), std::vector<RP>(static_cast<size_t>(k)));
  for (int i = 0; i < m; ++i)
    for (int row = 0; row < k; ++row) {
      RP acc;
      for (int j = 0; j < k; ++j) {
        if (basis[static_cast<size_t>(i)][static_cast<size_t>(j)] == 0) continue;
        acc = acc + entry(row, j) * basis[static_cast<size_t>(i)][static_cast<size_t>(j)];
      }
      cols[static_cast<size_t>(i)][static_cast<size_t>(row)] = acc;
    }
  PolyMat<Rational> mm(static_cast<size_t>(m), std::vector<RP>(static_cast<size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      RP acc;
      for (int r = 0; r < k; ++r)
        for (int s = 0; s < k; ++s) {
          if (gram[static_cast<size_t>(r)][static_cast<size_t>(s)] == 0) continue;
          acc = acc + cols[static_cast<size_t>(i)][static_cast<size_t>(r)] * cols[static_cast<size_t>(j)][static_cast<size_t>(s)] *
                      gram[static_cast<size_t>(r)][static_cast<size_t>(s)];
        }
      mm[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc;
      if (j != i) mm[static_cast<size_t>(j)][static_cast<size_t>(i)] = acc;
    }
  return poly_det(mm);
}

ConstancyResult constancy_test(const PolyFunction& f) {
  const auto& c = f.inner.coeffs();
  double c0 = c.empty() ? 0.0 : c[0];
  double tol = tols().constancy_rel * std::max(1.0, std::fabs(c0));
  for (size_t i = 1; i < c.size(); ++i)
    if (std::fabs(c[i]) > tol) return {false, 0.0};
  return {true, f.eval(0.0)};
}

}  // namespace uniflow::good
