#pragma once

// Independent test oracles: dense sampling and brute-force enumerations kept
// deliberately separate from the implementation paths they check.

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

#include "flow_lab.hpp"
#include "good_functions.hpp"
#include "lattice_geometry.hpp"
#include "lie_core.hpp"

namespace oracles {

/// Grid estimate of m({t in [a,b] : |f(t)| < eps}).
inline double dense_sublevel_measure(const uniflow::good::PolyFunction& f, double a, double b,
                                     double eps, int points = 10000) {
  int hits = 0;
  for (int i = 0; i < points; ++i) {
    double t = a + (b - a) * (i + 0.5) / points;
    if (std::fabs(f.eval(t)) < eps) ++hits;
  }
  return (b - a) * hits / points;
}

/// Grid estimate of m({t in B : d1(h_t Lambda) < eps}) by brute-force d1 over
/// a coefficient box.
inline double dense_small_d1_measure(const uniflow::lattice::LatticeBasis& lam,
                                     const Eigen::MatrixXd& n, double b_lo, double b_hi,
                                     double eps, int points = 10000, long box = 6) {
  const int m = lam.rank();
  std::vector<std::vector<long>> coeffs;
  std::vector<long> cur(static_cast<size_t>(m), -box);
  while (true) {
    bool zero = true;
    for (long c : cur)
      if (c != 0) zero = false;
    if (!zero) coeffs.push_back(cur);
    int i = 0;
    for (; i < m; ++i) {
      if (cur[static_cast<size_t>(i)] < box) {
        ++cur[static_cast<size_t>(i)];
        break;
      }
      cur[static_cast<size_t>(i)] = -box;
    }
    if (i == m) break;
  }
  int hits = 0;
  for (int p = 0; p < points; ++p) {
    double t = b_lo + (b_hi - b_lo) * (p + 0.5) / points;
    Eigen::MatrixXd h = (t * n).exp();
    double best = 1e300;
    for (auto& a : coeffs) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(lam.ambient_dim);
      for (int i = 0; i < m; ++i) v += static_cast<double>(a[static_cast<size_t>(i)]) * lam.vectors[static_cast<size_t>(i)];
      best = std::min(best, (h * v).norm());
    }
    if (best < eps) ++hits;
  }
  return (b_hi - b_lo) * hits / points;
}

/// Grid estimate of the flow-lab bad-set measure, via direct matrix
/// conjugation and block logs (independent of the polynomial path).
inline double dense_bad_set_measure(const uniflow::flow::DiscreteGroupSpec& spec,
                                    const uniflow::flow::TrajectorySpec& traj, int points = 10000) {
  using namespace uniflow;
  auto ball = flow::enumerate_ball(spec);
  auto gi = traj.basepoint.inverse();
  std::vector<lie::FloatGroupElement> conj;
  for (auto& w : ball) conj.push_back(traj.basepoint * w.g.to_float() * gi);
  const auto& gram = spec.algebra->killing_gram();
  int hits = 0;
  for (int p = 0; p < points; ++p) {
    double t = traj.horizon * (p + 0.5) / points;
    auto ut = lie::exp_map(lie::AlgebraVector(traj.u.spec, t * traj.u.coords));
    auto uti = ut.inverse();
    bool bad = false;
    for (auto& h : conj) {
      lie::FloatGroupElement moved = ut * h * uti;
      auto x = lie::log_principal(spec.algebra, moved);
      if (!x) continue;
      double worst = 0;
      for (int f = 0; f < spec.algebra->n_factors() && !bad; ++f) {
        const int off = spec.algebra->factor_offset(f);
        const int d = spec.algebra->factor_dim_of(f);
        double q = x->coords.segment(off, d).dot(gram.block(off, off, d, d) *
                                                 x->coords.segment(off, d));
        worst = std::max(worst, std::sqrt(std::max(0.0, q)));
      }
      if (worst < traj.delta) {
        bad = true;
        break;
      }
    }
    if (bad) ++hits;
  }
  return traj.horizon * hits / points;
}

}  // namespace oracles
