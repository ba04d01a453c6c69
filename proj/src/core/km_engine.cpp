#include "km_engine.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace uniflow::km {

using lattice::LatticeBasis;
using num::IntervalUnion;
using num::Poly;

double c_k_formula(int k) {
  return std::pow(k, 3) * std::pow(2.0, k) * std::pow(k * static_cast<double>(k) + 1.0, 1.0 / (static_cast<double>(k) * k));
}

KMConstants KMConstants::for_dim(int k, int l_m, double r0) {
  if (k < 1) fail(Errc::precondition, "dimension must be positive");
  if (l_m < 1) fail(Errc::precondition, "l_M must be at least 1");
  KMConstants c;
  c.k = k;
  c.c_k = c_k_formula(k);
  c.alpha_k = 1.0 / (static_cast<double>(k) * k);
  c.l_m = l_m;
  c.r0 = r0 > 0 ? r0 : 0.1 / k;
  if (!(c.r0 < 1.0 / k)) fail(Errc::precondition, "r0 must be below 1/k");
  return c;
}

namespace {

int nilpotency_index_or_fail(const Eigen::MatrixXd& n) {
  const int k = static_cast<int>(n.rows());
  double base = std::max(1.0, n.norm());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(k, k);
  for (int m = 1; m <= k; ++m) {
    p = p * n;
    if (p.norm() <= tols().nilpotency * std::pow(base, m)) return m;
  }
  fail(Errc::not_nilpotent, "flow generator is not nilpotent");
}

Eigen::MatrixXd flow_at(const Eigen::MatrixXd& n, int index, double t) {
  const int k = static_cast<int>(n.rows());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(k, k);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(k, k);
  for (int p = 1; p < index; ++p) {
    term = term * (t / p) * n;
    acc += term;
  }
  return acc;
}

}  // namespace

RhoResult rho(const LatticeBasis& lambda, const Eigen::MatrixXd& nilpotent, double b_lo,
              double b_hi, const KMConstants& constants, const Budget& budget) {
  if (!(b_lo < b_hi)) fail(Errc::precondition, "empty time window");
  const int k = constants.k;
  const int index = nilpotency_index_or_fail(nilpotent);
  const double cap = 1.0 / k;

  RhoResult out;
  out.rho = cap;
  out.cutoff = cap;  // rank-r cutoff is cap^r <= cap

  // Any subgroup with sup over B below the cap has covolume below cap^rank at
  // every single time, in particular at the midpoint.
  const double t0 = 0.5 * (b_lo + b_hi);
  Eigen::MatrixXd h0 = flow_at(nilpotent, index, t0);
  LatticeBasis moved = lambda.transformed(h0);

  auto subs = lattice::primitive_subgroups_below(moved, cap, budget);
  out.candidates = static_cast<int>(subs.size());
  Eigen::MatrixXd h0_inv = flow_at(nilpotent, index, -t0);
  for (auto& sub : subs) {
    const int r = sub.rank();
    if (!(lattice::covolume(sub).value < std::pow(cap, r))) continue;
    LatticeBasis pulled = sub.transformed(h0_inv);
    auto f = good::covolume_flow_function(nilpotent, pulled);
    double sup = good::sup_abs(f, b_lo, b_hi);
    double value = std::pow(sup, 1.0 / r);
    if (value < out.rho) {
      out.rho = value;
      out.attaining = pulled;
    }
  }
  return out;
}

SmallD1Result measure_small_d1(const LatticeBasis& lambda, const Eigen::MatrixXd& nilpotent,
                               double b_lo, double b_hi, double eps, const Budget& budget) {
  if (!(eps > 0)) fail(Errc::precondition, "eps must be positive");
  if (!(b_lo < b_hi)) fail(Errc::precondition, "empty time window");
  const int k = static_cast<int>(nilpotent.rows());
  const int index = nilpotency_index_or_fail(nilpotent);

  // Candidate cutoff: |h_t v| >= |v| / |h_{-t}|_op and |h_{-t}|_op <=
  // |h_{-t}|_F, whose square is a polynomial in t; its max over B is exact.
  Poly frob2;
  {
    Eigen::MatrixXd neg = -nilpotent;
    // entries of exp(t * (-n)) as polynomials, summed squared
    std::vector<Eigen::MatrixXd> powers{Eigen::MatrixXd::Identity(k, k)};
    for (int p = 1; p < index; ++p) powers.push_back(powers.back() * neg / p);
    // powers[p] now holds (-n)^p / p!
    std::vector<double> acc(static_cast<size_t>(2 * index - 1), 0.0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int p = 0; p < index; ++p)
          for (int q = 0; q < index; ++q)
            acc[static_cast<size_t>(p + q)] += powers[static_cast<size_t>(p)](i, j) * powers[static_cast<size_t>(q)](i, j);
    frob2 = Poly(std::move(acc));
  }
  const double frob2_max = num::range_on_interval(frob2, b_lo, b_hi).second;
  const double cutoff = eps * std::sqrt(std::max(0.0, frob2_max));

  SmallD1Result out;
  std::vector<std::vector<long>> cands;
  // Vectors longer than the cutoff can never dip below eps on B.
  if (cutoff >= lattice::shortest_vector_d1(lambda, budget).length)
    cands = lattice::vectors_below(lambda, cutoff, budget);
  out.candidates = static_cast<int>(cands.size());

  IntervalUnion u;
  for (auto& a : cands) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(lambda.ambient_dim);
    for (int i = 0; i < lambda.rank(); ++i)
      v += static_cast<double>(a[static_cast<size_t>(i)]) * lambda.vectors[static_cast<size_t>(i)];
    LatticeBasis line;
    line.ambient_dim = lambda.ambient_dim;
    line.vectors.push_back(v);
    auto f = good::covolume_flow_function(nilpotent, line);  // |h_t v|
    u = u.unite(good::sublevel_set(f, b_lo, b_hi, eps));
  }
  out.set = std::move(u);
  out.measure = out.set.measure();
  return out;
}

KMBoundReport check_km_bound(const LatticeBasis& lambda, const Eigen::MatrixXd& nilpotent,
                             double b_lo, double b_hi, double eps, const KMConstants& constants,
                             const Budget& budget) {
  KMBoundReport rep;
  rep.eps = eps;
  RhoResult r = rho(lambda, nilpotent, b_lo, b_hi, constants, budget);
  rep.rho = r.rho;
  if (!(eps > 0) || !(eps < r.rho))
    fail(Errc::precondition, "the bound requires 0 < eps < rho");
  auto small = measure_small_d1(lambda, nilpotent, b_lo, b_hi, eps, budget);
  rep.measured = small.measure;
  rep.witness = std::move(small.set);
  rep.bound = constants.c_k * std::pow(eps / r.rho, constants.alpha_k) * (b_hi - b_lo);
  rep.pass = rep.measured <= rep.bound * (1.0 + tols().bound_slack);
  return rep;
}

double c_epsilon(double eps, const KMConstants& constants) {
  if (!(eps > 0) || eps > 1.0) fail(Errc::precondition, "eps must lie in (0, 1]");
  return std::exp(static_cast<double>(constants.k) * constants.k *
                  (std::log(eps) - std::log(constants.c_k))) /
         (8.0 * constants.l_m);
}

double c_epsilon_log10(double eps, const KMConstants& constants) {
  if (!(eps > 0) || eps > 1.0) fail(Errc::precondition, "eps must lie in (0, 1]");
  return static_cast<double>(constants.k) * constants.k *
             (std::log10(eps) - std::log10(constants.c_k)) -
         std::log10(8.0 * constants.l_m);
}

double product_c_epsilon(double eps, int n_factors, const KMConstants& constants) {
  if (n_factors < 2) fail(Errc::precondition, "product constant needs at least two factors");
  double inner = eps / (2.0 * (std::pow(2.0, n_factors) - 1.0));
  return std::pow(c_epsilon(inner, constants), n_factors);
}

double product_c_epsilon_log10(double eps, int n_factors, const KMConstants& constants) {
  if (n_factors < 2) fail(Errc::precondition, "product constant needs at least two factors");
  double inner = eps / (2.0 * (std::pow(2.0, n_factors) - 1.0));
  return n_factors * c_epsilon_log10(inner, constants);
}

double dichotomy_beta_log10(double eps, const KMConstants& constants) {
  double k2 = static_cast<double>(constants.k) * constants.k;
  double a = (k2 + 4) * std::log10(2.0) + 2 * k2 * std::log10(constants.c_k) - k2 * std::log10(eps);
  double b = (k2 + 3) * std::log10(2.0) + 2 * k2 * std::log10(constants.c_k) - 2 * k2 * std::log10(eps);
  return std::max(a, b);
}

double dichotomy_beta_alt_log10(double eps, const KMConstants& constants) {
  double k2 = static_cast<double>(constants.k) * constants.k;
  double lc = c_epsilon_log10(eps / 2.0, constants) + std::log10(static_cast<double>(constants.l_m));
  double a = std::log10(16.0) + 2 * k2 * std::log10(constants.c_k) - lc;
  double b = 2.0 * (std::log10(8.0) + k2 * std::log10(constants.c_k) - lc);
  return std::max(a, b);
}

DichotomyResult detect_invariant_sublattice(const LatticeBasis& lambda,
                                            const Eigen::MatrixXd& nilpotent, double threshold,
                                            const Budget& budget) {
  if (!(threshold > 0)) fail(Errc::precondition, "threshold must be positive");
  DichotomyResult out;
  // A constant covolume equals its value at t = 0, so enumerating unflowed
  // subgroups below max_r threshold^r is exhaustive for the search.
  double cutoff = threshold;
  for (int r = 2; r <= lambda.rank(); ++r) cutoff = std::max(cutoff, std::pow(threshold, r));
  auto subs = lattice::primitive_subgroups_below(lambda, cutoff, budget);
  for (auto& sub : subs) {  // already ordered by rank, then covolume
    double cov = lattice::covolume(sub).value;
    if (!(cov < std::pow(threshold, sub.rank()))) continue;
    auto f = good::covolume_flow_function(nilpotent, sub);
    auto c = good::constancy_test(f);
    if (c.constant) {
      out.found = true;
      out.sublattice = sub;
      out.covolume = c.value;
      return out;
    }
  }
  return out;
}

}  // namespace uniflow::km
