#pragma once

#include <Eigen/Dense>

#include <optional>

#include "good_functions.hpp"
#include "interval_union.hpp"
#include "lattice_geometry.hpp"
#include "tolerances.hpp"

namespace uniflow::km {

struct KMConstants {
  int k = 0;         // ambient dimension
  double c_k = 0;    // k^3 2^k (k^2+1)^{1/k^2}
  double alpha_k = 0;  // 1/k^2
  int l_m = 1;       // index constant, configured per group
  double r0 = 0;     // Zassenhaus radius, configured, < 1/k

  static KMConstants for_dim(int k, int l_m = 1, double r0 = -1.0);
};

double c_k_formula(int k);

struct RhoResult {
  double rho = 0;
  std::optional<lattice::LatticeBasis> attaining;
  double cutoff = 0;  // covolume cutoff certifying the truncation
  int candidates = 0;
};

/// rho = min(1/k, inf over primitive subgroups of sup_{t in B} covol^{1/rank}).
/// Only subgroups whose covolume at the midpoint of B falls below (1/k)^rank
/// can attain the inf below the cap, so the enumeration there is exhaustive.
RhoResult rho(const lattice::LatticeBasis& lambda, const Eigen::MatrixXd& nilpotent, double b_lo,
              double b_hi, const KMConstants& constants, const Budget& budget = {});

struct SmallD1Result {
  num::IntervalUnion set;
  double measure = 0;
  int candidates = 0;
};

/// Exact measure of {t in B : d1(h_t Lambda) < eps}. Candidate vectors are
/// certified finite: |h_t v| >= |v| / max_B |h_{-t}|_op, so only vectors with
/// |v| <= eps * max_B |h_{-t}|_F can ever dip below eps; the Frobenius bound
/// is itself a polynomial maximized by critical points.
SmallD1Result measure_small_d1(const lattice::LatticeBasis& lambda, const Eigen::MatrixXd& nilpotent,
                               double b_lo, double b_hi, double eps, const Budget& budget = {});

struct KMBoundReport {
  double measured = 0;
  double bound = 0;
  double rho = 0;
  double eps = 0;
  bool pass = false;
  num::IntervalUnion witness;
};

/// measured <= C_k (eps/rho)^{alpha_k} m(B); throws Errc::precondition when
/// eps >= rho, mirroring the hypothesis 0 < eps < rho.
KMBoundReport check_km_bound(const lattice::LatticeBasis& lambda, const Eigen::MatrixXd& nilpotent,
                             double b_lo, double b_hi, double eps, const KMConstants& constants,
                             const Budget& budget = {});

/// c_eps = (eps / C_k)^{k^2} / (8 l_M).
double c_epsilon(double eps, const KMConstants& constants);
double c_epsilon_log10(double eps, const KMConstants& constants);

/// Product-case constant: (c_{eps/(2(2^n - 1))})^n with C_k taken at the full
/// product dimension. n >= 2.
double product_c_epsilon(double eps, int n_factors, const KMConstants& constants);
double product_c_epsilon_log10(double eps, int n_factors, const KMConstants& constants);

/// The two covolume-threshold constants of the uniform dichotomy, exposed in
/// log10 (they overflow doubles for realistic k). The `alt` variant is the
/// product-section form that depends on c_{eps/2}.
double dichotomy_beta_log10(double eps, const KMConstants& constants);
double dichotomy_beta_alt_log10(double eps, const KMConstants& constants);

struct DichotomyResult {
  bool found = false;
  lattice::LatticeBasis sublattice;
  double covolume = 0;
};

/// Searches primitive subgroups whose covolume flow is constant with value
/// below threshold^rank; first hit ordered by rank then covolume. A NotFound
/// is within the enumeration budget, not a universal negative.
DichotomyResult detect_invariant_sublattice(const lattice::LatticeBasis& lambda,
                                            const Eigen::MatrixXd& nilpotent, double threshold,
                                            const Budget& budget = {});

}  // namespace uniflow::km
