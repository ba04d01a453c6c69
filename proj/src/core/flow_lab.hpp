#pragma once

#include <string>
#include <vector>

#include "interval_union.hpp"
#include "km_engine.hpp"
#include "lie_core.hpp"
#include "tolerances.hpp"

namespace uniflow::flow {

struct DiscreteGroupSpec {
  lie::SpecPtr algebra;
  std::vector<lie::ExactGroupElement> generators;
  int word_radius = 6;
  std::string name;
  // Declared hypothesis flags, surfaced by the catalog.
  bool torsion_free = false;
  bool is_lattice = false;
  bool satisfies_star = false;
};

struct TrajectorySpec {
  lie::AlgebraVector u;             // nilpotent generator of u_t
  lie::FloatGroupElement basepoint;  // g, float; x = g Gamma
  double horizon = 10.0;             // T
  double delta = 0.05;
};

struct WordElement {
  std::string word;
  lie::ExactGroupElement g;
};

/// All reduced words up to word_radius with exact matrix products,
/// deduplicated by exact matrix equality; identity excluded. Inverses of the
/// generators are part of the alphabet.
std::vector<WordElement> enumerate_ball(const DiscreteGroupSpec& spec, const Budget& budget = {});

/// Sound trace displacement bound: an element whose conjugates meet
/// exp(b_delta) satisfies |tr - 2| <= trace_gap_bound(delta) in every factor.
/// Derivation: |X|_F <= delta/2 for |X| <= delta in the Killing-derived norm
/// of either factor type, and |tr(e^X) - 2| <= 2(e^{|X|_F} - 1 - |X|_F) for
/// traceless X.
double trace_gap_bound(double delta);

/// True iff gamma can possibly enter B_delta under conjugation (trace test,
/// conjugation invariant). False prunes gamma permanently.
bool trace_prefilter(const lie::ExactGroupElement& gamma, double delta);

/// Exact ellipticity test for one factor block: conjugate into a compact
/// subgroup, i.e. real trace in (-2,2), or the block -I.
bool is_elliptic_block(const exact::ExactMat2& m);

/// Condition (*): no nontrivial enumerated element has an elliptic factor
/// projection. Throws Errc::condition_star naming the word and factor.
void check_condition_star(const DiscreteGroupSpec& spec, const std::vector<WordElement>& ball);

struct GammaContribution {
  std::string word;
  num::IntervalUnion intervals;
};

struct BadSetResult {
  num::IntervalUnion intervals;  // within [0, T]
  double measure = 0;
  double horizon = 0;
  double proportion = 0;
  std::vector<GammaContribution> contributions;
  int ball_size = 0;
  int pruned_by_trace = 0;
  int skipped_nolog = 0;
  std::vector<std::string> flagged;  // midpoint round-trip failures, kept out of the union
  int components = 0;
};

/// {t in [0,T] : G_{u_t x} ∩ B_delta != {e}} as an exact interval union.
/// Per gamma: h = g gamma g^{-1}; when log h exists the condition
/// u_t h u_{-t} in B_delta is, factor by factor, the polynomial sublevel set
/// |Ad_{u_t} log h|_i < delta via exp(Ad_{u_t} log h) = u_t h u_{-t}; NoLog
/// elements cannot enter the chart and are skipped with the trace certificate.
BadSetResult bad_set(const DiscreteGroupSpec& spec, const TrajectorySpec& traj,
                     const Budget& budget = {});

/// G_x ∩ B_delta = {e} for the basepoint (time-0 check of x in X_delta).
bool in_injectivity_set(const DiscreteGroupSpec& spec, const lie::FloatGroupElement& basepoint,
                        double delta, const Budget& budget = {});

struct TheoremReport {
  double eps = 0;
  double delta = 0;
  double radius = 0;          // c_eps * delta (0 when it underflows)
  double c_eps_log10 = 0;
  double measured_proportion = 0;
  bool pass = false;
  int n_factors = 1;
  bool conditional_on_r0 = true;  // r0 is configured, not certified
};

/// Verifies m({t in [0,T] : u_t x not in X_{c_eps delta}}) <= eps T for a
/// basepoint with x in X_delta. Uses the product constant when the spec has
/// several factors.
TheoremReport verify_theorem_1_1(const DiscreteGroupSpec& spec, const TrajectorySpec& traj,
                                 double eps, const km::KMConstants& constants,
                                 const Budget& budget = {});

/// Product combinator: bad set where the sup-norm condition holds in every
/// factor simultaneously, as the intersection of per-factor interval unions.
BadSetResult product_bad_set(const std::vector<DiscreteGroupSpec>& factor_specs,
                             const std::vector<TrajectorySpec>& factor_trajs, double delta,
                             const Budget& budget = {});

}  // namespace uniflow::flow
