#pragma once

#include <cstdint>

namespace uniflow {

/// All numeric tolerances used across the library, in one record.
/// The defaults are load-bearing: several of them appear in documented
/// contracts (expansion residuals, round-trip checks, root isolation).
struct Tolerances {
  double jacobi = 1e-12;              // structure-constant Jacobi residual
  double killing_cross_check = 1e-10; // ad-trace vs defining-rep trace form
  double basis_expansion = 1e-9;      // residual when re-expanding a matrix in the basis
  double nilpotency = 1e-9;           // |ad_u^m| considered zero
  double exp_log_roundtrip = 1e-9;    // |exp(log g) - g|
  double two_step = 1e-10;            // double brackets [z,[x,y]] considered zero
  double zspan_dependence = 1e-9;     // vector considered a member of the Z-module
  double zspan_coeff_residual = 1e-7; // integer-combination residual on outputs
  double gram_rel = 1e-9;             // relative tolerance on Gram determinants
  double root_endpoint = 1e-12;       // root isolation endpoint tolerance
  double constancy_rel = 1e-10;       // covolume-flow constancy, relative to constant term
  double goodness_slack = 1e-9;       // worst_ratio <= 1 + slack
  double flow_agreement = 1e-8;       // polynomial flow vs direct conjugation
  double interval_confirm = 1e-8;     // midpoint round-trip residual in bad_set
  double bound_slack = 1e-9;          // measured <= bound * (1 + slack)
};

inline const Tolerances& tols() {
  static const Tolerances t{};
  return t;
}

struct Budget {
  std::int64_t candidates = 1'000'000;     // generic enumeration budget
  std::int64_t d1_box = 100'000'000;       // shortest-vector coefficient boxes
  std::int64_t ball_size = 1'000'000;      // word-ball enumeration
  int word_radius_cap = 20;
};

}  // namespace uniflow
