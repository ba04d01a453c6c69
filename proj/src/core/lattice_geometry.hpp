#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "exact.hpp"
#include "tolerances.hpp"

namespace uniflow::lattice {

/// Basis of a discrete subgroup of R^k: m <= k independent vectors. The
/// exact coordinates, when present, run parallel to the float ones and enable
/// exact saturation.
struct LatticeBasis {
  int ambient_dim = 0;
  std::vector<Eigen::VectorXd> vectors;
  std::optional<std::vector<std::vector<exact::Rational>>> exact_coords;

  int rank() const { return static_cast<int>(vectors.size()); }
  Eigen::MatrixXd gram() const;
  /// Column matrix of the basis vectors.
  Eigen::MatrixXd as_columns() const;

  static LatticeBasis standard(int k);  // Z^k
  static LatticeBasis from_rows(const std::vector<std::vector<double>>& rows);
  static LatticeBasis from_exact_rows(const std::vector<std::vector<exact::Rational>>& rows);
  LatticeBasis scaled(double c) const;
  LatticeBasis transformed(const Eigen::MatrixXd& m) const;  // float-only result
};

struct WedgeNorm {
  double value;
};

/// Covolume in the real span: sqrt(det of the Gram matrix), equal to the
/// Euclidean norm of the wedge of the basis (Cauchy-Binet).
WedgeNorm covolume(const LatticeBasis& b);

struct ShortestVector {
  double length;
  Eigen::VectorXd vector;
  std::vector<long> coeffs;
};

/// Exact minimizer over nonzero integer combinations. The coefficient box
/// |a_i| <= ceil(U / sqrt(lambda_min(Gram))) is exhaustive for any vector of
/// norm <= U, with U the smallest basis-vector norm; Fincke-Pohst style
/// pruning runs inside the box.
ShortestVector shortest_vector_d1(const LatticeBasis& b, const Budget& budget = {});

struct D1BoundReport {
  double d1;
  double bound;  // 4 * covolume^{1/rank}
  bool pass;
};

D1BoundReport check_d1_covolume_bound(const LatticeBasis& b, const Budget& budget = {});

/// All integer coefficient vectors a != 0 with |sum a_i b_i| <= bound, one of
/// {a, -a} per sign pair. Throws Errc::box_too_large / budget_exceeded on blowup.
std::vector<std::vector<long>> vectors_below(const LatticeBasis& b, double bound,
                                             const Budget& budget = {});

/// All primitive subgroups (of every rank 1..k) with covolume < C of a
/// full-rank lattice. Enumerates lattice vectors below the Minkowski-type
/// cutoff derived from C, forms saturated spans rank by rank, deduplicates.
std::vector<LatticeBasis> primitive_subgroups_below(const LatticeBasis& b, double c_bound,
                                                    const Budget& budget = {});

/// Rank-dependent vector-length cutoff used by primitive_subgroups_below:
/// every rank-r primitive subgroup with covolume < C is spanned by lattice
/// vectors of norm <= minkowski_cutoff(r, C, d1). Derivation: Minkowski's
/// second theorem gives lambda_1...lambda_r * V_r <= 2^r covol, and each
/// lambda_i >= d1, so lambda_r <= 2^r C / (V_r d1^{r-1}).
double minkowski_cutoff(int rank, double c_bound, double d1);

/// Basis of R-span(span) ∩ ambient-module. Exact rational arithmetic on the
/// integer coefficients of `span` in `ambient`.
LatticeBasis saturate(const LatticeBasis& span, const LatticeBasis& ambient);

/// Saturated canonical integer coefficient rows of a sublattice of `ambient`
/// (rows are coefficients w.r.t. ambient's basis). Used for dedup.
exact::IntMat saturated_coeff_rows(const std::vector<std::vector<long>>& coeff_rows, int k);

LatticeBasis from_coeff_rows(const exact::IntMat& rows, const LatticeBasis& ambient);

}  // namespace uniflow::lattice
