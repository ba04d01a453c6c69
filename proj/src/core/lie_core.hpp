#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exact.hpp"
#include "poly.hpp"
#include "tolerances.hpp"

namespace uniflow::lie {

using Mat2c = Eigen::Matrix2cd;

enum class FactorType { sl2r, sl2c_real };

inline int factor_dim(FactorType f) { return f == FactorType::sl2r ? 3 : 6; }
/// Killing form of the factor equals this constant times Re tr(XY) in the
/// defining representation (4 for sl(2,R), 8 for sl(2,C) viewed as real).
inline double killing_proportionality(FactorType f) { return f == FactorType::sl2r ? 4.0 : 8.0; }
inline int default_l_m(FactorType f) { return f == FactorType::sl2r ? 2 : 4; }

// ---------------------------------------------------------------------------
// Group elements in the defining representation, one 2x2 block per factor.
// ---------------------------------------------------------------------------

struct FloatGroupElement {
  std::vector<Mat2c> blocks;

  static FloatGroupElement identity(size_t n_factors);
  FloatGroupElement operator*(const FloatGroupElement& o) const;
  FloatGroupElement inverse() const;  // assumes det 1 per block
  double dist(const FloatGroupElement& o) const;
  bool unimodular(double tol = 1e-10) const;
};

struct ExactGroupElement {
  std::vector<exact::ExactMat2> blocks;

  static ExactGroupElement identity(size_t n_factors);
  ExactGroupElement operator*(const ExactGroupElement& o) const;
  ExactGroupElement inverse_unimodular() const;
  bool operator==(const ExactGroupElement& o) const { return blocks == o.blocks; }
  bool is_identity() const;
  bool unimodular() const;  // exact det == 1 per block
  std::string key() const;
  FloatGroupElement to_float() const;
};

// ---------------------------------------------------------------------------
// Lie algebra spec: bases, structure constants, Killing data, root data.
// ---------------------------------------------------------------------------

struct RootData {
  std::vector<int> lower;   // u^{-alpha}
  std::vector<int> center;  // z = a + m
  std::vector<int> upper;   // u^{+alpha}
};

class LieAlgebraSpec {
public:
  static std::shared_ptr<const LieAlgebraSpec> make(std::vector<FactorType> factors,
                                                    std::string name = "");
  static std::shared_ptr<const LieAlgebraSpec> sl2r();
  static std::shared_ptr<const LieAlgebraSpec> sl2c_real();

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int n_factors() const { return static_cast<int>(factors_.size()); }
  FactorType factor(int f) const { return factors_[static_cast<size_t>(f)]; }
  const std::vector<FactorType>& factors() const { return factors_; }
  int factor_offset(int f) const { return offsets_[static_cast<size_t>(f)]; }
  int factor_dim_of(int f) const { return factor_dim(factors_[static_cast<size_t>(f)]); }

  /// Basis element i as a group-shaped matrix (zero blocks off its factor).
  const std::vector<Mat2c>& basis_matrix(int i) const { return basis_[static_cast<size_t>(i)]; }
  /// c[(i*k+j)*k+l]: [b_i, b_j] = sum_l c_{ijl} b_l.
  double structure(int i, int j, int l) const {
    return structure_[(static_cast<size_t>(i) * dim_ + j) * dim_ + l];
  }
  const Eigen::MatrixXd& killing_gram() const { return gram_; }
  const Eigen::MatrixXd& euclidean_factor() const { return chol_t_; }  // gram = chol_t^T chol_t
  const RootData& root_data(int f) const { return roots_[static_cast<size_t>(f)]; }

  /// Matrix of ad_x in basis coordinates.
  Eigen::MatrixXd ad(const Eigen::VectorXd& coords) const;
  /// Largest Jacobi identity residual over all basis triples.
  double jacobi_residual() const;
  /// Largest |tr(ad_i ad_j) - <b_i, b_j>_defining| over basis pairs.
  double killing_cross_check_residual() const;

  /// Assemble the matrix of a coordinate vector.
  std::vector<Mat2c> to_blocks(const Eigen::VectorXd& coords) const;
  /// Expand group-shaped blocks in the basis; residual is reported.
  Eigen::VectorXd expand_blocks(const std::vector<Mat2c>& blocks, double* residual) const;

  Eigen::VectorXd to_euclidean(const Eigen::VectorXd& coords) const { return chol_t_ * coords; }
  Eigen::VectorXd from_euclidean(const Eigen::VectorXd& v) const {
    return chol_t_.triangularView<Eigen::Upper>().solve(v);
  }

private:
  std::string name_;
  std::vector<FactorType> factors_;
  std::vector<int> offsets_;
  int dim_ = 0;
  std::vector<std::vector<Mat2c>> basis_;
  std::vector<double> structure_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd chol_t_;  // upper-triangular T with gram = T^T T
  std::vector<RootData> roots_;

  void build();
};

using SpecPtr = std::shared_ptr<const LieAlgebraSpec>;

struct AlgebraVector {
  SpecPtr spec;
  Eigen::VectorXd coords;

  AlgebraVector() = default;
  AlgebraVector(SpecPtr s, Eigen::VectorXd c) : spec(std::move(s)), coords(std::move(c)) {}
  static AlgebraVector zero(const SpecPtr& s) {
    return AlgebraVector(s, Eigen::VectorXd::Zero(s->dim()));
  }
  static AlgebraVector basis(const SpecPtr& s, int i) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(s->dim());
    c(i) = 1.0;
    return AlgebraVector(s, std::move(c));
  }
};

// ---------------------------------------------------------------------------
// Operations.
// ---------------------------------------------------------------------------

/// Killing form <x,y> = tr(ad_x ad_y), computed from structure constants.
double killing_form(const AlgebraVector& x, const AlgebraVector& y);
/// Positive-definite inner product (x,y) = -<x, Theta y>.
double inner(const AlgebraVector& x, const AlgebraVector& y);
double norm(const AlgebraVector& x);

AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y);

/// Coordinates of g X g^{-1}.
AlgebraVector adjoint_group(const FloatGroupElement& g, const AlgebraVector& x);

/// Exact polynomial coordinates of t -> Ad_{exp(tu)} x, degree < nilpotency
/// index of ad_u. Throws Errc::not_nilpotent when ad_u^m does not vanish for
/// any m <= dim.
std::vector<num::Poly> adjoint_flow_polynomials(const AlgebraVector& u, const AlgebraVector& x);

/// Nilpotency index of ad_u (smallest m with ad_u^m = 0), or -1.
int ad_nilpotency_index(const AlgebraVector& u, double tol = tols().nilpotency);

FloatGroupElement exp_map(const AlgebraVector& x);
std::optional<AlgebraVector> log_principal(const SpecPtr& spec, const FloatGroupElement& g);

/// x + y + [x,y]/2 on a common 2-step nilpotent subalgebra; checks the
/// 2-step condition and the group-level identity exp(x)exp(y) = exp(bch2).
AlgebraVector bch2(const AlgebraVector& x, const AlgebraVector& y);

/// Basis of the Z-module generated by the inputs, by iterated size reduction.
/// Inputs are expected to be logs of a discrete 2-step nilpotent subgroup;
/// discreteness of the span is the caller's guarantee. Throws
/// Errc::indiscrete_span when reduction produces vectors shrinking below the
/// dependence tolerance without vanishing.
std::vector<AlgebraVector> zspan_lattice(const std::vector<AlgebraVector>& logs);

/// 2x2 block helpers (closed forms for traceless 2x2 / det-1 matrices).
Mat2c block_exp(const Mat2c& x);
std::optional<Mat2c> block_log_principal(const Mat2c& g);

}  // namespace uniflow::lie
