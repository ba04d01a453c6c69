#include "lie_core.hpp"

#include <cmath>
#include <deque>

#include "errors.hpp"

namespace uniflow::lie {

using std::complex;
using C = complex<double>;

// ---------------------------------------------------------------------------
// Group elements
// ---------------------------------------------------------------------------

FloatGroupElement FloatGroupElement::identity(size_t n_factors) {
  FloatGroupElement g;
  g.blocks.assign(n_factors, Mat2c::Identity());
  return g;
}

FloatGroupElement FloatGroupElement::operator*(const FloatGroupElement& o) const {
  FloatGroupElement r;
  r.blocks.reserve(blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i) r.blocks.push_back(blocks[i] * o.blocks[i]);
  return r;
}

FloatGroupElement FloatGroupElement::inverse() const {
  FloatGroupElement r;
  r.blocks.reserve(blocks.size());
  for (auto& b : blocks) {
    Mat2c inv;
    inv << b(1, 1), -b(0, 1), -b(1, 0), b(0, 0);
    C det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    r.blocks.push_back(inv / det);
  }
  return r;
}

double FloatGroupElement::dist(const FloatGroupElement& o) const {
  double s = 0;
  for (size_t i = 0; i < blocks.size(); ++i) s += (blocks[i] - o.blocks[i]).squaredNorm();
  return std::sqrt(s);
}

bool FloatGroupElement::unimodular(double tol) const {
  for (auto& b : blocks) {
    C det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    if (std::abs(det - C(1.0)) > tol) return false;
  }
  return true;
}

ExactGroupElement ExactGroupElement::identity(size_t n_factors) {
  ExactGroupElement g;
  g.blocks.assign(n_factors, exact::ExactMat2::identity());
  return g;
}

ExactGroupElement ExactGroupElement::operator*(const ExactGroupElement& o) const {
  ExactGroupElement r;
  r.blocks.reserve(blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i) r.blocks.push_back(blocks[i] * o.blocks[i]);
  return r;
}

ExactGroupElement ExactGroupElement::inverse_unimodular() const {
  ExactGroupElement r;
  r.blocks.reserve(blocks.size());
  for (auto& b : blocks) r.blocks.push_back(b.inverse_unimodular());
  return r;
}

bool ExactGroupElement::is_identity() const {
  for (auto& b : blocks)
    if (!b.is_identity()) return false;
  return true;
}

bool ExactGroupElement::unimodular() const {
  for (auto& b : blocks)
    if (!(b.det() == exact::GaussRational(1))) return false;
  return true;
}

std::string ExactGroupElement::key() const {
  std::string s;
  for (auto& b : blocks) {
    s += b.str();
    s += '#';
  }
  return s;
}

FloatGroupElement ExactGroupElement::to_float() const {
  FloatGroupElement g;
  g.blocks.reserve(blocks.size());
  for (auto& b : blocks) {
    Mat2c m;
    m << C(b.a.re.get_d(), b.a.im.get_d()), C(b.b.re.get_d(), b.b.im.get_d()),
        C(b.c.re.get_d(), b.c.im.get_d()), C(b.d.re.get_d(), b.d.im.get_d());
    g.blocks.push_back(m);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Spec construction
// ---------------------------------------------------------------------------

namespace {

Mat2c mat_h() {
  Mat2c m;
  m << 1, 0, 0, -1;
  return m;
}
Mat2c mat_e() {
  Mat2c m;
  m << 0, 1, 0, 0;
  return m;
}
Mat2c mat_f() {
  Mat2c m;
  m << 0, 0, 1, 0;
  return m;
}

}  // namespace

std::shared_ptr<const LieAlgebraSpec> LieAlgebraSpec::make(std::vector<FactorType> factors,
                                                           std::string name) {
  if (factors.empty()) fail(Errc::invalid_config, "a Lie algebra spec needs at least one factor");
  auto spec = std::make_shared<LieAlgebraSpec>(LieAlgebraSpec{});
  spec->factors_ = std::move(factors);
  if (name.empty()) {
    for (size_t f = 0; f < spec->factors_.size(); ++f) {
      if (f) name += "_x_";
      name += spec->factors_[f] == FactorType::sl2r ? "sl2r" : "sl2c_real";
    }
  }
  spec->name_ = std::move(name);
  spec->build();
  return spec;
}

std::shared_ptr<const LieAlgebraSpec> LieAlgebraSpec::sl2r() {
  static auto s = make({FactorType::sl2r});
  return s;
}

std::shared_ptr<const LieAlgebraSpec> LieAlgebraSpec::sl2c_real() {
  static auto s = make({FactorType::sl2c_real});
  return s;
}

void LieAlgebraSpec::build() {
  const size_t nf = factors_.size();
  offsets_.resize(nf);
  dim_ = 0;
  for (size_t f = 0; f < nf; ++f) {
    offsets_[f] = dim_;
    dim_ += factor_dim(factors_[f]);
  }

  // Basis: per factor, H, E, F (and iH, iE, iF for sl(2,C) as a real algebra),
  // embedded as group-shaped matrices with zero blocks elsewhere.
  basis_.clear();
  roots_.clear();
  for (size_t f = 0; f < nf; ++f) {
    const int off = offsets_[f];
    std::vector<Mat2c> generators = {mat_h(), mat_e(), mat_f()};
    if (factors_[f] == FactorType::sl2c_real) {
      generators.push_back(C(0, 1) * mat_h());
      generators.push_back(C(0, 1) * mat_e());
      generators.push_back(C(0, 1) * mat_f());
    }
    RootData rd;
    for (size_t i = 0; i < generators.size(); ++i) {
      std::vector<Mat2c> blocks(nf, Mat2c::Zero());
      blocks[f] = generators[i];
      basis_.push_back(std::move(blocks));
      const int idx = off + static_cast<int>(i);
      switch (i % 3) {
        case 0: rd.center.push_back(idx); break;  // H, iH span z = a + m
        case 1: rd.upper.push_back(idx); break;   // E, iE
        case 2: rd.lower.push_back(idx); break;   // F, iF
      }
    }
    roots_.push_back(std::move(rd));
  }

  // Structure constants from the defining representation.
  structure_.assign(static_cast<size_t>(dim_) * dim_ * dim_, 0.0);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      std::vector<Mat2c> br(factors_.size());
      for (size_t f = 0; f < factors_.size(); ++f)
        br[f] = basis_[static_cast<size_t>(i)][f] * basis_[static_cast<size_t>(j)][f] -
                basis_[static_cast<size_t>(j)][f] * basis_[static_cast<size_t>(i)][f];
      double res = 0;
      Eigen::VectorXd c = expand_blocks(br, &res);
      if (res > 1e-12)
        fail(Errc::internal, "structure constant expansion failed");
      for (int l = 0; l < dim_; ++l)
        structure_[(static_cast<size_t>(i) * dim_ + j) * dim_ + l] = c(l);
    }
  }

  // Inner product (x,y) = -<x, Theta y> with Theta(Y) = -Y^* per block:
  // (x,y) = prop_f * Re tr(X Y^*) summed over factors.
  gram_ = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      double v = 0;
      for (size_t f = 0; f < factors_.size(); ++f) {
        const Mat2c& a = basis_[static_cast<size_t>(i)][f];
        const Mat2c& b = basis_[static_cast<size_t>(j)][f];
        v += killing_proportionality(factors_[f]) * (a * b.adjoint()).trace().real();
      }
      gram_(i, j) = v;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram_);
  if (llt.info() != Eigen::Success)
    fail(Errc::internal, "Killing-derived Gram matrix is not positive definite");
  chol_t_ = llt.matrixU();

  if (jacobi_residual() > tols().jacobi)
    fail(Errc::internal, "Jacobi residual above tolerance for spec " + name_);
  if (killing_cross_check_residual() > tols().killing_cross_check)
    fail(Errc::internal, "Killing form cross-check failed for spec " + name_);
}

std::vector<Mat2c> LieAlgebraSpec::to_blocks(const Eigen::VectorXd& coords) const {
  std::vector<Mat2c> blocks(factors_.size(), Mat2c::Zero());
  for (int i = 0; i < dim_; ++i) {
    if (coords(i) == 0.0) continue;
    for (size_t f = 0; f < factors_.size(); ++f)
      blocks[f] += coords(i) * basis_[static_cast<size_t>(i)][f];
  }
  return blocks;
}

Eigen::VectorXd LieAlgebraSpec::expand_blocks(const std::vector<Mat2c>& blocks,
                                              double* residual) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
  double res2 = 0;
  for (size_t f = 0; f < factors_.size(); ++f) {
    const Mat2c& x = blocks[f];
    const int off = offsets_[f];
    res2 += std::norm(x(0, 0) + x(1, 1));  // traceless part
    if (factors_[f] == FactorType::sl2r) {
      c(off + 0) = x(0, 0).real();
      c(off + 1) = x(0, 1).real();
      c(off + 2) = x(1, 0).real();
      res2 += x(0, 0).imag() * x(0, 0).imag() + x(0, 1).imag() * x(0, 1).imag() +
              x(1, 0).imag() * x(1, 0).imag();
    } else {
      c(off + 0) = x(0, 0).real();
      c(off + 1) = x(0, 1).real();
      c(off + 2) = x(1, 0).real();
      c(off + 3) = x(0, 0).imag();
      c(off + 4) = x(0, 1).imag();
      c(off + 5) = x(1, 0).imag();
    }
  }
  if (residual) *residual = std::sqrt(res2);
  return c;
}

Eigen::MatrixXd LieAlgebraSpec::ad(const Eigen::VectorXd& coords) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    const double xi = coords(i);
    if (xi == 0.0) continue;
    for (int j = 0; j < dim_; ++j)
      for (int l = 0; l < dim_; ++l)
        m(l, j) += xi * structure(i, j, l);
  }
  return m;
}

double LieAlgebraSpec::jacobi_residual() const {
  // [b_i,[b_j,b_l]] + [b_j,[b_l,b_i]] + [b_l,[b_i,b_j]] = 0, coordinatewise.
  double worst = 0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int l = 0; l < dim_; ++l)
        for (int m = 0; m < dim_; ++m) {
          double s = 0;
          for (int p = 0; p < dim_; ++p) {
            s += structure(j, l, p) * structure(i, p, m);
            s += structure(l, i, p) * structure(j, p, m);
            s += structure(i, j, p) * structure(l, p, m);
          }
          worst = std::max(worst, std::fabs(s));
        }
  return worst;
}

double LieAlgebraSpec::killing_cross_check_residual() const {
  double worst = 0;
  for (int i = 0; i < dim_; ++i) {
    Eigen::MatrixXd adi = ad(Eigen::VectorXd::Unit(dim_, i));
    for (int j = 0; j < dim_; ++j) {
      Eigen::MatrixXd adj = ad(Eigen::VectorXd::Unit(dim_, j));
      double from_structure = (adi * adj).trace();
      double from_rep = 0;
      for (size_t f = 0; f < factors_.size(); ++f)
        from_rep += killing_proportionality(factors_[f]) *
                    (basis_[static_cast<size_t>(i)][f] * basis_[static_cast<size_t>(j)][f])
                        .trace()
                        .real();
      worst = std::max(worst, std::fabs(from_structure - from_rep));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

namespace {

void require_same_spec(const AlgebraVector& x, const AlgebraVector& y) {
  if (x.spec.get() != y.spec.get())
    fail(Errc::spec_mismatch, "algebra vectors belong to different specs");
}

}  // namespace

double killing_form(const AlgebraVector& x, const AlgebraVector& y) {
  require_same_spec(x, y);
  return (x.spec->ad(x.coords) * x.spec->ad(y.coords)).trace();
}

double inner(const AlgebraVector& x, const AlgebraVector& y) {
  require_same_spec(x, y);
  return x.coords.dot(x.spec->killing_gram() * y.coords);
}

double norm(const AlgebraVector& x) { return std::sqrt(std::max(0.0, inner(x, x))); }

AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) {
  require_same_spec(x, y);
  return AlgebraVector(x.spec, x.spec->ad(x.coords) * y.coords);
}

AlgebraVector adjoint_group(const FloatGroupElement& g, const AlgebraVector& x) {
  const auto& spec = *x.spec;
  if (g.blocks.size() != static_cast<size_t>(spec.n_factors()))
    fail(Errc::spec_mismatch, "group element shape does not match the spec");
  auto blocks = spec.to_blocks(x.coords);
  FloatGroupElement gi = g.inverse();
  for (size_t f = 0; f < blocks.size(); ++f) blocks[f] = g.blocks[f] * blocks[f] * gi.blocks[f];
  double res = 0;
  Eigen::VectorXd c = spec.expand_blocks(blocks, &res);
  double scale = std::max(1.0, x.coords.norm());
  if (res > tols().basis_expansion * scale)
    fail(Errc::basis_expansion, "adjoint re-expansion residual " + std::to_string(res));
  return AlgebraVector(x.spec, std::move(c));
}

int ad_nilpotency_index(const AlgebraVector& u, double tol) {
  const auto& spec = *u.spec;
  Eigen::MatrixXd a = spec.ad(u.coords);
  double base = std::max(1.0, a.norm());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(spec.dim(), spec.dim());
  for (int m = 1; m <= spec.dim(); ++m) {
    p = p * a;
    if (p.norm() <= tol * std::pow(base, m)) return m;
  }
  return -1;
}

std::vector<num::Poly> adjoint_flow_polynomials(const AlgebraVector& u, const AlgebraVector& x) {
  require_same_spec(u, x);
  const auto& spec = *u.spec;
  int m = ad_nilpotency_index(u);
  if (m < 0) fail(Errc::not_nilpotent, "ad_u is not nilpotent");
  Eigen::MatrixXd a = spec.ad(u.coords);
  // exp(t ad_u) x = sum_{p<m} t^p (ad_u)^p x / p!
  std::vector<Eigen::VectorXd> terms;
  Eigen::VectorXd cur = x.coords;
  double factorial = 1;
  for (int p = 0; p < m; ++p) {
    if (p > 0) {
      cur = a * cur;
      factorial *= p;
    }
    terms.push_back(cur / factorial);
  }
  std::vector<num::Poly> out;
  out.reserve(static_cast<size_t>(spec.dim()));
  for (int i = 0; i < spec.dim(); ++i) {
    std::vector<double> coeffs(terms.size());
    for (size_t p = 0; p < terms.size(); ++p) coeffs[p] = terms[p](i);
    out.push_back(num::trimmed(num::Poly(std::move(coeffs)), 1e-14));
  }
  return out;
}

Mat2c block_exp(const Mat2c& x) {
  // exp of a traceless 2x2: cosh(mu) I + sinhc(mu) X with mu^2 = -det X.
  C mu2 = x(0, 0) * x(0, 0) + x(0, 1) * x(1, 0);
  C mu = std::sqrt(mu2);
  C ch, shc;
  if (std::abs(mu) < 1e-4) {
    ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0;
    shc = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0;
  } else {
    ch = std::cosh(mu);
    shc = std::sinh(mu) / mu;
  }
  return ch * Mat2c::Identity() + shc * x;
}

std::optional<Mat2c> block_log_principal(const Mat2c& g) {
  C tr = g(0, 0) + g(1, 1);
  C z = tr / 2.0;
  // Eigenvalues lie on the closed negative real axis iff tr is real <= -2.
  if (std::fabs(z.imag()) <= 1e-12 * (1.0 + std::abs(z)) && z.real() <= -1.0 + 1e-12)
    return std::nullopt;
  C mu2 = z * z - 1.0;
  C mu = std::log(z + std::sqrt(mu2));  // principal branch, cosh(mu) = z
  C shc;
  if (std::abs(mu) < 1e-4)
    shc = 1.0 + mu * mu / 6.0 + mu * mu * mu * mu / 120.0;
  else
    shc = std::sinh(mu) / mu;
  Mat2c x = (g - z * Mat2c::Identity()) / shc;
  return x;
}

FloatGroupElement exp_map(const AlgebraVector& x) {
  auto blocks = x.spec->to_blocks(x.coords);
  FloatGroupElement g;
  g.blocks.reserve(blocks.size());
  for (auto& b : blocks) g.blocks.push_back(block_exp(b));
  return g;
}

std::optional<AlgebraVector> log_principal(const SpecPtr& spec, const FloatGroupElement& g) {
  std::vector<Mat2c> logs;
  logs.reserve(g.blocks.size());
  for (auto& b : g.blocks) {
    auto l = block_log_principal(b);
    if (!l) return std::nullopt;
    logs.push_back(*l);
  }
  double res = 0;
  Eigen::VectorXd c = spec->expand_blocks(logs, &res);
  AlgebraVector x(spec, std::move(c));
  if (res > tols().basis_expansion * std::max(1.0, x.coords.norm())) return std::nullopt;
  // Round-trip check; failure means g is outside the principal chart.
  if (exp_map(x).dist(g) > tols().exp_log_roundtrip * std::max(1.0, x.coords.norm()))
    return std::nullopt;
  return x;
}

AlgebraVector bch2(const AlgebraVector& x, const AlgebraVector& y) {
  require_same_spec(x, y);
  AlgebraVector br = bracket(x, y);
  const double scale = (1.0 + norm(x)) * (1.0 + norm(y));
  for (const AlgebraVector* z : {&x, &y}) {
    if (norm(bracket(*z, br)) > tols().two_step * scale * (1.0 + norm(br)))
      fail(Errc::two_step_violated, "inputs do not lie in a common 2-step nilpotent subalgebra");
  }
  AlgebraVector out(x.spec, x.coords + y.coords + 0.5 * br.coords);
  FloatGroupElement lhs = exp_map(out);
  FloatGroupElement rhs = exp_map(x) * exp_map(y);
  if (lhs.dist(rhs) > 1e-9 * scale)
    fail(Errc::two_step_violated, "exp(bch2(x,y)) disagrees with exp(x)exp(y)");
  return out;
}

// ---------------------------------------------------------------------------
// Z-span reduction (Lemma-3.5 setting)
// ---------------------------------------------------------------------------

namespace {

struct GramOps {
  const Eigen::MatrixXd& g;
  double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(g * b); }
  double norm(const Eigen::VectorXd& a) const { return std::sqrt(std::max(0.0, dot(a, a))); }
};

}  // namespace

std::vector<AlgebraVector> zspan_lattice(const std::vector<AlgebraVector>& logs) {
  if (logs.empty()) return {};
  SpecPtr spec = logs.front().spec;
  GramOps ops{spec->killing_gram()};

  double scale = 0;
  for (auto& v : logs) {
    if (v.spec.get() != spec.get()) fail(Errc::spec_mismatch, "mixed specs in zspan_lattice");
    scale = std::max(scale, ops.norm(v.coords));
  }
  if (scale == 0) return {};
  const double dep_tol = tols().zspan_dependence * scale;
  const double vanish_tol = 1e-13 * scale;

  std::vector<Eigen::VectorXd> vecs;
  for (auto& v : logs)
    if (ops.norm(v.coords) > vanish_tol) vecs.push_back(v.coords);

  auto solve_coeffs = [&](const std::vector<Eigen::VectorXd>& basis, const Eigen::VectorXd& v,
                          Eigen::VectorXd& c, double& residual) {
    const int m = static_cast<int>(basis.size());
    Eigen::MatrixXd gram(m, m);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
      rhs(i) = ops.dot(basis[static_cast<size_t>(i)], v);
      for (int j = 0; j < m; ++j) gram(i, j) = ops.dot(basis[static_cast<size_t>(i)], basis[static_cast<size_t>(j)]);
    }
    c = gram.ldlt().solve(rhs);
    Eigen::VectorXd r = v;
    for (int i = 0; i < m; ++i) r -= c(i) * basis[static_cast<size_t>(i)];
    residual = ops.norm(r);
  };

  for (int sweep = 0; sweep < 10000; ++sweep) {
    bool improved = false;

    // Drop vanished vectors; anything stuck between the thresholds signals a
    // numerically indiscrete span.
    for (size_t i = 0; i < vecs.size();) {
      double n = ops.norm(vecs[i]);
      if (n <= vanish_tol) {
        vecs.erase(vecs.begin() + static_cast<long>(i));
        improved = true;
        continue;
      }
      if (n <= dep_tol)
        fail(Errc::indiscrete_span, "reduction produced a non-vanishing vector below tolerance");
      ++i;
    }
    if (vecs.size() <= 1) break;

    // Pairwise size reduction.
    for (size_t i = 0; i < vecs.size(); ++i) {
      for (size_t j = 0; j < vecs.size(); ++j) {
        if (i == j) continue;
        double mu = ops.dot(vecs[i], vecs[j]) / ops.dot(vecs[j], vecs[j]);
        double q = std::round(mu);
        if (q == 0) continue;
        Eigen::VectorXd cand = vecs[i] - q * vecs[j];
        if (ops.norm(cand) < ops.norm(vecs[i]) - vanish_tol) {
          vecs[i] = std::move(cand);
          improved = true;
        }
      }
    }

    // Multi-vector dependence elimination: reduce each vector by the rounded
    // least-squares combination of the others when it lies in their span.
    for (size_t i = 0; i < vecs.size(); ++i) {
      std::vector<Eigen::VectorXd> others;
      for (size_t j = 0; j < vecs.size(); ++j)
        if (j != i) others.push_back(vecs[j]);
      if (others.empty()) continue;
      Eigen::VectorXd c;
      double residual;
      solve_coeffs(others, vecs[i], c, residual);
      if (residual > dep_tol) continue;  // independent direction
      Eigen::VectorXd w = vecs[i];
      bool nontrivial = false;
      for (int j = 0; j < c.size(); ++j) {
        double q = std::round(c(j));
        if (q != 0) nontrivial = true;
        w -= q * others[static_cast<size_t>(j)];
      }
      if (nontrivial && ops.norm(w) < ops.norm(vecs[i]) - vanish_tol) {
        vecs[i] = std::move(w);
        improved = true;
      }
    }

    if (!improved) break;
  }

  std::sort(vecs.begin(), vecs.end(), [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return ops.norm(a) < ops.norm(b);
  });
  std::vector<AlgebraVector> out;
  out.reserve(vecs.size());
  for (auto& v : vecs) {
    for (int i = 0; i < v.size(); ++i) {
      if (std::fabs(v(i)) > vanish_tol) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.emplace_back(spec, std::move(v));
  }
  return out;
}

}  // namespace uniflow::lie
