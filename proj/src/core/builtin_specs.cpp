#include "builtin_specs.hpp"

#include <cmath>

#include "errors.hpp"

namespace uniflow::runner {

using exact::ExactMat2;
using exact::GaussRational;
using exact::Rational;
using lie::ExactGroupElement;

namespace {

GaussRational gq(long num, long den = 1, long inum = 0, long iden = 1) {
  return GaussRational(Rational(num, den), Rational(inum, iden));
}

ExactMat2 m2(GaussRational a, GaussRational b, GaussRational c, GaussRational d) {
  ExactMat2 m;
  m.a = a;
  m.b = b;
  m.c = c;
  m.d = d;
  return m;
}

ExactGroupElement one_factor(ExactMat2 m) {
  ExactGroupElement g;
  g.blocks.push_back(std::move(m));
  return g;
}

ExactGroupElement two_factor(ExactMat2 m1, ExactMat2 m2v) {
  ExactGroupElement g;
  g.blocks.push_back(std::move(m1));
  g.blocks.push_back(std::move(m2v));
  return g;
}

std::vector<GroupCatalogEntry> build_catalog() {
  std::vector<GroupCatalogEntry> out;
  auto sl2r = lie::LieAlgebraSpec::sl2r();
  auto sl2c = lie::LieAlgebraSpec::sl2c_real();
  auto prod_rr = lie::LieAlgebraSpec::make({lie::FactorType::sl2r, lie::FactorType::sl2r});

  {
    flow::DiscreteGroupSpec s;
    s.algebra = sl2r;
    s.generators = {one_factor(m2(gq(1), gq(1), gq(0), gq(1)))};
    s.word_radius = 8;
    s.name = "parabolic_cyclic";
    s.torsion_free = true;
    s.is_lattice = false;
    s.satisfies_star = true;
    out.push_back({s, "cyclic group generated by the unit upper parabolic"});
  }
  {
    flow::DiscreteGroupSpec s;
    s.algebra = sl2r;
    s.generators = {one_factor(m2(gq(0), gq(-1), gq(1), gq(0))),
                    one_factor(m2(gq(1), gq(1), gq(0), gq(1)))};
    s.word_radius = 6;
    s.name = "sl2z";
    s.torsion_free = false;  // -I = S^2; elliptic elements exist
    s.is_lattice = true;
    s.satisfies_star = false;
    out.push_back({s, "SL(2,Z); has torsion, used for machinery tests only"});
  }
  {
    // Two hyperbolic generators with isometric circles |z|=1, |z-4|=1,
    // |z-8|=1, |z-12|=1: pairwise disjoint, so the group is free, discrete,
    // torsion free, and of infinite covolume.
    flow::DiscreteGroupSpec s;
    s.algebra = sl2r;
    s.generators = {one_factor(m2(gq(0), gq(1), gq(-1), gq(4))),
                    one_factor(m2(gq(-12), gq(97), gq(-1), gq(8)))};
    s.word_radius = 5;
    s.name = "schottky_rank2";
    s.torsion_free = true;
    s.is_lattice = false;
    s.satisfies_star = true;
    out.push_back({s, "rational Schottky group on two hyperbolic generators"});
  }
  {
    flow::DiscreteGroupSpec s;
    s.algebra = sl2c;
    s.generators = {one_factor(m2(gq(1), gq(1), gq(0), gq(1))),
                    one_factor(m2(gq(1), gq(0, 1, 1), gq(0), gq(1)))};
    s.word_radius = 6;
    s.name = "gauss_parabolic";
    s.torsion_free = true;
    s.is_lattice = false;
    s.satisfies_star = true;
    out.push_back({s, "Z[i]-type parabolic subgroup of SL(2,C)"});
  }
  {
    // One generator pairing unit translation with an 89/55 translation; the
    // two units are incommensurable at every reachable word length.
    flow::DiscreteGroupSpec s;
    s.algebra = prod_rr;
    s.generators = {two_factor(m2(gq(1), gq(1), gq(0), gq(1)),
                               m2(gq(1), gq(89, 55), gq(0), gq(1)))};
    s.word_radius = 8;
    s.name = "pair_parabolic_incommensurable";
    s.torsion_free = true;
    s.is_lattice = false;
    s.satisfies_star = true;
    out.push_back({s, "product-coupled parabolic with incommensurable translation units"});
  }
  {
    flow::DiscreteGroupSpec s;
    s.algebra = prod_rr;
    s.generators = {two_factor(m2(gq(0), gq(1), gq(-1), gq(4)),
                               m2(gq(1), gq(1), gq(0), gq(1)))};
    s.word_radius = 6;
    s.name = "pair_hyperbolic_parabolic";
    s.torsion_free = true;
    s.is_lattice = false;
    s.satisfies_star = true;
    out.push_back({s, "product pairing a hyperbolic factor with a parabolic factor"});
  }
  return out;
}

}  // namespace

const std::vector<GroupCatalogEntry>& builtin_groups() {
  static const std::vector<GroupCatalogEntry> catalog = build_catalog();
  return catalog;
}

bool has_builtin_group(const std::string& name) {
  for (auto& e : builtin_groups())
    if (e.spec.name == name) return true;
  return false;
}

flow::DiscreteGroupSpec builtin_group(const std::string& name) {
  for (auto& e : builtin_groups())
    if (e.spec.name == name) return e.spec;
  fail(Errc::invalid_config, "unknown builtin group '" + name + "'");
}

lie::SpecPtr algebra_by_name(const std::string& name) {
  if (name == "sl2r") return lie::LieAlgebraSpec::sl2r();
  if (name == "sl2c_real") return lie::LieAlgebraSpec::sl2c_real();
  // product names: factors joined by "_x_"
  std::vector<lie::FactorType> factors;
  size_t pos = 0;
  while (pos < name.size()) {
    size_t next = name.find("_x_", pos);
    std::string part = name.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (part == "sl2r")
      factors.push_back(lie::FactorType::sl2r);
    else if (part == "sl2c_real")
      factors.push_back(lie::FactorType::sl2c_real);
    else
      fail(Errc::invalid_config, "unknown algebra '" + name + "'");
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  if (factors.empty()) fail(Errc::invalid_config, "unknown algebra '" + name + "'");
  return lie::LieAlgebraSpec::make(std::move(factors), name);
}

std::vector<std::string> algebra_names() {
  return {"sl2r", "sl2c_real", "sl2r_x_sl2r", "sl2c_real_x_sl2c_real", "sl2r_x_sl2c_real"};
}

int default_l_m(const lie::SpecPtr& spec) {
  int l = 1;
  for (auto f : spec->factors()) l *= lie::default_l_m(f);
  return l;
}

lie::AlgebraVector upper_direction(const lie::SpecPtr& spec) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(spec->dim());
  for (int f = 0; f < spec->n_factors(); ++f) c(spec->factor_offset(f) + 1) = 1.0;  // E slot
  return lie::AlgebraVector(spec, std::move(c));
}

lattice::LatticeBasis random_lattice(Rng& rng, int dim, int rank, double scale_lo,
                                     double scale_hi) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<std::vector<double>> rows(static_cast<size_t>(rank),
                                          std::vector<double>(static_cast<size_t>(dim), 0.0));
    for (auto& r : rows)
      for (auto& v : r) v = static_cast<double>(rng.int_in(-3, 3));
    auto b = lattice::LatticeBasis::from_rows(rows);
    Eigen::MatrixXd g = b.gram();
    if (g.determinant() < 1e-6) continue;  // dependent draw, retry
    double scale = scale_lo == scale_hi ? scale_lo : rng.real_in(scale_lo, scale_hi);
    return scale == 1.0 ? b : b.scaled(scale);
  }
  fail(Errc::internal, "failed to draw an independent random lattice");
}

Eigen::MatrixXd random_nilpotent_matrix(Rng& rng, int dim) {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(dim, dim);
  bool nonzero = false;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      n(i, j) = rng.real_in(-1.5, 1.5);
      if (std::fabs(n(i, j)) > 1e-3) nonzero = true;
    }
  if (!nonzero) n(0, dim - 1) = 1.0;
  // Conjugation by a rotation keeps nilpotency and mixes the box alignment.
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) {
    double th = rng.real_in(0, 2 * M_PI);
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(dim, dim);
    r(i, i) = std::cos(th);
    r(i, i + 1) = -std::sin(th);
    r(i + 1, i) = std::sin(th);
    r(i + 1, i + 1) = std::cos(th);
    q = q * r;
  }
  return q * n * q.transpose();
}

lie::AlgebraVector random_nilpotent_direction(Rng& rng, const lie::SpecPtr& spec) {
  // Conjugate of a scaled E in every factor: Ad_g is an automorphism, so the
  // result is nilpotent exactly.
  Eigen::VectorXd seed = Eigen::VectorXd::Zero(spec->dim());
  for (int f = 0; f < spec->n_factors(); ++f) {
    double c = rng.real_in(0.2, 1.5) * (rng.unit() < 0.5 ? -1.0 : 1.0);
    seed(spec->factor_offset(f) + 1) = c;
  }
  lie::FloatGroupElement g = random_basepoint(rng, spec, 0.7);
  return lie::adjoint_group(g, lie::AlgebraVector(spec, seed));
}

lie::FloatGroupElement random_basepoint(Rng& rng, const lie::SpecPtr& spec, double spread) {
  auto draw = [&]() {
    Eigen::VectorXd c(spec->dim());
    for (int i = 0; i < spec->dim(); ++i) c(i) = rng.real_in(-spread, spread);
    return lie::exp_map(lie::AlgebraVector(spec, c));
  };
  return draw() * draw();
}

}  // namespace uniflow::runner
