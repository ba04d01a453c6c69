#include "flow_lab.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "errors.hpp"
#include "good_functions.hpp"

namespace uniflow::flow {

using lie::AlgebraVector;
using lie::ExactGroupElement;
using lie::FloatGroupElement;
using num::IntervalUnion;
using num::Poly;

std::vector<WordElement> enumerate_ball(const DiscreteGroupSpec& spec, const Budget& budget) {
  if (spec.word_radius > budget.word_radius_cap)
    fail(Errc::budget_exceeded, "word radius exceeds the cap");
  for (auto& g : spec.generators)
    if (!g.unimodular()) fail(Errc::precondition, "generator determinant is not exactly 1");

  struct Letter {
    ExactGroupElement g;
    char name;
    int inverse_of;  // index in the alphabet
  };
  std::vector<Letter> alphabet;
  for (size_t i = 0; i < spec.generators.size(); ++i) {
    char lower = static_cast<char>('a' + (i % 26));
    alphabet.push_back({spec.generators[i], lower, static_cast<int>(2 * i + 1)});
    alphabet.push_back({spec.generators[i].inverse_unimodular(),
                        static_cast<char>(lower - 'a' + 'A'), static_cast<int>(2 * i)});
  }

  std::vector<WordElement> out;
  std::unordered_set<std::string> seen;
  const size_t nf = spec.generators.empty() ? 1 : spec.generators.front().blocks.size();
  seen.insert(ExactGroupElement::identity(nf).key());

  struct Node {
    ExactGroupElement g;
    std::string word;
    int last_letter;
  };
  std::deque<Node> frontier;
  frontier.push_back({ExactGroupElement::identity(nf), "", -1});
  for (int depth = 0; depth < spec.word_radius; ++depth) {
    std::deque<Node> next;
    for (auto& node : frontier) {
      for (size_t li = 0; li < alphabet.size(); ++li) {
        if (node.last_letter >= 0 &&
            alphabet[static_cast<size_t>(node.last_letter)].inverse_of == static_cast<int>(li))
          continue;  // reduced words only
        Node child{node.g * alphabet[li].g, node.word + alphabet[li].name, static_cast<int>(li)};
        if (child.g.is_identity()) continue;
        if (!seen.insert(child.g.key()).second) continue;
        out.push_back({child.word, child.g});
        if (static_cast<std::int64_t>(out.size()) > budget.ball_size)
          fail(Errc::budget_exceeded, "word ball exceeds the size budget");
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

double trace_gap_bound(double delta) { return 2.0 * (std::expm1(delta / 2.0) - delta / 2.0); }

bool trace_prefilter(const ExactGroupElement& gamma, double delta) {
  // Inflated slightly so float conversion of the exact trace stays sound.
  const double c = trace_gap_bound(delta) * (1.0 + 1e-9) + 1e-300;
  for (auto& b : gamma.blocks) {
    exact::GaussRational tr = b.trace();
    double re = tr.re.get_d() - 2.0;
    double im = tr.im.get_d();
    if (re * re + im * im > c * c) return false;
  }
  return true;
}

bool is_elliptic_block(const exact::ExactMat2& m) {
  exact::GaussRational tr = m.trace();
  if (!(tr.im == 0)) return false;
  exact::Rational t = tr.re;
  if (t * t < 4) return true;
  if (t == -2) {
    exact::ExactMat2 neg_id;
    neg_id.a = exact::GaussRational(-1);
    neg_id.d = exact::GaussRational(-1);
    return m == neg_id;
  }
  return false;
}

void check_condition_star(const DiscreteGroupSpec& spec, const std::vector<WordElement>& ball) {
  for (auto& w : ball) {
    for (size_t f = 0; f < w.g.blocks.size(); ++f) {
      const auto& block = w.g.blocks[f];
      if (block.is_identity()) continue;  // trivial projection is allowed
      if (is_elliptic_block(block))
        fail(Errc::condition_star, "element '" + w.word + "' has an elliptic projection in factor " +
                                       std::to_string(f));
    }
  }
}

namespace {

/// Per-factor squared-norm polynomials of t -> Ad_{u_t} x.
std::vector<Poly> factor_norm_squares(const AlgebraVector& u, const AlgebraVector& x) {
  const auto& spec = *u.spec;
  auto coord_polys = lie::adjoint_flow_polynomials(u, x);
  const auto& gram = spec.killing_gram();
  std::vector<Poly> out;
  for (int f = 0; f < spec.n_factors(); ++f) {
    const int off = spec.factor_offset(f);
    const int d = spec.factor_dim_of(f);
    Poly acc;
    for (int i = off; i < off + d; ++i)
      for (int j = off; j < off + d; ++j) {
        double g = gram(i, j);
        if (g == 0.0) continue;
        acc = acc + coord_polys[static_cast<size_t>(i)] * coord_polys[static_cast<size_t>(j)] * g;
      }
    out.push_back(num::trimmed(acc, 1e-14));
  }
  return out;
}

AlgebraVector eval_flow(const AlgebraVector& u, const std::vector<Poly>& coord_polys, double t) {
  Eigen::VectorXd c(u.spec->dim());
  for (int i = 0; i < u.spec->dim(); ++i) c(i) = coord_polys[static_cast<size_t>(i)].eval(t);
  return AlgebraVector(u.spec, std::move(c));
}

}  // namespace

BadSetResult bad_set(const DiscreteGroupSpec& spec, const TrajectorySpec& traj,
                     const Budget& budget) {
  if (!(traj.delta > 0)) fail(Errc::precondition, "delta must be positive");
  if (!(traj.horizon > 0)) fail(Errc::precondition, "horizon must be positive");
  if (traj.u.spec.get() != spec.algebra.get())
    fail(Errc::spec_mismatch, "trajectory flow and group live on different specs");
  if (!traj.basepoint.unimodular())
    fail(Errc::precondition, "basepoint determinant is off 1 beyond tolerance");
  if (lie::ad_nilpotency_index(traj.u) < 0) fail(Errc::not_nilpotent, "flow generator not nilpotent");

  auto ball = enumerate_ball(spec, budget);
  if (spec.algebra->n_factors() > 1) check_condition_star(spec, ball);

  BadSetResult out;
  out.horizon = traj.horizon;
  out.ball_size = static_cast<int>(ball.size());

  const FloatGroupElement& g = traj.basepoint;
  FloatGroupElement gi = g.inverse();
  const double t_end = traj.horizon;

  IntervalUnion total;
  for (auto& w : ball) {
    if (!trace_prefilter(w.g, traj.delta)) {
      ++out.pruned_by_trace;
      continue;
    }
    FloatGroupElement h = g * w.g.to_float() * gi;
    auto x = lie::log_principal(spec.algebra, h);
    if (!x) {
      // No principal log: every element of B_delta has one, and conjugation
      // by u_t preserves the spectrum, so h never enters the chart.
      ++out.skipped_nolog;
      continue;
    }
    auto coord_polys = lie::adjoint_flow_polynomials(traj.u, *x);
    auto factor_polys = factor_norm_squares(traj.u, *x);
    IntervalUnion contrib = IntervalUnion::single(0.0, t_end);
    for (auto& q : factor_polys) {
      good::PolyFunction f;
      f.inner = q;
      f.sqrt_wrapped = true;
      f.degree_bound = q.degree();
      contrib = contrib.intersect(good::sublevel_set(f, 0.0, t_end, traj.delta));
      if (contrib.empty()) break;
    }
    if (contrib.empty()) continue;

    // Midpoint round-trip confirmation of each interval; failures are kept
    // out of the union and flagged for refinement.
    std::vector<std::pair<double, double>> confirmed;
    bool any_flagged = false;
    for (auto& part : contrib.parts()) {
      double mid = 0.5 * (part.first + part.second);
      AlgebraVector xt = eval_flow(traj.u, coord_polys, mid);
      FloatGroupElement ut = lie::exp_map(AlgebraVector(traj.u.spec, mid * traj.u.coords));
      FloatGroupElement conj = ut * h * ut.inverse();
      double res = lie::exp_map(xt).dist(conj);
      double norm_sup = 0;
      for (int f = 0; f < spec.algebra->n_factors(); ++f)
        norm_sup = std::max(norm_sup,
                            std::sqrt(std::max(0.0, factor_polys[static_cast<size_t>(f)].eval(mid))));
      if (res <= tols().interval_confirm * (1.0 + xt.coords.norm()) &&
          norm_sup < traj.delta * (1.0 + 1e-6)) {
        confirmed.push_back(part);
      } else {
        any_flagged = true;
      }
    }
    if (any_flagged) out.flagged.push_back(w.word);
    IntervalUnion kept = IntervalUnion::from_pieces(std::move(confirmed));
    if (kept.empty()) continue;
    out.contributions.push_back({w.word, kept});
    total = total.unite(kept);
  }

  out.intervals = total.clip(0.0, t_end);
  out.measure = out.intervals.measure();
  out.proportion = out.measure / t_end;
  out.components = out.intervals.components();
  return out;
}

bool in_injectivity_set(const DiscreteGroupSpec& spec, const FloatGroupElement& basepoint,
                        double delta, const Budget& budget) {
  auto ball = enumerate_ball(spec, budget);
  FloatGroupElement gi = basepoint.inverse();
  for (auto& w : ball) {
    if (!trace_prefilter(w.g, delta)) continue;
    FloatGroupElement h = basepoint * w.g.to_float() * gi;
    auto x = lie::log_principal(spec.algebra, h);
    if (!x) continue;
    double worst = 0;
    const auto& gram = spec.algebra->killing_gram();
    for (int f = 0; f < spec.algebra->n_factors(); ++f) {
      const int off = spec.algebra->factor_offset(f);
      const int d = spec.algebra->factor_dim_of(f);
      double q = x->coords.segment(off, d).dot(
          gram.block(off, off, d, d) * x->coords.segment(off, d));
      worst = std::max(worst, std::sqrt(std::max(0.0, q)));
    }
    if (worst < delta) return false;  // some gamma-conjugate is inside B_delta
  }
  return true;
}

TheoremReport verify_theorem_1_1(const DiscreteGroupSpec& spec, const TrajectorySpec& traj,
                                 double eps, const km::KMConstants& constants,
                                 const Budget& budget) {
  TheoremReport rep;
  rep.eps = eps;
  rep.delta = traj.delta;
  rep.n_factors = spec.algebra->n_factors();
  if (constants.k != spec.algebra->dim())
    fail(Errc::spec_mismatch, "constants were built for a different dimension");
  if (!(traj.delta > 0) || traj.delta > constants.r0)
    fail(Errc::precondition, "delta must lie in (0, r0]");
  if (!in_injectivity_set(spec, traj.basepoint, traj.delta, budget))
    fail(Errc::precondition, "basepoint is not in X_delta");

  rep.c_eps_log10 = rep.n_factors > 1 ? km::product_c_epsilon_log10(eps, rep.n_factors, constants)
                                      : km::c_epsilon_log10(eps, constants);
  double radius_log10 = rep.c_eps_log10 + std::log10(traj.delta);
  if (radius_log10 < -290.0) {
    // The shrunk radius underflows doubles; no float matrix can be that close
    // to the identity, so the bad set at this radius is empty.
    rep.radius = 0.0;
    rep.measured_proportion = 0.0;
  } else {
    rep.radius = std::pow(10.0, radius_log10);
    TrajectorySpec shrunk = traj;
    shrunk.delta = rep.radius;
    rep.measured_proportion = bad_set(spec, shrunk, budget).proportion;
  }
  rep.pass = rep.measured_proportion <= eps * (1.0 + tols().bound_slack);
  return rep;
}

BadSetResult product_bad_set(const std::vector<DiscreteGroupSpec>& factor_specs,
                             const std::vector<TrajectorySpec>& factor_trajs, double delta,
                             const Budget& budget) {
  if (factor_specs.empty() || factor_specs.size() != factor_trajs.size())
    fail(Errc::precondition, "factor specs and trajectories must pair up");
  double horizon = factor_trajs.front().horizon;
  BadSetResult out;
  out.horizon = horizon;
  IntervalUnion acc = IntervalUnion::single(0.0, horizon);
  for (size_t f = 0; f < factor_specs.size(); ++f) {
    auto ball = enumerate_ball(factor_specs[f], budget);
    check_condition_star(factor_specs[f], ball);
    TrajectorySpec traj = factor_trajs[f];
    traj.delta = delta;
    traj.horizon = horizon;
    BadSetResult factor = bad_set(factor_specs[f], traj, budget);
    out.ball_size += factor.ball_size;
    out.pruned_by_trace += factor.pruned_by_trace;
    out.skipped_nolog += factor.skipped_nolog;
    acc = acc.intersect(factor.intervals);
    if (acc.empty()) break;
  }
  out.intervals = acc.clip(0.0, horizon);
  out.measure = out.intervals.measure();
  out.proportion = out.measure / horizon;
  out.components = out.intervals.components();
  return out;
}

}  // namespace uniflow::flow
