#include "poly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace uniflow::num {

Poly to_double_poly(const RatPoly& p) {
  std::vector<double> c(p.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = p.coeffs()[i].get_d();
  return Poly(std::move(c));
}

Poly trimmed(const Poly& p, double rel_tol) {
  double maxc = 0;
  for (double v : p.coeffs()) maxc = std::max(maxc, std::fabs(v));
  if (maxc == 0) return Poly();
  std::vector<double> c = p.coeffs();
  while (!c.empty() && std::fabs(c.back()) <= rel_tol * maxc) c.pop_back();
  return Poly(std::move(c));
}

namespace {

// Normalized Sturm chain. Each element is scaled to unit max coefficient;
// positive scaling preserves the sign variation count.
struct SturmChain {
  std::vector<std::vector<double>> seq;

  static std::vector<double> normalize(std::vector<double> v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    if (m == 0) return {};
    for (double& x : v) x /= m;
    while (!v.empty() && std::fabs(v.back()) <= 1e-14) v.pop_back();
    return v;
  }

  explicit SturmChain(const Poly& p) {
    auto p0 = normalize(p.coeffs());
    if (p0.empty()) return;
    seq.push_back(p0);
    auto p1 = normalize(Poly(p0).derivative().coeffs());
    if (p1.empty()) return;
    seq.push_back(p1);
    while (seq.back().size() > 1) {
      auto rem = neg_remainder(seq[seq.size() - 2], seq.back());
      rem = normalize(std::move(rem));
      if (rem.empty()) break;  // gcd reached: multiple roots, chain still valid
      seq.push_back(std::move(rem));
    }
  }

  // -(a mod b) by synthetic division.
  static std::vector<double> neg_remainder(std::vector<double> a, const std::vector<double>& b) {
    const size_t db = b.size() - 1;
    while (a.size() > db) {
      double q = a.back() / b.back();
      const size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
      a.pop_back();
    }
    for (double& x : a) x = -x;
    return a;
  }

  static double eval(const std::vector<double>& c, double x) {
    double acc = 0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }

  int variations(double x) const {
    int count = 0;
    int prev = 0;
    for (auto& c : seq) {
      double v = eval(c, x);
      int s = (v > 0) - (v < 0);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++count;
      prev = s;
    }
    return count;
  }

  int count_in(double lo, double hi) const { return variations(lo) - variations(hi); }
};

std::vector<double> roots_by_companion(const Poly& p, double lo, double hi, double tol) {
  Poly q = trimmed(p);
  const int d = q.degree();
  std::vector<double> out;
  if (d <= 0) return out;
  if (d == 1) {
    double r = -q.coeff(0) / q.coeff(1);
    if (r >= lo - tol && r <= hi + tol) out.push_back(std::clamp(r, lo, hi));
    return out;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  const double lead = q.coeff(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -q.coeff(static_cast<size_t>(i)) / lead;
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  std::vector<double> cands;
  const double span = std::max(1.0, std::fabs(hi - lo));
  for (int i = 0; i < d; ++i) {
    auto ev = es.eigenvalues()(i);
    if (std::fabs(ev.imag()) > 1e-7 * (1.0 + std::fabs(ev.real()))) continue;
    double r = ev.real();
    if (r < lo - 1e-6 * span || r > hi + 1e-6 * span) continue;
    cands.push_back(std::clamp(r, lo, hi));
  }
  std::sort(cands.begin(), cands.end());
  // Polish by bisection where a sign change brackets the candidate.
  for (double r : cands) {
    double a = std::max(lo, r - 1e-4 * span), b = std::min(hi, r + 1e-4 * span);
    double fa = q.eval(a), fb = q.eval(b);
    if (fa == 0) { out.push_back(a); continue; }
    if (fb == 0) { out.push_back(b); continue; }
    if ((fa < 0) != (fb < 0)) {
      while (b - a > tol) {
        double m = 0.5 * (a + b);
        double fm = q.eval(m);
        if (fm == 0) { a = b = m; break; }
        if ((fa < 0) != (fm < 0)) { b = m; fb = fm; }
        else { a = m; fa = fm; }
      }
      out.push_back(0.5 * (a + b));
    } else {
      out.push_back(r);  // tangency or near-double root
    }
  }
  // Deduplicate.
  std::vector<double> dedup;
  for (double r : out)
    if (dedup.empty() || r - dedup.back() > tol) dedup.push_back(r);
  return dedup;
}

void isolate_rec(const SturmChain& chain, double lo, double hi, double tol,
                 std::vector<double>& out, int depth) {
  int n = chain.count_in(lo, hi);
  if (n <= 0) return;
  if (hi - lo <= tol || depth > 80) {
    out.push_back(0.5 * (lo + hi));  // cluster of n roots within tol
    return;
  }
  double mid = 0.5 * (lo + hi);
  isolate_rec(chain, lo, mid, tol, out, depth + 1);
  isolate_rec(chain, mid, hi, tol, out, depth + 1);
}

}  // namespace

std::vector<double> real_roots_in_interval(const Poly& p, double lo, double hi,
                                           const RootOptions& opt) {
  if (!(lo < hi)) return {};
  Poly q = trimmed(p);
  const int d = q.degree();
  if (d <= 0) return {};
  if (opt.force_companion || d > 40) return roots_by_companion(q, lo, hi, opt.endpoint_tol);

  SturmChain chain(q);
  if (chain.seq.size() < 2) return roots_by_companion(q, lo, hi, opt.endpoint_tol);

  // Nudge endpoints off roots of the first chain element so that the
  // variation counts are well defined; the nudge is below endpoint_tol.
  double span = hi - lo;
  double eps = std::min(opt.endpoint_tol, 1e-9 * span) * 0.5;
  double a = lo, b = hi;
  if (std::fabs(q.eval(a)) < 1e-300) a -= eps;
  if (std::fabs(q.eval(b)) < 1e-300) b += eps;

  std::vector<double> out;
  isolate_rec(chain, a, b, opt.endpoint_tol, out, 0);
  std::sort(out.begin(), out.end());
  std::vector<double> dedup;
  for (double r : out)
    if (dedup.empty() || r - dedup.back() > opt.endpoint_tol) dedup.push_back(std::clamp(r, lo, hi));
  return dedup;
}

std::pair<double, double> range_on_interval(const Poly& p, double lo, double hi) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  auto consider = [&](double x) {
    double v = p.eval(x);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  };
  consider(lo);
  consider(hi);
  for (double r : real_roots_in_interval(p.derivative(), lo, hi)) consider(r);
  return {mn, mx};
}

double sup_abs_on_interval(const Poly& p, double lo, double hi) {
  auto [mn, mx] = range_on_interval(p, lo, hi);
  return std::max(std::fabs(mn), std::fabs(mx));
}

}  // namespace uniflow::num
