#include "lattice_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "errors.hpp"

namespace uniflow::lattice {

Eigen::MatrixXd LatticeBasis::gram() const {
  const int m = rank();
  Eigen::MatrixXd g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      g(i, j) = vectors[static_cast<size_t>(i)].dot(vectors[static_cast<size_t>(j)]);
  return g;
}

Eigen::MatrixXd LatticeBasis::as_columns() const {
  Eigen::MatrixXd v(ambient_dim, rank());
  for (int j = 0; j < rank(); ++j) v.col(j) = vectors[static_cast<size_t>(j)];
  return v;
}

LatticeBasis LatticeBasis::standard(int k) {
  LatticeBasis b;
  b.ambient_dim = k;
  std::vector<std::vector<exact::Rational>> ex;
  for (int i = 0; i < k; ++i) {
    b.vectors.push_back(Eigen::VectorXd::Unit(k, i));
    std::vector<exact::Rational> row(static_cast<size_t>(k), exact::Rational(0));
    row[static_cast<size_t>(i)] = 1;
    ex.push_back(std::move(row));
  }
  b.exact_coords = std::move(ex);
  return b;
}

LatticeBasis LatticeBasis::from_rows(const std::vector<std::vector<double>>& rows) {
  LatticeBasis b;
  if (rows.empty()) fail(Errc::precondition, "empty lattice basis");
  b.ambient_dim = static_cast<int>(rows.front().size());
  for (auto& r : rows) {
    Eigen::VectorXd v(b.ambient_dim);
    for (int i = 0; i < b.ambient_dim; ++i) v(i) = r[static_cast<size_t>(i)];
    b.vectors.push_back(std::move(v));
  }
  return b;
}

LatticeBasis LatticeBasis::from_exact_rows(const std::vector<std::vector<exact::Rational>>& rows) {
  LatticeBasis b;
  if (rows.empty()) fail(Errc::precondition, "empty lattice basis");
  b.ambient_dim = static_cast<int>(rows.front().size());
  for (auto& r : rows) {
    Eigen::VectorXd v(b.ambient_dim);
    for (int i = 0; i < b.ambient_dim; ++i) v(i) = r[static_cast<size_t>(i)].get_d();
    b.vectors.push_back(std::move(v));
  }
  b.exact_coords = rows;
  return b;
}

LatticeBasis LatticeBasis::scaled(double c) const {
  LatticeBasis b = *this;
  for (auto& v : b.vectors) v *= c;
  b.exact_coords.reset();
  return b;
}

LatticeBasis LatticeBasis::transformed(const Eigen::MatrixXd& m) const {
  LatticeBasis b;
  b.ambient_dim = static_cast<int>(m.rows());
  for (auto& v : vectors) b.vectors.push_back(m * v);
  return b;
}

WedgeNorm covolume(const LatticeBasis& b) {
  if (b.rank() == 0) fail(Errc::precondition, "covolume of a rank-0 basis");
  Eigen::MatrixXd g = b.gram();
  double det = g.determinant();
  if (det <= 0) fail(Errc::degenerate_gram, "dependent basis: Gram determinant is not positive");
  return WedgeNorm{std::sqrt(det)};
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

struct Enumerator {
  Eigen::MatrixXd r;  // upper-triangular Cholesky factor of the Gram matrix
  int m;
  long box;
  double bound2;
  std::int64_t nodes = 0;
  std::int64_t node_budget;
  std::vector<long> current;
  std::vector<std::vector<long>> found;

  void run() {
    current.assign(static_cast<size_t>(m), 0);
    descend(m - 1, 0.0, std::vector<double>(static_cast<size_t>(m), 0.0));
  }

  // level i: choose a_i; partial[j] = sum_{l>i} r(j,l) a_l for j <= i.
  void descend(int i, double used, const std::vector<double>& partial) {
    if (i < 0) {
      bool all_zero = std::all_of(current.begin(), current.end(), [](long a) { return a == 0; });
      if (!all_zero) {
        // Half-space: keep the representative whose last nonzero entry is > 0.
        for (int j = m - 1; j >= 0; --j) {
          if (current[static_cast<size_t>(j)] != 0) {
            if (current[static_cast<size_t>(j)] > 0) found.push_back(current);
            break;
          }
        }
      }
      return;
    }
    if (++nodes > node_budget) fail(Errc::budget_exceeded, "lattice enumeration budget exceeded");
    const double rii = r(i, i);
    const double c = partial[static_cast<size_t>(i)];
    const double rem = bound2 - used;
    if (rem < 0) return;
    const double half = std::sqrt(rem);
    long lo = static_cast<long>(std::ceil((-half - c) / rii - 1e-12));
    long hi = static_cast<long>(std::floor((half - c) / rii + 1e-12));
    lo = std::max(lo, -box);
    hi = std::min(hi, box);
    for (long a = lo; a <= hi; ++a) {
      current[static_cast<size_t>(i)] = a;
      const double y = rii * a + c;
      std::vector<double> next = partial;
      for (int j = 0; j < i; ++j) next[static_cast<size_t>(j)] += r(j, i) * a;
      descend(i - 1, used + y * y, next);
    }
    current[static_cast<size_t>(i)] = 0;
  }
};

std::vector<std::vector<long>> enumerate_below(const Eigen::MatrixXd& gram, double bound,
                                               const Budget& budget) {
  const int m = static_cast<int>(gram.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  double lmin = es.eigenvalues().minCoeff();
  if (lmin <= 0) fail(Errc::degenerate_gram, "Gram matrix not positive definite");
  long box = static_cast<long>(std::ceil(bound / std::sqrt(lmin)));
  double box_count = 1;
  for (int i = 0; i < m; ++i) box_count *= (2.0 * static_cast<double>(box) + 1.0);
  if (box_count > static_cast<double>(budget.d1_box))
    fail(Errc::box_too_large, "coefficient box has " + std::to_string(box_count) + " candidates");

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) fail(Errc::degenerate_gram, "Cholesky failed");
  Enumerator en;
  en.r = llt.matrixU();
  en.m = m;
  en.box = box;
  en.bound2 = bound * bound * (1.0 + 1e-12);
  en.node_budget = budget.d1_box;
  en.run();
  return std::move(en.found);
}

}  // namespace

std::vector<std::vector<long>> vectors_below(const LatticeBasis& b, double bound,
                                             const Budget& budget) {
  return enumerate_below(b.gram(), bound, budget);
}

ShortestVector shortest_vector_d1(const LatticeBasis& b, const Budget& budget) {
  if (b.rank() == 0) fail(Errc::precondition, "d1 of a rank-0 lattice");
  Eigen::MatrixXd g = b.gram();
  double upper = std::sqrt(g.diagonal().minCoeff());
  auto cands = enumerate_below(g, upper, budget);
  ShortestVector best;
  best.length = upper;
  // seed with the shortest basis vector
  int seed_i = 0;
  g.diagonal().minCoeff(&seed_i);
  best.coeffs.assign(static_cast<size_t>(b.rank()), 0);
  best.coeffs[static_cast<size_t>(seed_i)] = 1;
  best.vector = b.vectors[static_cast<size_t>(seed_i)];
  for (auto& a : cands) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(b.ambient_dim);
    for (int i = 0; i < b.rank(); ++i) v += static_cast<double>(a[static_cast<size_t>(i)]) * b.vectors[static_cast<size_t>(i)];
    double n = v.norm();
    if (n < best.length) {
      best.length = n;
      best.vector = v;
      best.coeffs = a;
    }
  }
  return best;
}

D1BoundReport check_d1_covolume_bound(const LatticeBasis& b, const Budget& budget) {
  D1BoundReport r{};
  r.d1 = shortest_vector_d1(b, budget).length;
  r.bound = 4.0 * std::pow(covolume(b).value, 1.0 / b.rank());
  r.pass = r.d1 <= r.bound * (1.0 + tols().bound_slack);
  return r;
}

double minkowski_cutoff(int rank, double c_bound, double d1) {
  // Unit-ball volume V_r = pi^{r/2} / Gamma(r/2 + 1).
  double vr = std::pow(M_PI, rank / 2.0) / std::tgamma(rank / 2.0 + 1.0);
  return std::pow(2.0, rank) * c_bound / (vr * std::pow(d1, rank - 1));
}

exact::IntMat saturated_coeff_rows(const std::vector<std::vector<long>>& coeff_rows, int k) {
  exact::IntMat rows;
  for (auto& r : coeff_rows) {
    exact::IntRow row(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) row[static_cast<size_t>(i)] = r[static_cast<size_t>(i)];
    rows.push_back(std::move(row));
  }
  return exact::saturate_rows(rows, k);
}

LatticeBasis from_coeff_rows(const exact::IntMat& rows, const LatticeBasis& ambient) {
  LatticeBasis out;
  out.ambient_dim = ambient.ambient_dim;
  std::vector<std::vector<exact::Rational>> ex;
  const bool have_exact = ambient.exact_coords.has_value();
  for (auto& r : rows) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(ambient.ambient_dim);
    std::vector<exact::Rational> row(static_cast<size_t>(ambient.ambient_dim), exact::Rational(0));
    for (int i = 0; i < ambient.rank(); ++i) {
      double c = r[static_cast<size_t>(i)].get_d();
      v += c * ambient.vectors[static_cast<size_t>(i)];
      if (have_exact)
        for (int j = 0; j < ambient.ambient_dim; ++j)
          row[static_cast<size_t>(j)] += exact::Rational(r[static_cast<size_t>(i)]) *
                                         (*ambient.exact_coords)[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    out.vectors.push_back(std::move(v));
    if (have_exact) ex.push_back(std::move(row));
  }
  if (have_exact) out.exact_coords = std::move(ex);
  return out;
}

std::vector<LatticeBasis> primitive_subgroups_below(const LatticeBasis& b, double c_bound,
                                                    const Budget& budget) {
  const int k = b.rank();
  if (k != b.ambient_dim)
    fail(Errc::precondition, "primitive subgroup enumeration needs a full-rank lattice");
  if (!(c_bound > 0) || !std::isfinite(c_bound))
    fail(Errc::precondition, "covolume cutoff must be positive and finite");

  const double d1 = shortest_vector_d1(b, budget).length;
  double cutoff = 0;
  for (int r = 1; r <= k; ++r) cutoff = std::max(cutoff, minkowski_cutoff(r, c_bound, d1));

  auto vecs = vectors_below(b, cutoff, budget);
  std::int64_t work = 0;

  // Rank-by-rank span building over saturated canonical coefficient rows.
  std::map<std::string, exact::IntMat> current;  // canonical key -> rows
  std::vector<LatticeBasis> out;
  std::set<std::string> emitted;

  // rank 1 seeds
  for (auto& a : vecs) {
    if (++work > budget.candidates) fail(Errc::budget_exceeded, "primitive subgroup budget");
    auto sat = saturated_coeff_rows({a}, k);
    current.emplace(exact::intmat_key(sat), sat);
  }

  for (int r = 1; r <= k; ++r) {
    std::map<std::string, exact::IntMat> next;
    for (auto& [key, rows] : current) {
      LatticeBasis sub = from_coeff_rows(rows, b);
      double cov = covolume(sub).value;
      if (cov < c_bound && emitted.insert(key).second) out.push_back(sub);
      if (r == k) continue;
      // extend by one vector
      for (auto& a : vecs) {
        if (++work > budget.candidates) fail(Errc::budget_exceeded, "primitive subgroup budget");
        exact::IntMat ext = rows;
        exact::IntRow row(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) row[static_cast<size_t>(i)] = a[static_cast<size_t>(i)];
        ext.push_back(std::move(row));
        ext = exact::hnf(std::move(ext));
        if (static_cast<int>(ext.size()) != r + 1) continue;  // dependent, same span
        auto sat = exact::saturate_rows(ext, k);
        next.emplace(exact::intmat_key(sat), sat);
      }
    }
    current = std::move(next);
  }

  // The full lattice is always primitive; include it when its covolume is
  // below the cutoff (the vector list may not span everything).
  double full_cov = covolume(b).value;
  if (full_cov < c_bound) {
    exact::IntMat id(static_cast<size_t>(k), exact::IntRow(static_cast<size_t>(k), 0));
    for (int i = 0; i < k; ++i) id[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
    std::string key = exact::intmat_key(id);
    if (emitted.insert(key).second) out.push_back(from_coeff_rows(id, b));
  }

  std::sort(out.begin(), out.end(), [](const LatticeBasis& x, const LatticeBasis& y) {
    if (x.rank() != y.rank()) return x.rank() < y.rank();
    return covolume(x).value < covolume(y).value;
  });
  return out;
}

LatticeBasis saturate(const LatticeBasis& span, const LatticeBasis& ambient) {
  const int k = ambient.rank();
  std::vector<std::vector<long>> coeffs;
  if (span.exact_coords && ambient.exact_coords) {
    auto sol = exact::solve_in_row_basis(*ambient.exact_coords, *span.exact_coords);
    for (auto& row : sol) {
      std::vector<long> r;
      for (auto& q : row) {
        if (q.get_den() != 1)
          fail(Errc::precondition, "span vector is not an integer combination of the ambient basis");
        r.push_back(static_cast<long>(q.get_num().get_si()));
      }
      coeffs.push_back(std::move(r));
    }
  } else {
    // Float path: least squares + rounding with a residual guard.
    Eigen::MatrixXd a = ambient.as_columns();
    for (auto& v : span.vectors) {
      Eigen::VectorXd c = a.colPivHouseholderQr().solve(v);
      std::vector<long> r(static_cast<size_t>(k));
      Eigen::VectorXd rounded(k);
      for (int i = 0; i < k; ++i) {
        rounded(i) = std::round(c(i));
        r[static_cast<size_t>(i)] = static_cast<long>(rounded(i));
      }
      double res = (a * rounded - v).norm();
      if (res > 1e-9 * std::max(1.0, v.norm()))
        fail(Errc::precondition, "span vector is not an integer combination of the ambient basis");
      coeffs.push_back(std::move(r));
    }
  }
  auto sat = saturated_coeff_rows(coeffs, k);
  return from_coeff_rows(sat, ambient);
}

}  // namespace uniflow::lattice
