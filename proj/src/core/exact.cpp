#include "exact.hpp"

#include <algorithm>

namespace uniflow::exact {

namespace {

int first_nonzero(const IntRow& r) {
  for (size_t j = 0; j < r.size(); ++j)
    if (r[j] != 0) return static_cast<int>(j);
  return -1;
}

}  // namespace

IntMat hnf(IntMat m) {
  if (m.empty()) return m;
  const size_t n = m[0].size();
  size_t row = 0;
  for (size_t col = 0; col < n && row < m.size(); ++col) {
    // Euclidean elimination in this column below `row`.
    while (true) {
      size_t pivot = m.size();
      for (size_t i = row; i < m.size(); ++i) {
        if (m[i][col] != 0 && (pivot == m.size() || cmp(abs(m[i][col]), abs(m[pivot][col])) < 0))
          pivot = i;
      }
      if (pivot == m.size()) break;  // column is zero below `row`
      std::swap(m[row], m[pivot]);
      bool clean = true;
      for (size_t i = row + 1; i < m.size(); ++i) {
        if (m[i][col] == 0) continue;
        Integer q = m[i][col] / m[row][col];  // truncated division is fine: we iterate
        for (size_t j = 0; j < n; ++j) m[i][j] -= q * m[row][j];
        if (m[i][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (m[row][col] == 0) continue;
    if (m[row][col] < 0)
      for (size_t j = 0; j < n; ++j) m[row][j] = -m[row][j];
    // Reduce the rows above this pivot.
    for (size_t i = 0; i < row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), m[i][col].get_mpz_t(), m[row][col].get_mpz_t());
      if (q != 0)
        for (size_t j = 0; j < n; ++j) m[i][j] -= q * m[row][j];
    }
    ++row;
  }
  m.resize(row);
  return m;
}

IntMat integer_kernel(const IntMat& m, int n_cols) {
  // Column reduction of m with the same column operations applied to an
  // identity matrix U; columns of U matching zero columns of the reduced m
  // form a kernel basis.
  const size_t rows = m.size();
  const size_t n = static_cast<size_t>(n_cols);
  // Work on columns: a[i][j], u[i][j] where j indexes columns.
  IntMat a(rows, IntRow(n, 0));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < n && j < m[i].size(); ++j) a[i][j] = m[i][j];
  IntMat u(n, IntRow(n, 0));
  for (size_t j = 0; j < n; ++j) u[j][j] = 1;

  auto col_sub = [&](size_t dst, size_t src, const Integer& q) {
    if (q == 0) return;
    for (size_t i = 0; i < rows; ++i) a[i][dst] -= q * a[i][src];
    for (size_t i = 0; i < n; ++i) u[i][dst] -= q * u[i][src];
  };
  auto col_swap = [&](size_t x, size_t y) {
    if (x == y) return;
    for (size_t i = 0; i < rows; ++i) std::swap(a[i][x], a[i][y]);
    for (size_t i = 0; i < n; ++i) std::swap(u[i][x], u[i][y]);
  };

  size_t col = 0;
  for (size_t i = 0; i < rows && col < n; ++i) {
    while (true) {
      size_t pivot = n;
      for (size_t j = col; j < n; ++j)
        if (a[i][j] != 0 && (pivot == n || cmp(abs(a[i][j]), abs(a[i][pivot])) < 0)) pivot = j;
      if (pivot == n) break;
      col_swap(col, pivot);
      bool clean = true;
      for (size_t j = col + 1; j < n; ++j) {
        if (a[i][j] == 0) continue;
        Integer q = a[i][j] / a[i][col];
        col_sub(j, col, q);
        if (a[i][j] != 0) clean = false;
      }
      if (clean) break;
    }
    if (a[i][col] != 0) ++col;
  }

  IntMat kernel;
  for (size_t j = col; j < n; ++j) {
    // Column j of the reduced matrix must be zero.
    bool zero = true;
    for (size_t i = 0; i < rows; ++i)
      if (a[i][j] != 0) { zero = false; break; }
    if (!zero) continue;
    IntRow v(n);
    for (size_t i = 0; i < n; ++i) v[i] = u[i][j];
    kernel.push_back(std::move(v));
  }
  return hnf(std::move(kernel));
}

IntMat saturate_rows(const IntMat& rows, int n_cols) {
  if (rows.empty()) return {};
  // v is in the saturation iff v is orthogonal to every rational kernel
  // vector of the row-span's annihilator; equivalently v in Z^n with
  // N v = 0 where the rows of N span { w : rows * w = 0 }.
  std::vector<std::vector<Rational>> qrows(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    qrows[i].reserve(n_cols);
    for (int j = 0; j < n_cols; ++j) qrows[i].emplace_back(rows[i][j]);
  }
  auto null_rows = rational_kernel(qrows, n_cols);
  if (null_rows.empty()) {
    // Full row span: saturation is all of Z^n.
    IntMat id(n_cols, IntRow(n_cols, 0));
    for (int j = 0; j < n_cols; ++j) id[j][j] = 1;
    return id;
  }
  // Clear denominators of each kernel row to get an integer matrix N.
  IntMat n_int;
  for (auto& r : null_rows) {
    Integer lcm = 1;
    for (auto& q : r) lcm = ::lcm(lcm, q.get_den());
    IntRow row(n_cols);
    for (int j = 0; j < n_cols; ++j) {
      Rational scaled = r[j] * Rational(lcm);
      scaled.canonicalize();
      row[j] = scaled.get_num();
    }
    n_int.push_back(std::move(row));
  }
  return integer_kernel(n_int, n_cols);
}

std::vector<std::vector<Rational>> rational_kernel(const std::vector<std::vector<Rational>>& rows,
                                                   int n_cols) {
  // Gauss-Jordan over Q; free columns generate the kernel.
  std::vector<std::vector<Rational>> a = rows;
  const size_t n = static_cast<size_t>(n_cols);
  std::vector<int> pivot_col_of_row;
  size_t r = 0;
  for (size_t c = 0; c < n && r < a.size(); ++c) {
    size_t p = a.size();
    for (size_t i = r; i < a.size(); ++i)
      if (a[i][c] != 0) { p = i; break; }
    if (p == a.size()) continue;
    std::swap(a[r], a[p]);
    Rational inv = 1 / a[r][c];
    for (size_t j = 0; j < n; ++j) a[r][j] *= inv;
    for (size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (size_t j = 0; j < n; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col_of_row.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col_of_row) is_pivot[static_cast<size_t>(c)] = true;

  std::vector<std::vector<Rational>> kernel;
  for (size_t free_c = 0; free_c < n; ++free_c) {
    if (is_pivot[free_c]) continue;
    std::vector<Rational> v(n, Rational(0));
    v[free_c] = 1;
    for (size_t i = 0; i < pivot_col_of_row.size(); ++i)
      v[static_cast<size_t>(pivot_col_of_row[i])] = -a[i][free_c];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

std::vector<std::vector<Rational>> solve_in_row_basis(const std::vector<std::vector<Rational>>& basis,
                                                      const std::vector<std::vector<Rational>>& targets) {
  // Solve x * basis = target for each target via Gaussian elimination on the
  // transposed system.
  const size_t m = basis.size();
  if (m == 0) {
    for (auto& t : targets)
      for (auto& q : t)
        if (q != 0) fail(Errc::precondition, "target not in empty span");
    return std::vector<std::vector<Rational>>(targets.size());
  }
  const size_t n = basis[0].size();
  // Augmented columns: for each coordinate j, equation sum_i x_i basis[i][j] = t[j].
  std::vector<std::vector<Rational>> sol;
  for (auto& t : targets) {
    // Build [basis^T | t] and eliminate.
    std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(m + 1, Rational(0)));
    for (size_t j = 0; j < n; ++j) {
      for (size_t i = 0; i < m; ++i) aug[j][i] = basis[i][j];
      aug[j][m] = t[j];
    }
    size_t r = 0;
    std::vector<int> pivrow_of_var(m, -1);
    for (size_t c = 0; c < m && r < n; ++c) {
      size_t p = n;
      for (size_t i = r; i < n; ++i)
        if (aug[i][c] != 0) { p = i; break; }
      if (p == n) continue;
      std::swap(aug[r], aug[p]);
      Rational inv = 1 / aug[r][c];
      for (size_t j = 0; j <= m; ++j) aug[r][j] *= inv;
      for (size_t i = 0; i < n; ++i) {
        if (i == r || aug[i][c] == 0) continue;
        Rational f = aug[i][c];
        for (size_t j = 0; j <= m; ++j) aug[i][j] -= f * aug[r][j];
      }
      pivrow_of_var[c] = static_cast<int>(r);
      ++r;
    }
    // Consistency: all rows below the pivots must have zero rhs.
    for (size_t i = r; i < n; ++i)
      if (aug[i][m] != 0) fail(Errc::precondition, "target not in row span");
    std::vector<Rational> x(m, Rational(0));
    for (size_t c = 0; c < m; ++c)
      if (pivrow_of_var[c] >= 0) x[c] = aug[static_cast<size_t>(pivrow_of_var[c])][m];
    sol.push_back(std::move(x));
  }
  return sol;
}

std::string intmat_key(const IntMat& m) {
  std::string s;
  for (auto& row : m) {
    for (auto& v : row) {
      s += v.get_str();
      s += ',';
    }
    s += ';';
  }
  return s;
}

}  // namespace uniflow::exact
