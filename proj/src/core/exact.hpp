#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace uniflow::exact {

using Rational = mpq_class;
using Integer = mpz_class;

inline double to_double(const Rational& q) { return q.get_d(); }

/// Element of Q(i). Factors of SL(2,C) need Gaussian-rational entries; real
/// factors keep im == 0.
struct GaussRational {
  Rational re, im;

  GaussRational() : re(0), im(0) {}
  GaussRational(long r) : re(r), im(0) {}
  GaussRational(const Rational& r) : re(r), im(0) {}
  GaussRational(const Rational& r, const Rational& i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussRational operator+(const GaussRational& o) const { return {re + o.re, im + o.im}; }
  GaussRational operator-(const GaussRational& o) const { return {re - o.re, im - o.im}; }
  GaussRational operator-() const { return {-re, -im}; }
  GaussRational operator*(const GaussRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool operator==(const GaussRational& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussRational& o) const { return !(*this == o); }

  std::string str() const { return re.get_str() + "|" + im.get_str(); }
};

/// 2x2 matrix over Q(i), the exact form of one factor block.
struct ExactMat2 {
  GaussRational a, b, c, d;  // [[a, b], [c, d]]

  static ExactMat2 identity() {
    ExactMat2 m;
    m.a = GaussRational(1);
    m.d = GaussRational(1);
    return m;
  }

  ExactMat2 operator*(const ExactMat2& o) const {
    ExactMat2 r;
    r.a = a * o.a + b * o.c;
    r.b = a * o.b + b * o.d;
    r.c = c * o.a + d * o.c;
    r.d = c * o.b + d * o.d;
    return r;
  }

  GaussRational det() const { return a * d - b * c; }
  GaussRational trace() const { return a + d; }

  /// Inverse assuming det == 1.
  ExactMat2 inverse_unimodular() const {
    ExactMat2 r;
    r.a = d;
    r.b = -b;
    r.c = -c;
    r.d = a;
    return r;
  }

  bool operator==(const ExactMat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
  bool is_identity() const { return *this == identity(); }

  std::string str() const { return a.str() + ";" + b.str() + ";" + c.str() + ";" + d.str(); }
};

// ---------------------------------------------------------------------------
// Integer linear algebra on small matrices (rows = vectors in Z^n).
// Used for saturation and for canonical forms of sublattices.
// ---------------------------------------------------------------------------

using IntRow = std::vector<Integer>;
using IntMat = std::vector<IntRow>;

/// Row-style Hermite normal form (nonnegative pivots, entries above a pivot
/// reduced). Zero rows are dropped. The row span over Z is preserved, so the
/// result is a canonical basis of the integer row module.
IntMat hnf(IntMat m);

/// Basis of { v in Z^n : m * v = 0 } (m given by rows, acting on column
/// vectors), computed by integer column reduction with a tracked unimodular
/// transform.
IntMat integer_kernel(const IntMat& m, int n_cols);

/// Basis of the saturation of the row module of `rows` inside Z^n:
/// { v in Z^n : v lies in the Q-row-span of rows }.
IntMat saturate_rows(const IntMat& rows, int n_cols);

/// Rational row echelon solve: expresses each row of `targets` in terms of the
/// rows of `basis` (must be consistent); throws Errc::precondition otherwise.
std::vector<std::vector<Rational>> solve_in_row_basis(const std::vector<std::vector<Rational>>& basis,
                                                      const std::vector<std::vector<Rational>>& targets);

/// Kernel of the linear map given by rational rows (acting on column vectors
/// in Q^n), returned as rational rows spanning the kernel.
std::vector<std::vector<Rational>> rational_kernel(const std::vector<std::vector<Rational>>& rows,
                                                   int n_cols);

std::string intmat_key(const IntMat& m);

}  // namespace uniflow::exact
