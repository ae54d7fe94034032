#pragma once

// Partial-pivoted LU, triangular solves (plain and transposed), explicit
// inverse, and the 1-norm condition number (exact for small matrices,
// Hager-style estimate above kExactCondLimit).

#include <cstddef>
#include <vector>

#include "rbfc/dense.hpp"

namespace rbfc {

// Local systems stay below this size; the global collocation matrix does
// not, and gets the estimator instead of an explicit inverse.
inline constexpr std::size_t kExactCondLimit = 320;

template <Scalar T>
struct LuFactors {
  DenseMatrix<T> lu;             // combined unit-L / U storage
  std::vector<std::size_t> perm;  // row i of PA is row perm[i] of A
  std::size_t n() const { return lu.rows(); }
};

template <Scalar T>
LuFactors<T> lu_factor(DenseMatrix<T> a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("lu_factor: square input required");
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    T best = abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      T v = abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == T(0)) throw SingularMatrix(k);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(perm[k], perm[p]);
    }
    const T pivot = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const T m = a(i, k) / pivot;
      a(i, k) = m;
      const T* ak = a.row_data(k);
      T* ai = a.row_data(i);
      for (std::size_t j = k + 1; j < n; ++j) ai[j] -= m * ak[j];
    }
  }
  return LuFactors<T>{std::move(a), std::move(perm)};
}

template <Scalar T>
Vector<T> lu_solve(const LuFactors<T>& f, const Vector<T>& b) {
  const std::size_t n = f.n();
  if (b.size() != n) throw DimensionMismatch("lu_solve: rhs length");
  Vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 1; i < n; ++i) {  // Ly = Pb, unit diagonal
    const T* li = f.lu.row_data(i);
    T acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= li[j] * x[j];
    x[i] = acc;
  }
  for (std::size_t ii = n; ii-- > 0;) {  // Ux = y
    const T* ui = f.lu.row_data(ii);
    T acc = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= ui[j] * x[j];
    x[ii] = acc / ui[ii];
  }
  return x;
}

// Solves A^T x = b reusing the factorization of A: A^T = U^T L^T P.
template <Scalar T>
Vector<T> lu_solve_transposed(const LuFactors<T>& f, const Vector<T>& b) {
  const std::size_t n = f.n();
  if (b.size() != n) throw DimensionMismatch("lu_solve_transposed: rhs length");
  Vector<T> z(b);
  for (std::size_t i = 0; i < n; ++i) {  // U^T z = b, forward
    T acc = z[i];
    for (std::size_t j = 0; j < i; ++j) acc -= f.lu(j, i) * z[j];
    z[i] = acc / f.lu(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {  // L^T w = z, backward, unit diagonal
    T acc = z[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= f.lu(j, ii) * z[j];
    z[ii] = acc;
  }
  Vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[f.perm[i]] = z[i];
  return x;
}

// Column-by-column solve for a matrix right-hand side.
template <Scalar T>
DenseMatrix<T> lu_solve_many(const LuFactors<T>& f, const DenseMatrix<T>& b) {
  const std::size_t n = f.n();
  if (b.rows() != n) throw DimensionMismatch("lu_solve_many: rhs rows");
  DenseMatrix<T> x(n, b.cols());
  Vector<T> col(n);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
    Vector<T> sol = lu_solve(f, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

template <Scalar T>
DenseMatrix<T> inverse_from_factors(const LuFactors<T>& f) {
  return lu_solve_many(f, DenseMatrix<T>::identity(f.n()));
}

template <Scalar T>
DenseMatrix<T> inverse(const DenseMatrix<T>& a) {
  return inverse_from_factors(lu_factor(a));
}

template <Scalar T>
struct Cond1 {
  T kappa;
  bool estimated = false;
};

namespace detail {

// Hager/Higham 1-norm estimator for ||A^{-1}||_1 from an LU factorization.
template <Scalar T>
T hager_inverse_norm1(const LuFactors<T>& f) {
  const std::size_t n = f.n();
  Vector<T> x(n, T(1) / static_cast<double>(n));
  T est(0);
  std::size_t last_j = n;  // sentinel
  for (int iter = 0; iter < 5; ++iter) {
    Vector<T> y = lu_solve(f, x);
    T y1 = norm_1(y);
    if (y1 > est) est = y1;
    Vector<T> xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = y[i] < T(0) ? T(-1) : T(1);
    Vector<T> z = lu_solve_transposed(f, xi);
    std::size_t j = 0;
    T zmax = abs(z[0]);
    for (std::size_t i = 1; i < n; ++i) {
      T a = abs(z[i]);
      if (a > zmax) {
        zmax = a;
        j = i;
      }
    }
    // Spec asks for at least 3 estimator sweeps before accepting.
    if (iter >= 2 && (zmax <= dot(z, x) || j == last_j)) break;
    std::fill(x.begin(), x.end(), T(0));
    x[j] = T(1);
    last_j = j;
  }
  return est;
}

}  // namespace detail

template <Scalar T>
Cond1<T> cond_1_from_factors(const LuFactors<T>& f, const T& anorm) {
  const std::size_t n = f.n();
  if (n <= kExactCondLimit) {
    return Cond1<T>{anorm * norm_1(inverse_from_factors(f)), false};
  }
  return Cond1<T>{anorm * detail::hager_inverse_norm1(f), true};
}

template <Scalar T>
Cond1<T> cond_1(const DenseMatrix<T>& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("cond_1: square input required");
  if (a.rows() == 0) return Cond1<T>{T(0), false};
  T anorm = norm_1(a);
  try {
    LuFactors<T> f = lu_factor(a);
    return cond_1_from_factors(f, anorm);
  } catch (const SingularMatrix&) {
    return Cond1<T>{scalar_infinity<T>(), a.rows() > kExactCondLimit};
  }
}

}  // namespace rbfc
