#pragma once

// Compressed-row sparse matrices and the restarted-GMRES solver used for
// the global system of the local methods.

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "rbfc/lu.hpp"

namespace rbfc {

template <Scalar T>
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    row_ptr_.assign(rows + 1, 0);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return vals_.size(); }

  // Rows must be appended in order; entries within a row get sorted.
  void append_row(std::size_t i, std::vector<std::pair<std::size_t, T>> entries) {
    if (i + 1 >= row_ptr_.size() || row_ptr_[i + 1] != 0)
      throw InconsistentLayout("sparse rows must be appended in order");
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (k > 0 && entries[k].first == entries[k - 1].first)
        throw InconsistentLayout("duplicate column in sparse row");
      col_idx_.push_back(entries[k].first);
      vals_.push_back(entries[k].second);
    }
    row_ptr_[i + 1] = row_ptr_[i] + entries.size();
  }

  std::size_t row_begin(std::size_t i) const { return row_ptr_[i]; }
  std::size_t row_end(std::size_t i) const { return row_ptr_[i + 1]; }
  std::size_t col(std::size_t k) const { return col_idx_[k]; }
  const T& value(std::size_t k) const { return vals_[k]; }

  Vector<T> operator*(const Vector<T>& x) const {
    if (x.size() != cols_) throw DimensionMismatch("sparse matvec shape");
    Vector<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      T acc(0);
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        acc += vals_[k] * x[col_idx_[k]];
      y[i] = acc;
    }
    return y;
  }

  T diagonal(std::size_t i) const {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_idx_[k] == i) return vals_[k];
    return T(0);
  }

  DenseMatrix<T> to_dense() const {
    DenseMatrix<T> d(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        d(i, col_idx_[k]) = vals_[k];
    return d;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<T> vals_;
};

struct SparseSolveOptions {
  double tol = 1e-12;        // relative residual on the original system
  std::size_t restart = 50;
  std::size_t max_iters = 0;  // 0 -> 10 * n
  bool allow_dense_fallback = true;  // honoured below 2000 unknowns
};

namespace detail {

// One restart cycle of preconditioned GMRES; returns the updated iterate.
template <Scalar T>
Vector<T> gmres_cycle(const SparseMatrix<T>& a, const Vector<T>& b,
                      const Vector<T>& scale, Vector<T> x, std::size_t m,
                      std::size_t& iters_used) {
  const std::size_t n = b.size();
  auto apply = [&](const Vector<T>& v) {
    Vector<T> w = a * v;
    for (std::size_t i = 0; i < n; ++i) w[i] *= scale[i];
    return w;
  };
  Vector<T> r = a * x;
  for (std::size_t i = 0; i < n; ++i) r[i] = scale[i] * (b[i] - r[i]);
  T beta = norm_2(r);
  if (beta == T(0)) {
    iters_used = 0;
    return x;
  }
  std::vector<Vector<T>> v;
  v.reserve(m + 1);
  Vector<T> r0 = r;
  for (auto& e : r0) e /= beta;
  v.push_back(std::move(r0));

  DenseMatrix<T> h(m + 1, m);
  Vector<T> cs(m, T(0)), sn(m, T(0)), g(m + 1, T(0));
  g[0] = beta;
  std::size_t j = 0;
  for (; j < m; ++j) {
    Vector<T> w = apply(v[j]);
    for (std::size_t i = 0; i <= j; ++i) {  // modified Gram-Schmidt
      T hij = dot(w, v[i]);
      h(i, j) = hij;
      axpy(-hij, v[i], w);
    }
    T hnext = norm_2(w);
    h(j + 1, j) = hnext;
    for (std::size_t i = 0; i < j; ++i) {  // apply stored rotations
      T t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
      h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
      h(i, j) = t;
    }
    T denom = sqrt(h(j, j) * h(j, j) + hnext * hnext);
    if (denom == T(0)) { ++j; break; }
    cs[j] = h(j, j) / denom;
    sn[j] = hnext / denom;
    h(j, j) = denom;
    g[j + 1] = -sn[j] * g[j];
    g[j] = cs[j] * g[j];
    if (hnext == T(0)) { ++j; break; }
    for (auto& e : w) e /= hnext;
    v.push_back(std::move(w));
    if (abs(g[j + 1]) <= T(1e-300)) { ++j; break; }
  }
  iters_used = j;
  // Back-substitute the triangular least-squares system.
  Vector<T> y(j, T(0));
  for (std::size_t ii = j; ii-- > 0;) {
    T acc = g[ii];
    for (std::size_t k = ii + 1; k < j; ++k) acc -= h(ii, k) * y[k];
    y[ii] = acc / h(ii, ii);
  }
  for (std::size_t i = 0; i < j; ++i) axpy(y[i], v[i], x);
  return x;
}

}  // namespace detail

// Restarted GMRES with diagonal row scaling; dense LU fallback below
// 2000 unknowns if the iteration stalls.
template <Scalar T>
Vector<T> sparse_solve(const SparseMatrix<T>& a, const Vector<T>& b,
                       const SparseSolveOptions& opts = {}) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw DimensionMismatch("sparse_solve: shape");
  T bnorm = norm_2(b);
  if (bnorm == T(0)) return Vector<T>(n, T(0));

  Vector<T> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    T d = abs(a.diagonal(i));
    scale[i] = d == T(0) ? T(1) : T(1) / a.diagonal(i);
  }

  const bool small = n < 2000;
  const std::size_t budget =
      opts.max_iters ? opts.max_iters : (small ? 6 * opts.restart : 10 * n);

  Vector<T> x(n, T(0));
  std::size_t done = 0;
  T rel = T(1);
  while (done < budget) {
    std::size_t used = 0;
    std::size_t m = std::min(opts.restart, budget - done);
    x = detail::gmres_cycle(a, b, scale, std::move(x), m, used);
    done += used == 0 ? 1 : used;
    Vector<T> r = a * x;
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    rel = norm_2(r) / bnorm;
    if (rel <= T(opts.tol)) return x;
    if (used < m) break;  // breakdown: no progress possible
  }

  if (small && opts.allow_dense_fallback) {
    LuFactors<T> f = lu_factor(a.to_dense());
    return lu_solve(f, b);
  }
  throw NoConvergence(done, to_double(rel));
}

}  // namespace rbfc
