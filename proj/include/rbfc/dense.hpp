#pragma once

// Dense row-major matrices and the vector helpers shared by every solver.

#include <cstddef>
#include <vector>

#include "rbfc/errors.hpp"
#include "rbfc/scalar.hpp"

namespace rbfc {

template <class T>
using Vector = std::vector<T>;

template <Scalar T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  T* row_data(std::size_t i) { return a_.data() + i * cols_; }
  const T* row_data(std::size_t i) const { return a_.data() + i * cols_; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matmul shape");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      const T* ai = a.row_data(i);
      T* ci = c.row_data(i);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = ai[k];
        const T* bk = b.row_data(k);
        for (std::size_t j = 0; j < b.cols_; ++j) ci[j] += aik * bk[j];
      }
    }
    return c;
  }

  Vector<T> operator*(const Vector<T>& x) const {
    if (cols_ != x.size()) throw DimensionMismatch("matvec shape");
    Vector<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      const T* ai = row_data(i);
      T acc(0);
      for (std::size_t j = 0; j < cols_; ++j) acc += ai[j] * x[j];
      y[i] = acc;
    }
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> a_;
};

template <Scalar T>
T norm_1(const DenseMatrix<T>& a) {  // max absolute column sum
  T best(0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    T s(0);
    for (std::size_t i = 0; i < a.rows(); ++i) s += abs(a(i, j));
    if (s > best) best = s;
  }
  return best;
}

template <Scalar T>
T norm_1(const Vector<T>& x) {
  T s(0);
  for (const T& v : x) s += abs(v);
  return s;
}

template <Scalar T>
T norm_inf(const Vector<T>& x) {
  T best(0);
  for (const T& v : x) {
    T a = abs(v);
    if (a > best) best = a;
  }
  return best;
}

template <Scalar T>
T norm_2(const Vector<T>& x) {
  T s(0);
  for (const T& v : x) s += v * v;
  return sqrt(s);
}

template <Scalar T>
T dot(const Vector<T>& a, const Vector<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <Scalar T>
void axpy(const T& alpha, const Vector<T>& x, Vector<T>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace rbfc
