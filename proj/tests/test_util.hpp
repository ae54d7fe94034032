#pragma once

// Shared helpers for the unit suites: deterministic random data and a few
// independent oracles (brute-force reconstructions, finite differences).

#include <random>

#include "rbfc/dense.hpp"
#include "rbfc/lu.hpp"

namespace rbfc::test {

inline std::mt19937_64 make_rng(unsigned seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

template <Scalar T>
DenseMatrix<T> random_matrix(std::size_t n, std::mt19937_64& rng) {
  DenseMatrix<T> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = T(uniform(rng));
  return a;
}

// ||PA - LU||_1 / ||A||_1 computed from the combined factor storage.
template <Scalar T>
double lu_reconstruction_residual(const DenseMatrix<T>& a,
                                  const LuFactors<T>& f) {
  const std::size_t n = a.rows();
  DenseMatrix<T> lu_prod(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      T acc(0);
      // (LU)_ij = sum_k L_ik U_kj, L unit lower, U upper.
      std::size_t kmax = std::min(i, j);
      for (std::size_t k = 0; k <= kmax; ++k) {
        T lik = k == i ? T(1) : f.lu(i, k);
        acc += lik * f.lu(k, j);
      }
      lu_prod(i, j) = acc;
    }
  }
  T diff(0);
  for (std::size_t j = 0; j < n; ++j) {
    T s(0);
    for (std::size_t i = 0; i < n; ++i) s += abs(a(f.perm[i], j) - lu_prod(i, j));
    if (s > diff) diff = s;
  }
  return to_double(diff / norm_1(a));
}

template <Scalar T>
DenseMatrix<T> hilbert(std::size_t n) {
  DenseMatrix<T> h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(i, j) = T(1) / static_cast<double>(i + j + 1);
  return h;
}

}  // namespace rbfc::test
