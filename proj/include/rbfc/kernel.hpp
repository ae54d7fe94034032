#pragma once

// Multiquadric kernel phi(x) = sqrt(c + |x|^2) with closed-form derivative
// evaluators up to fourth order, linear polynomial augmentation, and the
// convection-diffusion operator family
//   E  = -eps*lap + w.grad        E* = -eps*lap - w.grad
//   E*E = eps^2*bilap - (w.grad)^2   (constant wind)
//   M  = I + beta*E*E

#include <array>
#include <cstddef>

#include "rbfc/dense.hpp"
#include "rbfc/geometry.hpp"

namespace rbfc {

template <Scalar T>
struct Multiquadric {
  T c;  // additive under the root, paper-table convention
};

struct PolyBasis {
  int degree = 1;  // -1 none, 0 constants, 1 linears
  std::size_t count() const {
    return degree < 0 ? 0 : static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
  }
};

template <Scalar T>
struct OperatorSpec {
  T epsilon{1};
  std::array<T, 2> omega{T(0), T(0)};
  T beta{0};

  bool poisson_like() const { return omega[0] == T(0) && omega[1] == T(0); }

  void validate() const {
    if (epsilon < T(0)) throw Error("diffusion coefficient must be >= 0");
    if (beta < T(0)) throw Error("penalty must be >= 0");
    if (!poisson_like()) {
      T norm = omega[0] * omega[0] + omega[1] * omega[1];
      if (to_double(abs(norm - T(1))) > 1e-12)
        throw Error("wind vector must be unit length");
    }
  }
};

enum class OpTag { Identity, Dirichlet, E, Estar, BetaEstar, M, EstarE };

// Primitive radial evaluators; s = |x - xj|^2, phi = sqrt(c + s).
template <Scalar T>
T mq_value(const Multiquadric<T>& k, const T& s) {
  return sqrt(k.c + s);
}

template <Scalar T>
T mq_laplacian(const Multiquadric<T>& k, const T& s) {
  T p2 = k.c + s;
  return (T(2) * k.c + s) / (p2 * sqrt(p2));
}

// Fourth-order radial derivative in 2D: (s^2 + 8cs - 8c^2) / phi^7.
template <Scalar T>
T mq_bilaplacian(const Multiquadric<T>& k, const T& s) {
  T p2 = k.c + s;
  T p7 = p2 * p2 * p2 * sqrt(p2);
  return (s * s + T(8) * k.c * s - T(8) * k.c * k.c) / p7;
}

// w.grad phi, with wd = w.(x - xj).
template <Scalar T>
T mq_wind_d1(const Multiquadric<T>& k, const T& s, const T& wd) {
  return wd / sqrt(k.c + s);
}

// (w.grad)^2 phi = |w|^2/phi - (w.(x-xj))^2/phi^3.
template <Scalar T>
T mq_wind_d2(const Multiquadric<T>& k, const T& s, const T& wd, const T& w2) {
  T p2 = k.c + s;
  T p = sqrt(p2);
  return w2 / p - wd * wd / (p2 * p);
}

template <Scalar T>
T eval_kernel_op(OpTag op, const OperatorSpec<T>& spec, const Multiquadric<T>& k,
                 const Point2& x, const Point2& xj) {
  const T dx = T(x.x) - T(xj.x);
  const T dy = T(x.y) - T(xj.y);
  const T s = dx * dx + dy * dy;
  switch (op) {
    case OpTag::Identity:
    case OpTag::Dirichlet:
      return mq_value(k, s);
    case OpTag::E: {
      T wd = spec.omega[0] * dx + spec.omega[1] * dy;
      return -spec.epsilon * mq_laplacian(k, s) + mq_wind_d1(k, s, wd);
    }
    case OpTag::Estar: {
      T wd = spec.omega[0] * dx + spec.omega[1] * dy;
      return -spec.epsilon * mq_laplacian(k, s) - mq_wind_d1(k, s, wd);
    }
    case OpTag::BetaEstar:
      return spec.beta * eval_kernel_op(OpTag::Estar, spec, k, x, xj);
    case OpTag::EstarE: {
      T w2 = spec.omega[0] * spec.omega[0] + spec.omega[1] * spec.omega[1];
      T wd = spec.omega[0] * dx + spec.omega[1] * dy;
      T second = w2 == T(0) ? T(0) : mq_wind_d2(k, s, wd, w2);
      return spec.epsilon * spec.epsilon * mq_bilaplacian(k, s) - second;
    }
    case OpTag::M:
      return mq_value(k, s) +
             spec.beta * eval_kernel_op(OpTag::EstarE, spec, k, x, xj);
  }
  return T(0);
}

// Operators applied to the monomials {1, x1, x2}.  Second- and
// fourth-order terms annihilate linears, so M p = p and E*E p = 0.
template <Scalar T>
T eval_poly_op(OpTag op, const OperatorSpec<T>& spec, std::size_t p,
               const Point2& x) {
  switch (op) {
    case OpTag::Identity:
    case OpTag::Dirichlet:
    case OpTag::M:
      return p == 0 ? T(1) : (p == 1 ? T(x.x) : T(x.y));
    case OpTag::E:
      return p == 0 ? T(0) : spec.omega[p - 1];
    case OpTag::Estar:
      return p == 0 ? T(0) : -spec.omega[p - 1];
    case OpTag::BetaEstar:
      return p == 0 ? T(0) : -spec.beta * spec.omega[p - 1];
    case OpTag::EstarE:
      return T(0);
  }
  return T(0);
}

// Row [ Q phi(x - x_j) | Q p_l(x) ] over the given members.
template <Scalar T>
Vector<T> reconstruction_row(OpTag op, const OperatorSpec<T>& spec,
                             const Multiquadric<T>& k, const PolyBasis& poly,
                             const Point2& x, const std::vector<Point2>& members) {
  Vector<T> row(members.size() + poly.count());
  for (std::size_t j = 0; j < members.size(); ++j)
    row[j] = eval_kernel_op(op, spec, k, x, members[j]);
  for (std::size_t p = 0; p < poly.count(); ++p)
    row[members.size() + p] = eval_poly_op(op, spec, p, x);
  return row;
}

}  // namespace rbfc
