#pragma once

// The three benchmark control problems.  Problem 1 is Poisson control
// with a closed-form optimal pair; problems 2 and 3 are convection
// dominated (eps = 1/200) with discontinuous data and no exact solution.

#include <functional>
#include <string>

#include "rbfc/kernel.hpp"

namespace rbfc {

template <Scalar T>
struct ControlProblem {
  int id = 0;
  std::string name;
  T epsilon{1};
  std::array<T, 2> omega{T(0), T(0)};
  std::function<T(const Point2&)> target;    // yhat
  std::function<T(const Point2&)> boundary;  // g
  bool has_exact = false;
  std::function<T(const Point2&, const T&)> exact_state;    // y_beta(x)
  std::function<T(const Point2&, const T&)> exact_control;  // u_beta(x)

  OperatorSpec<T> spec_with(const T& beta) const {
    return OperatorSpec<T>{epsilon, omega, beta};
  }
};

namespace detail {

template <Scalar T>
T sin_pi(double v) {
  using std::sin;
  return sin(scalar_traits<T>::pi() * T(v));
}

// 4*pi^4, the bilaplacian eigenvalue of sin(pi x1) sin(pi x2).
template <Scalar T>
T four_pi4() {
  T p = scalar_traits<T>::pi();
  T p2 = p * p;
  return T(4) * p2 * p2;
}

template <Scalar T>
T bump(const Point2& x) {  // (2x1-1)^2 (2x2-1)^2 on [0,1/2]^2, else 0
  if (x.x > 0.5 || x.y > 0.5) return T(0);
  T a = T(2) * T(x.x) - T(1);
  T b = T(2) * T(x.y) - T(1);
  return a * a * b * b;
}

}  // namespace detail

template <Scalar T>
ControlProblem<T> make_problem(int id) {
  ControlProblem<T> p;
  p.id = id;
  switch (id) {
    case 1: {
      p.name = "poisson-control";
      p.epsilon = T(1);
      p.omega = {T(0), T(0)};
      p.target = [](const Point2& x) {
        return detail::sin_pi<T>(x.x) * detail::sin_pi<T>(x.y);
      };
      p.boundary = [](const Point2&) { return T(0); };
      p.has_exact = true;
      p.exact_state = [](const Point2& x, const T& beta) {
        T denom = T(1) + beta * detail::four_pi4<T>();
        return detail::sin_pi<T>(x.x) * detail::sin_pi<T>(x.y) / denom;
      };
      p.exact_control = [](const Point2& x, const T& beta) {
        T pi = scalar_traits<T>::pi();
        T denom = T(1) + beta * detail::four_pi4<T>();
        return T(2) * pi * pi * detail::sin_pi<T>(x.x) *
               detail::sin_pi<T>(x.y) / denom;
      };
      break;
    }
    case 2: {
      p.name = "boundary-layer";
      p.epsilon = T(1) / T(200);
      p.omega = {T(std::cos(3.141592653589793 / 6.0)),
                 T(std::sin(3.141592653589793 / 6.0))};
      p.target = [](const Point2&) { return T(0); };
      // 1 on {0} x [1/2, 1] and [0,1] x {1}, closed sets, else 0.
      p.boundary = [](const Point2& x) {
        if ((x.x == 0.0 && x.y >= 0.5) || x.y == 1.0) return T(1);
        return T(0);
      };
      break;
    }
    case 3: {
      p.name = "quartic-patch";
      p.epsilon = T(1) / T(200);
      p.omega = {T(std::cos(2.4)), T(std::sin(2.4))};
      p.target = [](const Point2& x) { return detail::bump<T>(x); };
      p.boundary = [](const Point2& x) { return detail::bump<T>(x); };
      break;
    }
    default:
      throw Error("unknown problem id " + std::to_string(id));
  }
  return p;
}

// Analytic residual of the problem-1 optimal pair, using the identities
// lap^2 (sin sin) = 4 pi^4 sin sin and -lap y = 2 pi^2 y:
//   r1 = y_b + beta*lap^2 y_b - yhat,   r2 = u_b - 2 pi^2 y_b.
// This is the oracle every solver test leans on.
template <Scalar T>
T verify_exact_solution(const ControlProblem<T>& p, const T& beta,
                        const std::vector<Point2>& samples) {
  if (!p.has_exact) throw Error("problem has no exact solution");
  T pi = scalar_traits<T>::pi();
  T worst(0);
  for (const Point2& x : samples) {
    T yb = p.exact_state(x, beta);
    T ub = p.exact_control(x, beta);
    T r1 = abs(yb + beta * detail::four_pi4<T>() * yb - p.target(x));
    T r2 = abs(ub - T(2) * pi * pi * yb);
    if (r1 > worst) worst = r1;
    if (r2 > worst) worst = r2;
  }
  return worst;
}

}  // namespace rbfc
