#pragma once

// Discrete norms over the whole node set, relative errors against the
// exact pair when one exists, and the cost functional
//   Cost = (|y - yhat|^2 + beta |u|^2) / 2.

#include <optional>

#include "rbfc/problems.hpp"

namespace rbfc {

struct Metrics {
  double y_err_norm = 0.0;  // |y - yhat|
  double u_norm = 0.0;      // |u|
  double cost = 0.0;
  std::optional<double> re_y;
  std::optional<double> re_u;
};

// Sums run over the interior nodes.  Boundary terms of |y - yhat| would
// otherwise pin the norm to the fixed Dirichlet data (problem 2 has
// g = 1 on part of the boundary), contradicting the published decay as
// beta -> 0; for problems 1 and 3 the boundary terms vanish identically
// and the restriction changes nothing.
template <Scalar T>
Metrics compute_metrics(const NodeSet& nodes, const Vector<T>& y,
                        const Vector<T>& u, const ControlProblem<T>& p,
                        const T& beta) {
  if (y.size() != nodes.n() || u.size() != nodes.n())
    throw DimensionMismatch("fields must cover every node");
  T ydiff2(0), u2(0), ey2(0), eu2(0), yb2(0), ub2(0);
  for (std::size_t i = nodes.boundary_count(); i < nodes.n(); ++i) {
    const Point2& x = nodes.point(i);
    T dy = y[i] - p.target(x);
    ydiff2 += dy * dy;
    u2 += u[i] * u[i];
    if (p.has_exact) {
      T yb = p.exact_state(x, beta);
      T ub = p.exact_control(x, beta);
      T e1 = y[i] - yb;
      T e2 = u[i] - ub;
      ey2 += e1 * e1;
      eu2 += e2 * e2;
      yb2 += yb * yb;
      ub2 += ub * ub;
    }
  }
  Metrics m;
  m.y_err_norm = to_double(sqrt(ydiff2));
  m.u_norm = to_double(sqrt(u2));
  m.cost = to_double((ydiff2 + beta * u2) / T(2));
  if (p.has_exact) {
    m.re_y = to_double(sqrt(ey2) / sqrt(yb2));
    m.re_u = to_double(sqrt(eu2) / sqrt(ub2));
  }
  return m;
}

}  // namespace rbfc
