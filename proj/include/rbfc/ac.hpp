#pragma once

// Global asymmetric collocation for the coupled optimality system
//   [ G    beta*E_ ] [lambda]   [d]        d = [g | yhat | 0]
//   [ -E      G    ] [  mu  ] = [0]
// solved through the block factorization with Schur complement
//   R = G + beta * E G^{-1} E_.
// A monolithic dense solve of the doubled system is kept as a
// verification path.

#include "rbfc/lu.hpp"
#include "rbfc/metrics.hpp"

namespace rbfc {

template <Scalar T>
struct AcSystem {
  std::size_t n = 0;    // nodes
  std::size_t n_b = 0;  // boundary nodes
  std::size_t np = 0;   // polynomial terms
  DenseMatrix<T> gram;      // G: node rows then poly-constraint rows
  DenseMatrix<T> op_rows;   // E: zero except interior rows
  DenseMatrix<T> adj_rows;  // E_*: zero except interior rows
  Vector<T> data;           // d
  T beta{0};
  std::size_t dim() const { return n + np; }
};

template <Scalar T>
struct AcSolution {
  Vector<T> lambda;
  Vector<T> mu;
  T kappa_g{0};
  bool kappa_estimated = false;
  bool condition_overflow = false;
  double residual = 0.0;  // ||A_full z - rhs||_inf / ||rhs||_inf
};

template <Scalar T>
AcSystem<T> assemble_ac(const NodeSet& nodes, const Multiquadric<T>& kernel,
                        const PolyBasis& poly, const OperatorSpec<T>& spec,
                        const ControlProblem<T>& problem,
                        OpTag boundary_op = OpTag::Dirichlet) {
  if (boundary_op != OpTag::Dirichlet && boundary_op != OpTag::Identity)
    throw UnsupportedBoundaryOperator("only the Dirichlet trace is assembled");
  spec.validate();

  AcSystem<T> sys;
  sys.n = nodes.n();
  sys.n_b = nodes.boundary_count();
  sys.np = poly.count();
  sys.beta = spec.beta;
  const std::size_t dim = sys.dim();
  sys.gram = DenseMatrix<T>(dim, dim);
  sys.op_rows = DenseMatrix<T>(dim, dim);
  sys.adj_rows = DenseMatrix<T>(dim, dim);
  sys.data.assign(dim, T(0));

  const auto& pts = nodes.points();
  for (std::size_t i = 0; i < sys.n; ++i) {
    auto grow = reconstruction_row(OpTag::Identity, spec, kernel, poly, pts[i], pts);
    for (std::size_t j = 0; j < dim; ++j) sys.gram(i, j) = grow[j];
    if (i >= sys.n_b) {
      auto erow = reconstruction_row(OpTag::E, spec, kernel, poly, pts[i], pts);
      auto arow = reconstruction_row(OpTag::Estar, spec, kernel, poly, pts[i], pts);
      for (std::size_t j = 0; j < dim; ++j) {
        sys.op_rows(i, j) = erow[j];
        sys.adj_rows(i, j) = arow[j];
      }
    }
    sys.data[i] = i < sys.n_b ? problem.boundary(pts[i]) : problem.target(pts[i]);
  }
  for (std::size_t p = 0; p < sys.np; ++p)
    for (std::size_t j = 0; j < sys.n; ++j)
      sys.gram(sys.n + p, j) = eval_poly_op(OpTag::Identity, spec, p, pts[j]);
  return sys;
}

namespace detail {

// E * X restricted to the nonzero (interior) row band of E.
template <Scalar T>
DenseMatrix<T> interior_rows_times(const AcSystem<T>& sys,
                                   const DenseMatrix<T>& e,
                                   const DenseMatrix<T>& x) {
  const std::size_t dim = sys.dim();
  DenseMatrix<T> w(dim, dim);
  for (std::size_t i = sys.n_b; i < sys.n; ++i) {
    const T* ei = e.row_data(i);
    T* wi = w.row_data(i);
    for (std::size_t k = 0; k < dim; ++k) {
      const T eik = ei[k];
      if (eik == T(0)) continue;
      const T* xk = x.row_data(k);
      for (std::size_t j = 0; j < dim; ++j) wi[j] += eik * xk[j];
    }
  }
  return w;
}

template <Scalar T>
Vector<T> interior_rows_matvec(const AcSystem<T>& sys, const DenseMatrix<T>& e,
                               const Vector<T>& x) {
  const std::size_t dim = sys.dim();
  Vector<T> y(dim, T(0));
  for (std::size_t i = sys.n_b; i < sys.n; ++i) {
    const T* ei = e.row_data(i);
    T acc(0);
    for (std::size_t j = 0; j < dim; ++j) acc += ei[j] * x[j];
    y[i] = acc;
  }
  return y;
}

template <Scalar T>
double ac_residual(const AcSystem<T>& sys, const Vector<T>& lambda,
                   const Vector<T>& mu) {
  Vector<T> r1 = sys.gram * lambda;
  Vector<T> t = sys.adj_rows * mu;
  for (std::size_t i = 0; i < r1.size(); ++i)
    r1[i] += sys.beta * t[i] - sys.data[i];
  Vector<T> r2 = sys.gram * mu;
  Vector<T> s = sys.op_rows * lambda;
  for (std::size_t i = 0; i < r2.size(); ++i) r2[i] -= s[i];
  T num = norm_inf(r1);
  T n2 = norm_inf(r2);
  if (n2 > num) num = n2;
  T den = norm_inf(sys.data);
  if (den == T(0)) den = T(1);
  return to_double(num / den);
}

}  // namespace detail

struct AcSolveOptions {
  bool compute_cond = true;
};

template <Scalar T>
AcSolution<T> solve_ac_schur(const AcSystem<T>& sys,
                             const AcSolveOptions& opts = {}) {
  const std::size_t dim = sys.dim();
  LuFactors<T> glu = lu_factor(sys.gram);

  // R = G + beta * E G^{-1} E_.
  DenseMatrix<T> v = lu_solve_many(glu, sys.adj_rows);
  DenseMatrix<T> r = detail::interior_rows_times(sys, sys.op_rows, v);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      r(i, j) = sys.gram(i, j) + sys.beta * r(i, j);

  Vector<T> t = lu_solve(glu, sys.data);
  Vector<T> rhs2 = detail::interior_rows_matvec(sys, sys.op_rows, t);

  AcSolution<T> sol;
  sol.mu = lu_solve(lu_factor(std::move(r)), rhs2);
  Vector<T> d2 = sys.adj_rows * sol.mu;
  for (std::size_t i = 0; i < dim; ++i) d2[i] = sys.data[i] - sys.beta * d2[i];
  sol.lambda = lu_solve(glu, d2);

  if (opts.compute_cond) {
    auto c = cond_1_from_factors(glu, norm_1(sys.gram));
    sol.kappa_g = c.kappa;
    sol.kappa_estimated = c.estimated;
    sol.condition_overflow =
        !(to_double(c.kappa) < 1.0 / scalar_traits<T>::unit_roundoff());
  }
  sol.residual = detail::ac_residual(sys, sol.lambda, sol.mu);
  return sol;
}

// Verification path: one dense LU of the doubled system.
template <Scalar T>
AcSolution<T> solve_ac_monolithic(const AcSystem<T>& sys) {
  const std::size_t dim = sys.dim();
  DenseMatrix<T> full(2 * dim, 2 * dim);
  Vector<T> rhs(2 * dim, T(0));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      full(i, j) = sys.gram(i, j);
      full(i, dim + j) = sys.beta * sys.adj_rows(i, j);
      full(dim + i, j) = -sys.op_rows(i, j);
      full(dim + i, dim + j) = sys.gram(i, j);
    }
    rhs[i] = sys.data[i];
  }
  Vector<T> z = lu_solve(lu_factor(std::move(full)), rhs);
  AcSolution<T> sol;
  sol.lambda.assign(z.begin(), z.begin() + dim);
  sol.mu.assign(z.begin() + dim, z.end());
  sol.residual = detail::ac_residual(sys, sol.lambda, sol.mu);
  return sol;
}

template <Scalar T>
std::pair<T, T> evaluate_ac(const AcSolution<T>& sol, const NodeSet& nodes,
                            const Multiquadric<T>& kernel, const PolyBasis& poly,
                            const OperatorSpec<T>& spec, const Point2& x) {
  auto row = reconstruction_row(OpTag::Identity, spec, kernel, poly, x,
                                nodes.points());
  return {dot(row, sol.lambda), dot(row, sol.mu)};
}

// State and control sampled at every node: the identity rows of G are
// exactly the reconstruction rows there.
template <Scalar T>
std::pair<Vector<T>, Vector<T>> ac_node_fields(const AcSystem<T>& sys,
                                               const AcSolution<T>& sol) {
  Vector<T> gy = sys.gram * sol.lambda;
  Vector<T> gu = sys.gram * sol.mu;
  gy.resize(sys.n);
  gu.resize(sys.n);
  return {std::move(gy), std::move(gu)};
}

}  // namespace rbfc
