#pragma once

// Differential quadrature: per evaluation node, weights w such that
//   sum_j w_j phi(x_{k,j} - x_i) = (E phi)(x_k - x_i)  for every member i,
// optionally augmented so polynomials up to the chosen degree are
// differentiated exactly.  Unlike the local collocation systems this
// construction carries no boundary operator.  The recovered control is
// u(x_k) = sum_j w_j y(x_{k,j}) at interior nodes, u = 0 on the boundary.

#include "rbfc/lam.hpp"

namespace rbfc {

template <Scalar T>
struct DqWeights {
  std::size_t node_id = 0;
  std::vector<std::size_t> neighbor_ids;
  Vector<T> w;  // kernel weights only, length = neighbor count
};

template <Scalar T>
DqWeights<T> dq_weights(const NodeSet& nodes, const SpatialGrid& grid,
                        const Multiquadric<T>& kernel, int poly_degree,
                        const OperatorSpec<T>& spec, std::size_t node_id,
                        std::size_t n_k) {
  if (n_k < 1 || n_k > nodes.n()) throw TooFewNodes("dq stencil size outside [1, n]");
  PolyBasis poly{poly_degree};
  const std::size_t np = poly.count();
  const Point2& xk = nodes.point(node_id);

  DqWeights<T> out;
  out.node_id = node_id;
  out.neighbor_ids = grid.k_nearest(xk, n_k);
  std::vector<Point2> pts;
  pts.reserve(n_k);
  for (std::size_t id : out.neighbor_ids) pts.push_back(nodes.point(id));

  // Symmetric Gram block with polynomial constraints; the right-hand
  // side applies E at the evaluation node.
  DenseMatrix<T> a(n_k + np, n_k + np);
  for (std::size_t i = 0; i < n_k; ++i) {
    auto row = reconstruction_row(OpTag::Identity, spec, kernel, poly, pts[i], pts);
    for (std::size_t j = 0; j < n_k + np; ++j) a(i, j) = row[j];
  }
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t j = 0; j < n_k; ++j)
      a(n_k + p, j) = eval_poly_op(OpTag::Identity, spec, p, pts[j]);

  Vector<T> rhs = reconstruction_row(OpTag::E, spec, kernel, poly, xk, pts);
  Vector<T> wv = lu_solve_transposed(lu_factor(std::move(a)), rhs);
  wv.resize(n_k);  // drop the polynomial multiplier block
  out.w = std::move(wv);
  return out;
}

template <Scalar T>
DqWeights<T> dq_weights(const NodeSet& nodes, const Multiquadric<T>& kernel,
                        int poly_degree, const OperatorSpec<T>& spec,
                        std::size_t node_id, std::size_t n_k) {
  SpatialGrid grid(nodes.points());
  return dq_weights(nodes, grid, kernel, poly_degree, spec, node_id, n_k);
}

struct DqOptions {
  std::size_t n_k = 50;
  int poly_degree = 1;
  int workers = 0;
};

// DQ weights for every interior node.
template <Scalar T>
std::vector<DqWeights<T>> dq_weights_interior(const NodeSet& nodes,
                                              const Multiquadric<T>& kernel,
                                              const OperatorSpec<T>& spec,
                                              const DqOptions& opt = {}) {
  SpatialGrid grid(nodes.points());
  std::vector<std::size_t> ids;
  for (std::size_t i = nodes.boundary_count(); i < nodes.n(); ++i)
    ids.push_back(i);
  std::vector<DqWeights<T>> rows(ids.size());
  parallel_for(ids.size(), opt.workers, [&](std::size_t k) {
    rows[k] = dq_weights(nodes, grid, kernel, opt.poly_degree, spec, ids[k],
                         opt.n_k);
  });
  return rows;
}

// u = E y by quadrature; boundary values are pinned to zero.
template <Scalar T>
Vector<T> recover_control_dq(const NodeSet& nodes,
                             const std::vector<DqWeights<T>>& weights,
                             const Vector<T>& state) {
  if (state.size() != nodes.n())
    throw MissingStateValue("state field must cover every node");
  Vector<T> u(nodes.n(), T(0));
  for (const auto& row : weights) {
    T acc(0);
    for (std::size_t j = 0; j < row.w.size(); ++j) {
      std::size_t id = row.neighbor_ids[j];
      if (id >= state.size())
        throw MissingStateValue("weight references a node outside the field");
      acc += row.w[j] * state[id];
    }
    u[row.node_id] = acc;
  }
  return u;
}

}  // namespace rbfc
