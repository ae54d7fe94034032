#pragma once

// Local asymmetric method.  Per center: a local collocation system over
// the stencil with row blocks [interp | Dirichlet | E-boundary | interior
// op | poly], a weight row w^T = (Q H)(x1) A^{-1} obtained through the
// transposed LU solve, then a sparse global system S y_c = b over the
// center unknowns.  The state pass enforces M y = yhat with the boundary
// pair {y = g, E y = 0}; the control pass reruns the same machinery for
// beta E* u = yhat - y with u = 0 on the whole boundary.

#include <chrono>
#include <mutex>
#include <optional>

#include "rbfc/metrics.hpp"
#include "rbfc/parallel.hpp"
#include "rbfc/sparse.hpp"

namespace rbfc {

template <Scalar T>
struct LamPass {
  OpTag interior_op = OpTag::M;
  bool all_dirichlet = false;
  std::function<T(std::size_t)> boundary_data;  // node id -> Dirichlet datum
  std::function<T(std::size_t)> interior_data;  // node id -> interior datum
};

template <Scalar T>
struct LocalSystem {
  Stencil stencil;
  DenseMatrix<T> a;
  std::vector<long> unknown_col;  // >= 0: global center ordinal, -1: known
  Vector<T> known_value;
  T rhs_center{0};
  std::size_t dim() const { return a.rows(); }
};

template <Scalar T>
struct WeightRow {
  std::size_t center_id = 0;
  OpTag op = OpTag::M;
  Vector<T> w;
  T kappa{0};
  bool kappa_estimated = false;
  bool overflow = false;
};

// Shape perturbation for the preconditioner: c = m x 10^a maps to
// c_hat = (m + 0.001) x 10^a.
template <Scalar T>
T perturbed_shape(const T& c) {
  double cd = to_double(c);
  double alpha = std::floor(std::log10(cd));
  return c + T(0.001 * std::pow(10.0, alpha));
}

template <Scalar T>
std::vector<Point2> member_points(const NodeSet& nodes, const Stencil& st) {
  std::vector<Point2> pts;
  pts.reserve(st.size());
  for (std::size_t id : st.member_ids) pts.push_back(nodes.point(id));
  return pts;
}

template <Scalar T>
LocalSystem<T> assemble_local(const NodeSet& nodes, const Stencil& st,
                              const Multiquadric<T>& kernel,
                              const PolyBasis& poly, const OperatorSpec<T>& spec,
                              const LamPass<T>& pass) {
  const std::size_t nk = st.size();
  const std::size_t np = poly.count();
  auto pts = member_points<T>(nodes, st);

  // Coincident stencil nodes make the Gram block exactly singular.
  const double degenerate = 1e-14 * std::sqrt(2.0);
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = i + 1; j < nk; ++j)
      if (dist_sq(pts[i], pts[j]) < degenerate * degenerate)
        throw DegenerateStencil("coincident nodes in stencil");

  LocalSystem<T> ls;
  ls.stencil = st;
  ls.a = DenseMatrix<T>(nk + np, nk + np);
  ls.unknown_col.assign(nk + np, -1);
  ls.known_value.assign(nk + np, T(0));

  for (std::size_t j = 0; j < nk; ++j) {
    const std::size_t id = st.member_ids[j];
    OpTag row_op;
    if (j < st.n_center) {
      row_op = OpTag::Identity;
      ls.unknown_col[j] = nodes.center_ordinal(id);
    } else if (j < st.n_center + st.n_b1) {
      row_op = OpTag::Identity;  // Dirichlet trace
      ls.known_value[j] = pass.boundary_data(id);
    } else if (j < st.n_center + st.n_b1 + st.n_b2) {
      row_op = OpTag::E;  // homogeneous second boundary condition
    } else {
      row_op = pass.interior_op;
      ls.known_value[j] = pass.interior_data(id);
    }
    auto row = reconstruction_row(row_op, spec, kernel, poly, pts[j], pts);
    for (std::size_t col = 0; col < nk + np; ++col) ls.a(j, col) = row[col];
  }
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t j = 0; j < nk; ++j)
      ls.a(nk + p, j) = eval_poly_op(OpTag::Identity, spec, p, pts[j]);

  ls.rhs_center = pass.interior_data(st.center_index);
  return ls;
}

namespace detail {

template <Scalar T>
Vector<T> transposed_matvec(const DenseMatrix<T>& a, const Vector<T>& x) {
  Vector<T> y(a.cols(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const T xi = x[i];
    if (xi == T(0)) continue;
    const T* ai = a.row_data(i);
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += ai[j] * xi;
  }
  return y;
}

}  // namespace detail

// Weight row for the pass operator at the stencil center.  Without
// preconditioning this is the transposed solve w^T A = (Q H)(x1).  With
// it, A+ is the same stencil at the perturbed shape, P = A+^{-1} is
// formed explicitly, the transposed system is left-preconditioned by P^T
// and solved on (A P)^T, and two sweeps of iterative refinement against
// the original system recover the accuracy the ill-conditioned direct
// solve would lose.  kappa(PA) is what gets recorded.
template <Scalar T>
WeightRow<T> weight_row(const NodeSet& nodes, const LocalSystem<T>& ls,
                        const Multiquadric<T>& kernel, const PolyBasis& poly,
                        const OperatorSpec<T>& spec, const LamPass<T>& pass,
                        std::optional<T> precond_shape = std::nullopt) {
  WeightRow<T> out;
  out.center_id = ls.stencil.center_index;
  out.op = pass.interior_op;

  auto pts = member_points<T>(nodes, ls.stencil);
  Vector<T> rhs = reconstruction_row(pass.interior_op, spec, kernel, poly,
                                     nodes.point(ls.stencil.center_index), pts);

  Cond1<T> cond{T(0), false};
  if (!precond_shape) {
    LuFactors<T> f = lu_factor(ls.a);
    out.w = lu_solve_transposed(f, rhs);
    cond = cond_1_from_factors(f, norm_1(ls.a));
  } else {
    Multiquadric<T> shifted{*precond_shape};
    LocalSystem<T> plus = assemble_local(nodes, ls.stencil, shifted, poly, spec, pass);
    DenseMatrix<T> p = inverse(plus.a);
    DenseMatrix<T> ap = ls.a * p;
    LuFactors<T> f = lu_factor(ap);
    auto true_resid = [&](const Vector<T>& w) {
      Vector<T> r = detail::transposed_matvec(ls.a, w);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
      return r;
    };
    // Left-preconditioned transposed system (A P)^T w = P^T r.
    Vector<T> q = detail::transposed_matvec(p, rhs);
    out.w = lu_solve_transposed(f, q);
    // The direct factorization of A stays available here; if it succeeds
    // it is the backward-stable iterate, and the preconditioned operator
    // refines whichever candidate carries the smaller true residual.
    try {
      LuFactors<T> fplain = lu_factor(ls.a);
      Vector<T> wp = lu_solve_transposed(fplain, rhs);
      if (norm_1(true_resid(wp)) < norm_1(true_resid(out.w))) out.w = std::move(wp);
    } catch (const SingularMatrix&) {
    }
    T best = norm_1(true_resid(out.w));
    for (int sweep = 0; sweep < 3; ++sweep) {
      Vector<T> resid = true_resid(out.w);
      Vector<T> dq = detail::transposed_matvec(p, resid);
      Vector<T> delta = lu_solve_transposed(f, dq);
      Vector<T> trial = out.w;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += delta[i];
      T rn = norm_1(true_resid(trial));
      if (!(rn < best)) break;
      best = rn;
      out.w = std::move(trial);
    }
    cond = cond_1(p * ls.a);
  }
  out.kappa = cond.kappa;
  out.kappa_estimated = cond.estimated;
  out.overflow =
      !(to_double(cond.kappa) < 1.0 / scalar_traits<T>::unit_roundoff());
  return out;
}

// Compact per-center result kept after the local system is dropped.
template <Scalar T>
struct LamRow {
  Vector<T> w;
  std::vector<long> unknown_col;
  Vector<T> known_value;
  T rhs_center{0};
  T kappa{0};
  bool kappa_estimated = false;
  bool overflow = false;
};

template <Scalar T>
struct GlobalSparse {
  SparseMatrix<T> s;
  Vector<T> b;
};

template <Scalar T>
GlobalSparse<T> assemble_global(const std::vector<LamRow<T>>& rows) {
  const std::size_t nc = rows.size();
  GlobalSparse<T> g{SparseMatrix<T>(nc, nc), Vector<T>(nc, T(0))};
  for (std::size_t k = 0; k < nc; ++k) {
    const LamRow<T>& r = rows[k];
    if (r.w.size() != r.unknown_col.size() ||
        r.w.size() != r.known_value.size())
      throw InconsistentLayout("weight row and data layout disagree");
    std::map<std::size_t, T> cols;
    T acc = r.rhs_center;
    for (std::size_t j = 0; j < r.w.size(); ++j) {
      long col = r.unknown_col[j];
      if (col >= 0)
        cols[static_cast<std::size_t>(col)] += r.w[j];
      else
        acc -= r.w[j] * r.known_value[j];
    }
    if (!cols.count(k))
      throw InconsistentLayout("center missing from its own stencil row");
    g.b[k] = acc;
    g.s.append_row(k, {cols.begin(), cols.end()});
  }
  return g;
}

struct LamOptions {
  std::size_t n_local = 50;
  bool precond = false;
  int workers = 0;               // 0: hardware default
  double sparse_tol = 0.0;       // 0: precision default
  bool compute_kappa_s = true;
  std::size_t kappa_s_limit = 3000;  // skip the dense estimate above this
};

struct LamPhaseTimes {
  double weights_s = 0.0;
  double assembly_s = 0.0;
  double solve_s = 0.0;
};

template <Scalar T>
struct LamResult {
  Vector<T> field;  // full-length nodal field (state y or control u)
  T kappa{0};       // max over centers, kappa(A) or kappa(PA)
  bool kappa_estimated = false;
  bool condition_overflow = false;
  std::optional<double> kappa_s;
  bool kappa_s_estimated = false;
  LamPhaseTimes times;
};

namespace detail {

template <Scalar T>
double precision_default_tol() {
  return std::is_same_v<T, DDouble> ? 1e-24 : 1e-12;
}

// kappa(S) is small by construction (the paper's tables top out near
// 5e7), so the diagnostic runs in hardware precision.
template <Scalar T>
std::pair<std::optional<double>, bool> kappa_s_estimate(
    const SparseMatrix<T>& s, std::size_t limit) {
  if (s.rows() > limit) return {std::nullopt, false};
  DenseMatrix<double> d(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t k = s.row_begin(i); k < s.row_end(i); ++k)
      d(i, s.col(k)) = to_double(s.value(k));
  auto c = cond_1(d);
  return {to_double(c.kappa), c.estimated};
}

template <Scalar T>
std::vector<LamRow<T>> compute_rows(const NodeSet& nodes,
                                    const SpatialGrid& grid,
                                    const Multiquadric<T>& kernel,
                                    const PolyBasis& poly,
                                    const OperatorSpec<T>& spec,
                                    const LamPass<T>& pass,
                                    const LamOptions& opt,
                                    StencilTagging tagging) {
  const auto& centers = nodes.center_ids();
  std::vector<LamRow<T>> rows(centers.size());
  std::optional<T> chat;
  if (opt.precond) chat = perturbed_shape(kernel.c);
  parallel_for(centers.size(), opt.workers, [&](std::size_t k) {
    Stencil st = build_stencil(nodes, grid, centers[k], opt.n_local, tagging);
    LocalSystem<T> ls = assemble_local(nodes, st, kernel, poly, spec, pass);
    WeightRow<T> wr = weight_row(nodes, ls, kernel, poly, spec, pass, chat);
    rows[k] = LamRow<T>{std::move(wr.w), std::move(ls.unknown_col),
                        std::move(ls.known_value), ls.rhs_center, wr.kappa,
                        wr.kappa_estimated, wr.overflow};
  });
  return rows;
}

// Local reconstruction y(x) = H(x) A^{-1} d for nodes that are not
// centers (subset-centers mode): d is fully known once y_c is solved.
template <Scalar T>
void reconstruct_non_centers(const NodeSet& nodes, const SpatialGrid& grid,
                             const Multiquadric<T>& kernel,
                             const PolyBasis& poly, const OperatorSpec<T>& spec,
                             const LamPass<T>& pass, const LamOptions& opt,
                             StencilTagging tagging, const Vector<T>& yc,
                             Vector<T>& field) {
  std::vector<std::size_t> queries;
  for (std::size_t i = nodes.boundary_count(); i < nodes.n(); ++i)
    if (!nodes.is_center(i)) queries.push_back(i);
  if (queries.empty()) return;

  std::vector<Point2> cpts;
  for (std::size_t id : nodes.center_ids()) cpts.push_back(nodes.point(id));
  SpatialGrid cgrid(cpts);

  for (std::size_t q : queries) {
    std::size_t owner = cgrid.k_nearest(nodes.point(q), 1)[0];
    Stencil st =
        build_stencil(nodes, grid, nodes.center_ids()[owner], opt.n_local, tagging);
    LocalSystem<T> ls = assemble_local(nodes, st, kernel, poly, spec, pass);
    Vector<T> d = ls.known_value;
    for (std::size_t j = 0; j < ls.unknown_col.size(); ++j)
      if (ls.unknown_col[j] >= 0)
        d[j] = yc[static_cast<std::size_t>(ls.unknown_col[j])];
    Vector<T> lambda = lu_solve(lu_factor(ls.a), d);
    auto pts = member_points<T>(nodes, st);
    auto row = reconstruction_row(OpTag::Identity, spec, kernel, poly,
                                  nodes.point(q), pts);
    field[q] = dot(row, lambda);
  }
}

template <Scalar T>
LamResult<T> run_pass(const NodeSet& nodes, const Multiquadric<T>& kernel,
                      const PolyBasis& poly, const OperatorSpec<T>& spec,
                      const LamPass<T>& pass, const LamOptions& opt,
                      StencilTagging tagging) {
  using clock = std::chrono::steady_clock;
  spec.validate();
  if (nodes.center_count() == 0) throw TooFewNodes("no centers flagged");
  SpatialGrid grid(nodes.points());

  LamResult<T> res;
  auto t0 = clock::now();
  auto rows = compute_rows(nodes, grid, kernel, poly, spec, pass, opt, tagging);
  auto t1 = clock::now();
  auto g = assemble_global(rows);
  auto t2 = clock::now();

  res.kappa = T(0);
  for (const auto& r : rows) {
    if (r.kappa > res.kappa) res.kappa = r.kappa;
    res.kappa_estimated = res.kappa_estimated || r.kappa_estimated;
    res.condition_overflow = res.condition_overflow || r.overflow;
  }
  if (opt.compute_kappa_s)
    std::tie(res.kappa_s, res.kappa_s_estimated) =
        kappa_s_estimate(g.s, opt.kappa_s_limit);

  SparseSolveOptions sopt;
  sopt.tol = opt.sparse_tol > 0 ? opt.sparse_tol : precision_default_tol<T>();
  auto t3 = clock::now();
  Vector<T> yc = sparse_solve(g.s, g.b, sopt);
  auto t4 = clock::now();

  res.field.assign(nodes.n(), T(0));
  for (std::size_t i = 0; i < nodes.boundary_count(); ++i)
    res.field[i] = pass.boundary_data(i);
  for (std::size_t k = 0; k < yc.size(); ++k)
    res.field[nodes.center_ids()[k]] = yc[k];
  reconstruct_non_centers(nodes, grid, kernel, poly, spec, pass, opt, tagging,
                          yc, res.field);

  res.times.weights_s = std::chrono::duration<double>(t1 - t0).count();
  res.times.assembly_s = std::chrono::duration<double>(t2 - t1).count();
  res.times.solve_s = std::chrono::duration<double>(t4 - t3).count();
  return res;
}

}  // namespace detail

// State solve: M y = yhat with {y = g, E y = 0} split over the boundary.
// The full field carries g at boundary nodes (the Dirichlet trace holds
// on all of the boundary for the fourth-order problem).
template <Scalar T>
LamResult<T> solve_state(const NodeSet& nodes, const Multiquadric<T>& kernel,
                         const PolyBasis& poly, const OperatorSpec<T>& spec,
                         const ControlProblem<T>& problem,
                         const LamOptions& opt = {}) {
  LamPass<T> pass;
  pass.interior_op = OpTag::M;
  pass.all_dirichlet = false;
  pass.boundary_data = [&](std::size_t id) {
    return problem.boundary(nodes.point(id));
  };
  pass.interior_data = [&](std::size_t id) {
    return problem.target(nodes.point(id));
  };
  return detail::run_pass(nodes, kernel, poly, spec, pass, opt,
                          StencilTagging::FromNodeSet);
}

// Control solve: beta E* u = yhat - y with u = 0 on the whole boundary,
// using the already computed state field.
template <Scalar T>
LamResult<T> solve_control_lam(const NodeSet& nodes,
                               const Multiquadric<T>& kernel,
                               const PolyBasis& poly,
                               const OperatorSpec<T>& spec,
                               const ControlProblem<T>& problem,
                               const Vector<T>& state,
                               const LamOptions& opt = {}) {
  if (state.size() != nodes.n())
    throw MissingStateValue("state field must cover every node");
  LamPass<T> pass;
  pass.interior_op = OpTag::BetaEstar;
  pass.all_dirichlet = true;
  pass.boundary_data = [](std::size_t) { return T(0); };
  pass.interior_data = [&](std::size_t id) {
    return problem.target(nodes.point(id)) - state[id];
  };
  return detail::run_pass(nodes, kernel, poly, spec, pass, opt,
                          StencilTagging::AllDirichlet);
}

}  // namespace rbfc
