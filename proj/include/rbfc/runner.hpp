#pragma once

// Experiment driver: single runs dispatched over the two precisions,
// (c, beta) parameter sweeps with failure capture, and the wall-clock
// comparison across methods.

#include <chrono>

#include "rbfc/ac.hpp"
#include "rbfc/dq.hpp"
#include "rbfc/lam.hpp"
#include "rbfc/report.hpp"

namespace rbfc {

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <Scalar T>
SolveReport run_typed(const RunConfig& cfg, const NodeSet& nodes) {
  auto problem = make_problem<T>(cfg.problem);
  OperatorSpec<T> spec = problem.spec_with(T(cfg.beta));
  Multiquadric<T> kernel{T(cfg.c)};
  PolyBasis poly{cfg.poly_degree};

  SolveReport rep;
  rep.config = cfg;
  rep.n_boundary = nodes.boundary_count();
  rep.n_centers = nodes.center_count();
  if (cfg.diagnostics) rep.fill = fill_distance(nodes);

  auto t_start = std::chrono::steady_clock::now();
  Vector<T> y, u;
  if (cfg.method == Method::Ac) {
    auto t0 = std::chrono::steady_clock::now();
    auto sys = assemble_ac(nodes, kernel, poly, spec, problem);
    rep.times.assembly_s = seconds_since(t0);
    auto t1 = std::chrono::steady_clock::now();
    AcSolveOptions aopt;
    aopt.compute_cond = cfg.diagnostics;
    auto sol = solve_ac_schur(sys, aopt);
    rep.times.solve_s = seconds_since(t1);
    std::tie(y, u) = ac_node_fields(sys, sol);
    rep.kappa = to_double(sol.kappa_g);
    rep.kappa_estimated = sol.kappa_estimated;
    rep.unreliable = sol.condition_overflow;
  } else {
    LamOptions lopt;
    lopt.n_local = cfg.n_local;
    lopt.precond = cfg.precond;
    lopt.workers = cfg.workers;
    lopt.compute_kappa_s = cfg.diagnostics;
    auto state = solve_state(nodes, kernel, poly, spec, problem, lopt);
    y = state.field;
    rep.kappa = to_double(state.kappa);
    rep.kappa_estimated = state.kappa_estimated;
    rep.unreliable = state.condition_overflow;
    rep.kappa_s = state.kappa_s;
    rep.kappa_s_estimated = state.kappa_s_estimated;
    rep.times.weights_s = state.times.weights_s;
    rep.times.assembly_s = state.times.assembly_s;
    rep.times.solve_s = state.times.solve_s;

    if (cfg.method == Method::LamDq) {
      DqOptions dopt;
      dopt.n_k = cfg.n_local;
      dopt.poly_degree = cfg.poly_degree;
      dopt.workers = cfg.workers;
      auto t0 = std::chrono::steady_clock::now();
      auto rows = dq_weights_interior(nodes, kernel, spec, dopt);
      rep.times.weights_s += seconds_since(t0);
      auto t1 = std::chrono::steady_clock::now();
      u = recover_control_dq(nodes, rows, y);
      rep.times.solve_s += seconds_since(t1);
    } else {
      auto control = solve_control_lam(nodes, kernel, poly, spec, problem, y, lopt);
      u = control.field;
      rep.times.weights_s += control.times.weights_s;
      rep.times.assembly_s += control.times.assembly_s;
      rep.times.solve_s += control.times.solve_s;
    }
  }
  rep.times.total_s = seconds_since(t_start);
  rep.metrics = compute_metrics(nodes, y, u, problem, T(cfg.beta));
  return rep;
}

}  // namespace detail

// Full pipeline for one configuration; `preset` bypasses node generation
// (imported node sets).  Node generation is excluded from the timings.
inline SolveReport run(const RunConfig& cfg, const NodeSet* preset = nullptr) {
  cfg.validate();
  NodeSet nodes = preset ? *preset
                         : generate_nodes(cfg.n, cfg.layout, {.seed = cfg.seed});
  RunConfig actual = cfg;
  actual.n = nodes.n();
  if (cfg.precision == Precision::Extended)
    return detail::run_typed<DDouble>(actual, nodes);
  return detail::run_typed<double>(actual, nodes);
}

// Grid sweep, beta-major to match the table layout.  Failed points carry
// the error string and the sweep continues.
inline std::vector<SolveReport> sweep(const RunConfig& base,
                                      const std::vector<double>& cs,
                                      const std::vector<double>& betas,
                                      int workers = 0) {
  if (cs.empty() || betas.empty()) throw Error("sweep grids must be nonempty");
  std::vector<std::pair<double, double>> grid;  // (beta, c)
  for (double b : betas)
    for (double c : cs) grid.emplace_back(b, c);
  std::vector<SolveReport> out(grid.size());
  if (workers <= 0) workers = default_workers();
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    RunConfig cfg = base;
    cfg.beta = grid[i].first;
    cfg.c = grid[i].second;
    if (workers > 1) cfg.workers = 1;  // no nested pools
    try {
      out[i] = run(cfg);
    } catch (const std::exception& e) {
      out[i].config = cfg;
      out[i].error = e.what();
    }
  });
  return out;
}

struct BenchEntry {
  Method method;
  std::size_t n = 0;
  PhaseTimes times;
  std::string error;
};

// Wall-clock comparison.  Diagnostics (condition numbers, fill distance)
// are reporting, not pipeline, and stay off here.
inline std::vector<BenchEntry> bench_timing(const std::vector<Method>& methods,
                                            const std::vector<std::size_t>& ns,
                                            RunConfig proto) {
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw Error("bench n values must be ascending");
  std::vector<BenchEntry> out;
  for (std::size_t n : ns) {
    for (Method m : methods) {
      RunConfig cfg = proto;
      cfg.method = m;
      cfg.n = n;
      cfg.diagnostics = false;
      BenchEntry e;
      e.method = m;
      e.n = n;
      try {
        e.times = run(cfg).times;
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
      out.push_back(e);
    }
  }
  return out;
}

inline std::string bench_csv(const std::vector<BenchEntry>& entries) {
  std::ostringstream os;
  os << "method,n,t_weights,t_assembly,t_solve,t_total,error\n";
  for (const auto& e : entries) {
    os << to_string(e.method) << ',' << e.n << ','
       << detail::fmt_double(e.times.weights_s, 17) << ','
       << detail::fmt_double(e.times.assembly_s, 17) << ','
       << detail::fmt_double(e.times.solve_s, 17) << ','
       << detail::fmt_double(e.times.total_s, 17) << ','
       << detail::sanitize_csv(e.error) << '\n';
  }
  return os.str();
}

inline std::string bench_markdown(const std::vector<BenchEntry>& entries) {
  std::ostringstream os;
  os << "| n | method | time |\n|---|---|---|\n";
  for (const auto& e : entries) {
    os << "| " << e.n << " | " << to_string(e.method) << " | "
       << (e.error.empty() ? detail::fmt_mmss(e.times.total_s) : e.error)
       << " |\n";
  }
  return os.str();
}

}  // namespace rbfc
