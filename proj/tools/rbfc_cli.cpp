// Command-line driver: single solves, (c, beta) sweeps, timing
// comparisons across methods, and node-set generation/export.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "rbfc/runner.hpp"

namespace {

struct CommonFlags {
  rbfc::RunConfig cfg;
  std::string method = "lam-dq";
  std::string precision = "extended";
  std::string precond = "off";
  std::string layout = "halton";
  std::string out;
  std::string nodes_file;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->set_config("--config", "", "flat key=value config file; flags override");
  cmd->add_option("--problem", f.cfg.problem, "benchmark problem id (1, 2 or 3)")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--method", f.method, "solver: ac | lam-dq | lam-lam")
      ->check(CLI::IsMember({"ac", "lam-dq", "lam-lam"}));
  cmd->add_option("--n", f.cfg.n, "total number of nodes");
  cmd->add_option("--nk", f.cfg.n_local, "stencil size for the local methods");
  cmd->add_option("--c", f.cfg.c, "multiquadric shape parameter");
  cmd->add_option("--beta", f.cfg.beta, "penalty constant");
  cmd->add_option("--precision", f.precision, "double | extended")
      ->check(CLI::IsMember({"double", "extended"}));
  cmd->add_option("--precond", f.precond, "local-matrix preconditioner: off | on")
      ->check(CLI::IsMember({"off", "on"}));
  cmd->add_option("--layout", f.layout, "node layout: halton | grid")
      ->check(CLI::IsMember({"halton", "grid"}));
  cmd->add_option("--seed", f.cfg.seed, "node-generation seed");
  cmd->add_option("--workers", f.cfg.workers, "worker threads (0 = hardware)");
  cmd->add_option("--poly-degree", f.cfg.poly_degree,
                  "polynomial augmentation degree (-1, 0 or 1)");
  cmd->add_option("--out", f.out, "write CSV output to this path");
}

rbfc::RunConfig materialize(const CommonFlags& f) {
  rbfc::RunConfig cfg = f.cfg;
  cfg.method = rbfc::method_from_string(f.method);
  cfg.precision = rbfc::precision_from_string(f.precision);
  cfg.precond = f.precond == "on";
  cfg.layout = rbfc::layout_from_string(f.layout);
  return cfg;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path);
  if (!os) throw rbfc::Error("cannot open '" + path + "' for writing");
  os << body;
}

std::string reports_csv(const std::vector<rbfc::SolveReport>& reports) {
  std::string body = rbfc::csv_header() + "\n";
  for (const auto& r : reports) body += rbfc::to_csv_row(r) + "\n";
  return body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meshfree solvers for convection-diffusion optimal control"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run one configuration");
  CommonFlags sf;
  add_common(solve_cmd, sf);
  solve_cmd->add_option("--nodes-file", sf.nodes_file,
                        "load the node set from CSV instead of generating");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "grid of (c, beta) runs");
  CommonFlags wf;
  add_common(sweep_cmd, wf);
  std::vector<double> c_values, beta_values;
  sweep_cmd->add_option("--c-values", c_values, "comma-separated c grid")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--beta-values", beta_values, "comma-separated beta grid")
      ->delimiter(',')
      ->required();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "timing comparison across methods");
  CommonFlags bf;
  add_common(bench_cmd, bf);
  std::vector<std::string> bench_methods{"ac", "lam-dq"};
  std::vector<std::size_t> bench_ns;
  bench_cmd->add_option("--methods", bench_methods, "methods to time")
      ->delimiter(',');
  bench_cmd->add_option("--n-values", bench_ns, "ascending node counts")
      ->delimiter(',')
      ->required();

  // nodes
  auto* nodes_cmd = app.add_subcommand("nodes", "generate and emit a node set as CSV");
  std::size_t nodes_n = 622;
  std::string nodes_layout = "halton";
  std::string nodes_bc = "alternating";
  unsigned nodes_seed = 0;
  std::string nodes_out;
  nodes_cmd->add_option("--n", nodes_n, "total number of nodes");
  nodes_cmd->add_option("--layout", nodes_layout, "halton | grid")
      ->check(CLI::IsMember({"halton", "grid"}));
  nodes_cmd->add_option("--bc", nodes_bc, "boundary tags: alternating | dirichlet")
      ->check(CLI::IsMember({"alternating", "dirichlet"}));
  nodes_cmd->add_option("--seed", nodes_seed, "node-generation seed");
  nodes_cmd->add_option("--out", nodes_out, "write CSV to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      rbfc::RunConfig cfg = materialize(sf);
      rbfc::SolveReport rep;
      if (!sf.nodes_file.empty()) {
        std::ifstream is(sf.nodes_file);
        if (!is) throw rbfc::Error("cannot read '" + sf.nodes_file + "'");
        rbfc::NodeSet nodes = rbfc::read_nodes_csv(is);
        rep = rbfc::run(cfg, &nodes);
      } else {
        rep = rbfc::run(cfg);
      }
      std::cout << rbfc::markdown_table({rep});
      if (!sf.out.empty()) write_file(sf.out, reports_csv({rep}));
    } else if (*sweep_cmd) {
      rbfc::RunConfig cfg = materialize(wf);
      auto reports = rbfc::sweep(cfg, c_values, beta_values, cfg.workers);
      std::cout << rbfc::markdown_table(reports);
      if (!wf.out.empty()) write_file(wf.out, reports_csv(reports));
      for (const auto& r : reports)
        if (!r.error.empty())
          std::cerr << "sweep point c=" << r.config.c
                    << " beta=" << r.config.beta << " failed: " << r.error
                    << "\n";
    } else if (*bench_cmd) {
      rbfc::RunConfig proto = materialize(bf);
      std::vector<rbfc::Method> ms;
      for (const auto& s : bench_methods) ms.push_back(rbfc::method_from_string(s));
      auto entries = rbfc::bench_timing(ms, bench_ns, proto);
      std::cout << rbfc::bench_markdown(entries);
      if (!bf.out.empty()) write_file(bf.out, rbfc::bench_csv(entries));
    } else if (*nodes_cmd) {
      rbfc::NodeGenOptions opt;
      opt.seed = nodes_seed;
      opt.all_dirichlet = nodes_bc == "dirichlet";
      auto ns = rbfc::generate_nodes(nodes_n, rbfc::layout_from_string(nodes_layout), opt);
      if (nodes_out.empty()) {
        rbfc::write_nodes_csv(ns, std::cout);
      } else {
        std::ofstream os(nodes_out);
        if (!os) throw rbfc::Error("cannot open '" + nodes_out + "' for writing");
        rbfc::write_nodes_csv(ns, os);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
