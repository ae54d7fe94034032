#pragma once

// Run configuration and the per-run report: metrics, condition numbers,
// phase timings.  Reports serialize to CSV (17 significant digits for
// doubles, 21 printed in extended mode, either way lossless) and to a
// markdown table shaped like the experiment tables this library
// reproduces: one column per run, one row per quantity.

#include <cstdio>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rbfc/metrics.hpp"

namespace rbfc {

enum class Method { Ac, LamDq, LamLam };
enum class Precision { Double, Extended };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Ac: return "ac";
    case Method::LamDq: return "lam-dq";
    default: return "lam-lam";
  }
}
inline const char* to_string(Precision p) {
  return p == Precision::Double ? "double" : "extended";
}
inline const char* to_string(Layout l) {
  return l == Layout::Halton ? "halton" : "grid";
}

inline Method method_from_string(const std::string& s) {
  if (s == "ac") return Method::Ac;
  if (s == "lam-dq") return Method::LamDq;
  if (s == "lam-lam") return Method::LamLam;
  throw Error("unknown method '" + s + "'");
}
inline Precision precision_from_string(const std::string& s) {
  if (s == "double") return Precision::Double;
  if (s == "extended") return Precision::Extended;
  throw Error("unknown precision '" + s + "'");
}
inline Layout layout_from_string(const std::string& s) {
  if (s == "halton") return Layout::Halton;
  if (s == "grid") return Layout::Grid;
  throw Error("unknown layout '" + s + "'");
}

struct RunConfig {
  int problem = 1;
  Method method = Method::LamDq;
  std::size_t n = 622;
  std::size_t n_local = 50;
  double c = 1.0;
  double beta = 1e-6;
  Precision precision = Precision::Extended;
  bool precond = false;
  Layout layout = Layout::Halton;
  unsigned seed = 0;
  int workers = 0;          // 0: hardware default
  bool diagnostics = true;  // condition numbers + fill distance
  int poly_degree = 1;

  void validate() const {
    if (problem < 1 || problem > 3) throw Error("problem must be 1, 2 or 3");
    if (n < 9) throw Error("n must be at least 9");
    if (n_local < 1 || n_local > n) throw Error("stencil size outside [1, n]");
    if (!(c > 0.0)) throw Error("shape parameter must be positive");
    if (!(beta > 0.0)) throw Error("penalty must be positive");
    if (poly_degree < -1 || poly_degree > 1) throw Error("poly degree in {-1,0,1}");
  }
};

struct PhaseTimes {
  double weights_s = 0.0;
  double assembly_s = 0.0;
  double solve_s = 0.0;
  double total_s = 0.0;
};

struct SolveReport {
  RunConfig config;
  std::size_t n_boundary = 0;
  std::size_t n_centers = 0;
  double fill = 0.0;
  Metrics metrics;
  double kappa = 0.0;
  bool kappa_estimated = false;
  bool unreliable = false;
  std::optional<double> kappa_s;
  bool kappa_s_estimated = false;
  PhaseTimes times;
  std::string error;  // empty on success
};

// Every numeric field except wall-clock times; the determinism contract.
inline bool numerically_equal(const SolveReport& a, const SolveReport& b) {
  return a.n_boundary == b.n_boundary && a.n_centers == b.n_centers &&
         a.fill == b.fill && a.metrics.y_err_norm == b.metrics.y_err_norm &&
         a.metrics.u_norm == b.metrics.u_norm &&
         a.metrics.cost == b.metrics.cost && a.metrics.re_y == b.metrics.re_y &&
         a.metrics.re_u == b.metrics.re_u && a.kappa == b.kappa &&
         a.kappa_s == b.kappa_s && a.unreliable == b.unreliable &&
         a.error == b.error;
}

namespace detail {

inline std::string fmt_double(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v, int digits) {
  return v ? fmt_double(*v, digits) : std::string();
}

inline std::string sanitize_csv(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n') ch = ';';
  return s;
}

}  // namespace detail

inline std::string csv_header() {
  return "problem,method,n,nk,c,beta,precision,precond,layout,seed,"
         "n_boundary,n_centers,fill,y_err_norm,u_norm,cost,re_y,re_u,"
         "kappa,kappa_estimated,unreliable,kappa_s,kappa_s_estimated,"
         "t_weights,t_assembly,t_solve,t_total,error";
}

inline std::string to_csv_row(const SolveReport& r) {
  const int digits = r.config.precision == Precision::Extended ? 21 : 17;
  auto d = [&](double v) { return detail::fmt_double(v, digits); };
  std::ostringstream os;
  os << r.config.problem << ',' << to_string(r.config.method) << ','
     << r.config.n << ',' << r.config.n_local << ',' << d(r.config.c) << ','
     << d(r.config.beta) << ',' << to_string(r.config.precision) << ','
     << (r.config.precond ? "on" : "off") << ',' << to_string(r.config.layout)
     << ',' << r.config.seed << ',' << r.n_boundary << ',' << r.n_centers
     << ',' << d(r.fill) << ',' << d(r.metrics.y_err_norm) << ','
     << d(r.metrics.u_norm) << ',' << d(r.metrics.cost) << ','
     << detail::fmt_opt(r.metrics.re_y, digits) << ','
     << detail::fmt_opt(r.metrics.re_u, digits) << ',' << d(r.kappa) << ','
     << (r.kappa_estimated ? 1 : 0) << ',' << (r.unreliable ? 1 : 0) << ','
     << detail::fmt_opt(r.kappa_s, digits) << ','
     << (r.kappa_s_estimated ? 1 : 0) << ',' << d(r.times.weights_s) << ','
     << d(r.times.assembly_s) << ',' << d(r.times.solve_s) << ','
     << d(r.times.total_s) << ',' << detail::sanitize_csv(r.error);
  return os.str();
}

inline SolveReport parse_csv_row(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  f.push_back(cur);
  if (f.size() != 28) throw Error("report CSV: expected 28 fields");
  auto dbl = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
  auto opt = [&](const std::string& s) {
    return s.empty() ? std::optional<double>() : std::optional<double>(dbl(s));
  };
  SolveReport r;
  r.config.problem = std::stoi(f[0]);
  r.config.method = method_from_string(f[1]);
  r.config.n = std::stoul(f[2]);
  r.config.n_local = std::stoul(f[3]);
  r.config.c = dbl(f[4]);
  r.config.beta = dbl(f[5]);
  r.config.precision = precision_from_string(f[6]);
  r.config.precond = f[7] == "on";
  r.config.layout = layout_from_string(f[8]);
  r.config.seed = static_cast<unsigned>(std::stoul(f[9]));
  r.n_boundary = std::stoul(f[10]);
  r.n_centers = std::stoul(f[11]);
  r.fill = dbl(f[12]);
  r.metrics.y_err_norm = dbl(f[13]);
  r.metrics.u_norm = dbl(f[14]);
  r.metrics.cost = dbl(f[15]);
  r.metrics.re_y = opt(f[16]);
  r.metrics.re_u = opt(f[17]);
  r.kappa = dbl(f[18]);
  r.kappa_estimated = f[19] == "1";
  r.unreliable = f[20] == "1";
  r.kappa_s = opt(f[21]);
  r.kappa_s_estimated = f[22] == "1";
  r.times.weights_s = dbl(f[23]);
  r.times.assembly_s = dbl(f[24]);
  r.times.solve_s = dbl(f[25]);
  r.times.total_s = dbl(f[26]);
  r.error = f[27];
  return r;
}

namespace detail {

inline std::string fmt_sci(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

inline std::string fmt_opt_sci(const std::optional<double>& v) {
  return v ? fmt_sci(*v) : std::string("-");
}

inline std::string fmt_mmss(double seconds) {
  long total = static_cast<long>(seconds + 0.5);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%ld:%02ld (%.3f s)", total / 60, total % 60,
                seconds);
  return buf;
}

}  // namespace detail

// One column per run, rows shaped like the benchmark tables.
inline std::string markdown_table(const std::vector<SolveReport>& reports) {
  if (reports.empty()) return "";
  std::ostringstream os;
  auto row = [&](const std::string& name, auto value_of) {
    os << "| " << name << " |";
    for (const auto& r : reports) os << ' ' << value_of(r) << " |";
    os << '\n';
  };
  os << "| quantity |";
  for (const auto& r : reports) {
    os << ' ' << to_string(r.config.method);
    if (r.config.precond) os << "+pre";
    os << " |";
  }
  os << '\n' << "|---|";
  for (std::size_t i = 0; i < reports.size(); ++i) os << "---|";
  os << '\n';
  row("beta", [](const SolveReport& r) { return detail::fmt_sci(r.config.beta); });
  row("c", [](const SolveReport& r) { return detail::fmt_sci(r.config.c); });
  row("RE_y", [](const SolveReport& r) { return detail::fmt_opt_sci(r.metrics.re_y); });
  row("RE_u", [](const SolveReport& r) { return detail::fmt_opt_sci(r.metrics.re_u); });
  row("norm(y-yhat)", [](const SolveReport& r) { return detail::fmt_sci(r.metrics.y_err_norm); });
  row("norm(u)", [](const SolveReport& r) { return detail::fmt_sci(r.metrics.u_norm); });
  row("Cost", [](const SolveReport& r) { return detail::fmt_sci(r.metrics.cost); });
  row("kappa", [](const SolveReport& r) {
    std::string s = detail::fmt_sci(r.kappa);
    if (r.kappa_estimated) s += "~";
    if (r.unreliable) s += " (!)";
    return s;
  });
  row("kappa(S)", [](const SolveReport& r) { return detail::fmt_opt_sci(r.kappa_s); });
  row("Time", [](const SolveReport& r) { return detail::fmt_mmss(r.times.total_s); });
  row("status", [](const SolveReport& r) {
    return r.error.empty() ? std::string("ok") : r.error;
  });
  return os.str();
}

}  // namespace rbfc
