#include "hdg/report.hpp"

#include <cstdio>
#include <sstream>

namespace hdg {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void csv_row(std::ostringstream& out, MeshFamily family, int k, double tau, int level, double h, int dofs,
             const ErrorSet& e) {
  out << to_string(family) << ',' << k << ',' << format_double(tau) << ',' << level << ','
      << format_double(h) << ',' << dofs << ',' << format_double(e.u) << ',' << format_double(e.p) << ','
      << format_double(e.L) << ',' << format_double(e.ustar) << '\n';
}

}  // namespace

std::string convergence_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& s : report.series)
    for (const auto& l : s.levels) csv_row(out, s.family, s.degree, s.tau, l.level, l.h, l.dofs, l.errors);
  return out.str();
}

std::string tau_sweep_csv(MeshFamily family, int degree, int level, const std::vector<TauRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  const double h = 1.0 / (1 << level);
  for (const auto& r : rows) csv_row(out, family, degree, r.tau, level, h, r.dofs, r.errors);
  return out.str();
}

std::string slopes_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "family,k,tau,slope_u,slope_p,slope_L,slope_ustar\n";
  for (const auto& s : report.series)
    out << to_string(s.family) << ',' << s.degree << ',' << format_double(s.tau) << ','
        << format_double(s.slopes.u) << ',' << format_double(s.slopes.p) << ','
        << format_double(s.slopes.L) << ',' << format_double(s.slopes.ustar) << '\n';
  return out.str();
}

nlohmann::json to_json(const ErrorSet& e) {
  return {{"u", e.u}, {"p", e.p}, {"L", e.L}, {"ustar", e.ustar}};
}

nlohmann::json to_json(const SolverStats& s) {
  return {{"method", s.method},
          {"trace_dofs", s.trace_dofs},
          {"rho_dofs", s.rho_dofs},
          {"multiplier_dofs", s.multiplier_dofs},
          {"total_dofs", s.total_dofs},
          {"nonzeros", s.nonzeros},
          {"factorization_seconds", s.factorization_seconds},
          {"solve_seconds", s.solve_seconds},
          {"relative_residual", s.relative_residual}};
}

nlohmann::json to_json(const ConvergenceReport& report) {
  nlohmann::json series = nlohmann::json::array();
  for (const auto& s : report.series) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : s.levels)
      levels.push_back({{"level", l.level}, {"h", l.h}, {"dofs", l.dofs}, {"errors", to_json(l.errors)}});
    nlohmann::json pairwise = nlohmann::json::array();
    for (const auto& p : s.pairwise) pairwise.push_back(to_json(p));
    nlohmann::json entry = {{"family", std::string(to_string(s.family))},
                            {"k", s.degree},
                            {"tau", s.tau},
                            {"levels", levels},
                            {"slopes_last3", to_json(s.slopes)},
                            {"slopes_all", to_json(s.slopes_all)},
                            {"pairwise_slopes", pairwise}};
    if (!s.failure.empty()) entry["failure"] = s.failure;
    series.push_back(entry);
  }
  return {{"problem", report.problem}, {"series", series}};
}

nlohmann::json to_json(const IdentitySweep& sweep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : sweep.rows)
    rows.push_back({{"cell", std::string(to_string(r.cell))},
                    {"k", r.degree},
                    {"gauss_residual", r.gauss},
                    {"stokes_residual", r.stokes}});
  return {{"cases", sweep.cases},
          {"max_gauss_residual", sweep.max_gauss},
          {"max_stokes_residual", sweep.max_stokes},
          {"rows", rows}};
}

nlohmann::json tau_sweep_json(MeshFamily family, int degree, int level, const std::vector<TauRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"tau", r.tau}, {"dofs", r.dofs}, {"errors", to_json(r.errors)}};
    if (!r.failure.empty()) row["failure"] = r.failure;
    out.push_back(row);
  }
  return {{"family", std::string(to_string(family))}, {"k", degree}, {"level", level}, {"rows", out}};
}

}  // namespace hdg
