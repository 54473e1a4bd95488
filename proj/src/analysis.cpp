#include "hdg/analysis.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hdg/geometry.hpp"
#include "hdg/quadrature.hpp"
#include "hdg/ref_element.hpp"

namespace hdg {

std::string_view to_string(Problem problem) {
  switch (problem) {
    case Problem::Wang2d: return "wang2d";
    case Problem::Exp3d: return "exp3d";
    case Problem::Polynomial: return "polynomial";
  }
  return "?";
}

Problem parse_problem(std::string_view name) {
  if (name == "wang2d") return Problem::Wang2d;
  if (name == "exp3d") return Problem::Exp3d;
  if (name == "polynomial") return Problem::Polynomial;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

ManufacturedSolution make_problem(Problem problem, int nsd, int degree, std::uint64_t seed) {
  switch (problem) {
    case Problem::Wang2d:
      if (nsd != 2) throw std::invalid_argument("wang2d needs a 2D mesh family");
      return wang_flow();
    case Problem::Exp3d:
      if (nsd != 3) throw std::invalid_argument("exp3d needs a 3D mesh family");
      return exp_flow_3d();
    case Problem::Polynomial:
      return polynomial_flow(nsd, degree, 1.0, seed);
  }
  throw std::invalid_argument("unknown problem");
}

double default_tau(MeshFamily family) { return family == MeshFamily::Tri2 ? 40.0 : 4.0; }

Mesh problem_mesh(const ManufacturedSolution& solution, MeshFamily family, int level) {
  if (level < 0 || level > 12) throw std::invalid_argument("level must lie in 0..12");
  const int dim = dimension(family);
  if (dim != solution.nsd) throw std::invalid_argument("mesh family dimension does not match the problem");
  Mesh mesh = generate_cartesian_mesh(Box::unit(dim), 1 << level, family);
  return classify_boundary(std::move(mesh), solution.neumann);
}

double l2_error(const Mesh& mesh, const std::vector<Eigen::MatrixXd>& coefficients, int degree,
                const VectorField& exact) {
  const int order = 2 * degree + 4;
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const CellType type = mesh.element(e).type;
    const QuadratureRule& rule = quadrature_rule(type, order);
    const Eigen::MatrixXd values = reference_element(type, degree).tabulate(rule.points);
    const Eigen::MatrixXd verts = mesh.element_vertices(e);
    for (int q = 0; q < rule.size(); ++q) {
      const PhysicalMap map = map_physical(type, verts, rule.points.row(q).transpose());
      const Eigen::VectorXd diff = coefficients[e] * values.row(q).transpose() - exact(map.x);
      sum += rule.weights(q) * map.det * diff.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double boundary_mean(const Mesh& mesh, const ScalarField& f, int order) {
  double integral = 0.0, measure = 0.0;
  for (int id = 0; id < mesh.num_faces(); ++id) {
    if (!mesh.face(id).is_boundary()) continue;
    const FaceQuadrature fq = tabulate_face(mesh, id, 1, order);
    for (int q = 0; q < fq.weights.size(); ++q) integral += fq.weights(q) * f(fq.points.row(q).transpose());
    measure += fq.measure;
  }
  return integral / measure;
}

ErrorSet compute_errors(const Mesh& mesh, const SolutionFields& fields, const PostprocessedField& ustar,
                        const ManufacturedSolution& sol) {
  const int k = fields.degree;
  const int ne = mesh.num_elements();
  std::vector<Eigen::MatrixXd> u(ne), p(ne), L(ne);
  for (int e = 0; e < ne; ++e) {
    u[e] = fields.elements[e].u;
    p[e] = fields.elements[e].p.transpose();
    L[e] = fields.elements[e].L;
  }
  const double shift = fields.pure_dirichlet ? boundary_mean(mesh, sol.pressure, 2 * k + 4) : 0.0;
  const VectorField pressure = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, sol.pressure(x) - shift);
  };
  const VectorField mixed = [&](const Eigen::VectorXd& x) { return sol.mixed(x); };

  ErrorSet err;
  err.u = l2_error(mesh, u, k, sol.velocity);
  err.p = l2_error(mesh, p, k, pressure);
  err.L = l2_error(mesh, L, k, mixed);
  err.ustar = l2_error(mesh, ustar.elements, ustar.degree, sol.velocity);
  return err;
}

double least_squares_slope(const std::vector<double>& h, const std::vector<double>& error) {
  if (h.size() != error.size() || h.size() < 2)
    throw std::invalid_argument("least_squares_slope: need at least two matching samples");
  const int n = static_cast<int>(h.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += std::log(h[i]);
    my += std::log(error[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(error[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<double> pairwise_slopes(const std::vector<double>& h, const std::vector<double>& error) {
  std::vector<double> out;
  for (std::size_t i = 1; i < h.size() && i < error.size(); ++i)
    out.push_back(std::log(error[i] / error[i - 1]) / std::log(h[i] / h[i - 1]));
  return out;
}

CaseResult run_case(const ManufacturedSolution& sol, MeshFamily family, int degree, double tau, int level,
                    Execution policy) {
  const auto start = std::chrono::steady_clock::now();
  Mesh mesh = problem_mesh(sol, family, level);
  const StokesData data = sol.data();
  SolutionFields fields = solve_stokes(mesh, data, {degree, tau, policy});
  const VoigtOps ops(sol.nsd, sol.viscosity);
  PostprocessedField ustar = postprocess_all(mesh, fields, ops, data.dirichlet, policy);
  const ErrorSet errors = compute_errors(mesh, fields, ustar, sol);
  const int dofs = fields.stats.total_dofs;
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return CaseResult{std::move(mesh), std::move(fields), std::move(ustar), errors, 1.0 / (1 << level), dofs,
                    seconds};
}

namespace {

ErrorSet fit(const std::vector<LevelResult>& levels, std::size_t first) {
  std::vector<double> h, u, p, L, us;
  for (std::size_t i = first; i < levels.size(); ++i) {
    h.push_back(levels[i].h);
    u.push_back(levels[i].errors.u);
    p.push_back(levels[i].errors.p);
    L.push_back(levels[i].errors.L);
    us.push_back(levels[i].errors.ustar);
  }
  return {least_squares_slope(h, u), least_squares_slope(h, p), least_squares_slope(h, L),
          least_squares_slope(h, us)};
}

}  // namespace

ConvergenceReport convergence_study(Problem problem, MeshFamily family, const std::vector<int>& degrees,
                                    std::optional<double> tau, const std::vector<int>& levels,
                                    Execution policy, std::uint64_t seed) {
  if (levels.size() < 3) throw std::invalid_argument("convergence_study: at least three levels required");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] != levels[i - 1] + 1)
      throw std::invalid_argument("convergence_study: levels must be consecutive so h halves");
  const int nsd = dimension(family);
  ConvergenceReport report;
  report.problem = std::string(to_string(problem));
  for (int k : degrees) {
    ConvergenceSeries s;
    s.family = family;
    s.degree = k;
    s.tau = tau.value_or(default_tau(family));
    const ManufacturedSolution sol = make_problem(problem, nsd, k, seed);
    for (int level : levels) {
      try {
        const CaseResult r = run_case(sol, family, k, s.tau, level, policy);
        s.levels.push_back({level, r.h, r.dofs, r.errors, r.seconds});
      } catch (const std::exception& ex) {
        s.failure = "level " + std::to_string(level) + ": " + ex.what();
        break;
      }
    }
    if (s.levels.size() >= 2) {
      s.slopes = fit(s.levels, s.levels.size() >= 3 ? s.levels.size() - 3 : 0);
      s.slopes_all = fit(s.levels, 0);
      for (std::size_t i = 1; i < s.levels.size(); ++i) {
        const auto& a = s.levels[i - 1];
        const auto& b = s.levels[i];
        const double lh = std::log(b.h / a.h);
        s.pairwise.push_back({std::log(b.errors.u / a.errors.u) / lh, std::log(b.errors.p / a.errors.p) / lh,
                              std::log(b.errors.L / a.errors.L) / lh,
                              std::log(b.errors.ustar / a.errors.ustar) / lh});
      }
    }
    report.series.push_back(std::move(s));
  }
  return report;
}

std::vector<TauRow> tau_sweep(Problem problem, MeshFamily family, int degree, int level,
                              const std::vector<double>& taus, Execution policy, std::uint64_t seed) {
  for (double t : taus)
    if (!(t > 0.0)) throw std::invalid_argument("tau_sweep: tau values must be positive");
  const ManufacturedSolution sol = make_problem(problem, dimension(family), degree, seed);
  std::vector<TauRow> rows;
  for (double t : taus) {
    TauRow row;
    row.tau = t;
    try {
      const CaseResult r = run_case(sol, family, degree, t, level, policy);
      row.dofs = r.dofs;
      row.errors = r.errors;
    } catch (const std::exception& ex) {
      row.failure = ex.what();
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.errors = {nan, nan, nan, nan};
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hdg
