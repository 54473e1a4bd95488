#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hdg/global_solver.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/mesh.hpp"
#include "hdg/postprocess.hpp"

namespace hdg {

enum class Problem { Wang2d, Exp3d, Polynomial };
std::string_view to_string(Problem problem);
Problem parse_problem(std::string_view name);

/// Manufactured solution of a problem; the polynomial family uses velocity
/// and pressure of total degree `degree` drawn from `seed`.
ManufacturedSolution make_problem(Problem problem, int nsd, int degree, std::uint64_t seed);

/// Stabilization defaults: 40 on tri2 meshes, 4 otherwise.
double default_tau(MeshFamily family);

/// Mesh of the unit square/cube with n = 2^level subdivisions and boundary
/// tags from the solution's Neumann predicate.
Mesh problem_mesh(const ManufacturedSolution& solution, MeshFamily family, int level);

/// sqrt(sum_e \int |f_h - f|^2) for element-wise coefficients (m x n per
/// element, degree `degree`) against an exact m-vector field.
double l2_error(const Mesh& mesh, const std::vector<Eigen::MatrixXd>& coefficients, int degree,
                const VectorField& exact);

struct ErrorSet {
  double u = 0.0;
  double p = 0.0;
  double L = 0.0;
  double ustar = 0.0;
};

/// L2 errors of u, p, L = -D^{1/2} grad_S u and u*. Without Neumann faces the
/// pressure is compared with the exact one shifted to zero boundary mean.
ErrorSet compute_errors(const Mesh& mesh, const SolutionFields& fields, const PostprocessedField& ustar,
                        const ManufacturedSolution& solution);

/// Boundary mean of a scalar over the mesh boundary.
double boundary_mean(const Mesh& mesh, const ScalarField& f, int order);

/// Least-squares slope of log(error) against log(h).
double least_squares_slope(const std::vector<double>& h, const std::vector<double>& error);
std::vector<double> pairwise_slopes(const std::vector<double>& h, const std::vector<double>& error);

/// One solve with errors.
struct CaseResult {
  Mesh mesh;
  SolutionFields fields;
  PostprocessedField ustar;
  ErrorSet errors;
  double h = 0.0;
  int dofs = 0;
  double seconds = 0.0;
};

CaseResult run_case(const ManufacturedSolution& solution, MeshFamily family, int degree, double tau,
                    int level, Execution policy);

struct LevelResult {
  int level = 0;
  double h = 0.0;
  int dofs = 0;
  ErrorSet errors;
  double seconds = 0.0;
};

struct ConvergenceSeries {
  MeshFamily family = MeshFamily::Quad;
  int degree = 0;
  double tau = 0.0;
  std::vector<LevelResult> levels;
  ErrorSet slopes;                 // least squares over the last three levels
  ErrorSet slopes_all;             // least squares over every level
  std::vector<ErrorSet> pairwise;  // between successive levels
  std::string failure;             // non-empty when a level failed
};

struct ConvergenceReport {
  std::string problem;
  std::vector<ConvergenceSeries> series;
};

/// Runs levels in order for every degree. A failing level stops its series
/// and records the diagnostic; other series continue.
ConvergenceReport convergence_study(Problem problem, MeshFamily family, const std::vector<int>& degrees,
                                    std::optional<double> tau, const std::vector<int>& levels,
                                    Execution policy, std::uint64_t seed = 1);

struct TauRow {
  double tau = 0.0;
  int dofs = 0;
  ErrorSet errors;
  std::string failure;
};

std::vector<TauRow> tau_sweep(Problem problem, MeshFamily family, int degree, int level,
                              const std::vector<double>& taus, Execution policy, std::uint64_t seed = 1);

}  // namespace hdg
