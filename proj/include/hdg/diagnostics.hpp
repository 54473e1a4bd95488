#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hdg/global_solver.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/mesh.hpp"
#include "hdg/postprocess.hpp"
#include "hdg/voigt.hpp"

namespace hdg {

/// max |A - A^T| / max |A|.
double symmetry_defect(const Eigen::SparseMatrix<double>& matrix);

/// Per element: net outward flux of the trace velocity,
/// <uhat . n, 1> over non-Dirichlet faces plus <u_D . n, 1> over Dirichlet ones.
Eigen::VectorXd compatibility_residuals(const Mesh& mesh, const SolutionFields& fields,
                                        const VectorField& dirichlet);

/// Per element: |<p, 1>_{dOmega_e} / |dOmega_e| - rho_e|.
Eigen::VectorXd mean_pressure_residuals(const Mesh& mesh, const SolutionFields& fields);

/// Boundary mean of the pressure over the whole domain boundary.
double boundary_mean_pressure(const Mesh& mesh, const SolutionFields& fields);

/// Largest transmission residual over non-Dirichlet faces and trace test
/// functions: sum over sides of <phi, N^T D^{1/2} L + n p + tau (u - uhat)>,
/// plus <phi, t> on Neumann faces.
double flux_residual(const Mesh& mesh, const SolutionFields& fields, const VoigtOps& ops,
                     const StokesData& data, double tau);

/// Largest per-element violation of the post-process mean and curl
/// constraints, recomputed by quadrature.
struct ConstraintResiduals {
  double mean = 0.0;
  double circulation = 0.0;
};
ConstraintResiduals postprocess_constraint_residuals(const Mesh& mesh, const SolutionFields& fields,
                                                     const PostprocessedField& ustar, const VoigtOps& ops,
                                                     const VectorField& dirichlet);

}  // namespace hdg
