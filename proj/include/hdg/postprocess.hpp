#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hdg/global_solver.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/mesh.hpp"
#include "hdg/parallel.hpp"
#include "hdg/voigt.hpp"

namespace hdg {

/// Element-wise velocity of degree k + 1, nsd x n coefficients per element.
struct PostprocessedField {
  int degree = 0;
  std::vector<Eigen::MatrixXd> elements;
};

/// Bordered element problem for u*:
///   [A  C^T] [u*]   [b]
///   [C  0  ] [l ] = [g]
/// with A the D^{1/2}-weighted symmetric-gradient stiffness of degree k + 1,
/// b = -(grad_S w, L), and C the nsd mean rows followed by the nrr curl rows.
struct PostprocessSystem {
  Eigen::MatrixXd stiffness;
  Eigen::VectorXd load;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd constraint_rhs;
};

/// Builds the system of element e. Traces come from `fields` on non-Dirichlet
/// faces and from `dirichlet` elsewhere.
PostprocessSystem assemble_postprocess(const Mesh& mesh, int element, const SolutionFields& fields,
                                       const VoigtOps& ops, const VectorField& dirichlet);

/// u* of element e. Throws std::runtime_error when the bordered matrix is
/// singular.
Eigen::MatrixXd postprocess_element(const Mesh& mesh, int element, const SolutionFields& fields,
                                    const VoigtOps& ops, const VectorField& dirichlet);

PostprocessedField postprocess_all(const Mesh& mesh, const SolutionFields& fields, const VoigtOps& ops,
                                   const VectorField& dirichlet, Execution policy);

/// Quadrature order used by the post-process for degree-k fields.
inline int postprocess_quadrature_order(int k) { return 2 * k + 4; }

}  // namespace hdg
