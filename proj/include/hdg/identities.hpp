#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hdg/cell.hpp"
#include "hdg/ref_element.hpp"
#include "hdg/voigt.hpp"

namespace hdg {

/// Both sides of an integral identity evaluated by quadrature.
struct IdentityCheck {
  Eigen::VectorXd boundary;
  Eigen::VectorXd volume;
  double residual = 0.0;  // max |boundary - volume|
};

/// Generalized Gauss theorem on one element with vertices `vertices`:
///   \oint (N^T s_V) . v = \int s_V . (grad_S v) + \int (grad_S^T s_V) . v
/// for fields given by nodal coefficients of `basis` (stress msd x n,
/// velocity nsd x n).
IdentityCheck check_generalized_gauss(CellType type, const Eigen::MatrixXd& vertices,
                                      const ReferenceElement& basis, const VoigtOps& ops,
                                      const Eigen::MatrixXd& stress, const Eigen::MatrixXd& velocity);

/// Generalized Stokes theorem: \int grad_W v = \oint circulation_density(v, n).
IdentityCheck check_generalized_stokes(CellType type, const Eigen::MatrixXd& vertices,
                                       const ReferenceElement& basis, const VoigtOps& ops,
                                       const Eigen::MatrixXd& velocity);

/// Sweep over every cell type and degree 1..max_degree with random nodal
/// fields on a random affine image of the reference cell. Returns the largest
/// residual of both identities. Deterministic for a given seed.
struct IdentityCase {
  CellType cell;
  int degree;
  double gauss;
  double stokes;
};
struct IdentitySweep {
  std::vector<IdentityCase> rows;
  double max_gauss = 0.0;
  double max_stokes = 0.0;
  int cases = 0;
};
IdentitySweep sweep_identities(int max_degree, std::uint64_t seed);

}  // namespace hdg
