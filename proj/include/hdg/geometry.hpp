#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hdg/cell.hpp"
#include "hdg/mesh.hpp"
#include "hdg/ref_element.hpp"

namespace hdg {

struct PhysicalMap {
  Eigen::VectorXd x;
  Eigen::MatrixXd jacobian;           // J_ij = dx_i / dxi_j
  double det = 0.0;
  Eigen::MatrixXd inverse_transpose;  // J^{-T}; physical gradient = J^{-T} * reference gradient
};

/// Affine (simplex) or multilinear (tensor cell) map of the reference cell
/// onto the cell with the given vertices (one row per vertex). Throws
/// std::domain_error when det J <= 0.
PhysicalMap map_physical(CellType type, const Eigen::MatrixXd& vertices,
                         const Eigen::Ref<const Eigen::VectorXd>& xi);

/// Volume quadrature of one element, tabulated in physical coordinates.
struct CellQuadrature {
  Eigen::MatrixXd points;                // nq x dim
  Eigen::VectorXd weights;               // reference weight * det J
  Eigen::MatrixXd values;                // nq x n
  std::vector<Eigen::MatrixXd> gradients;  // per physical direction, nq x n
  double measure = 0.0;
};

/// Quadrature on one face, seen from one adjacent element.
struct FaceQuadrature {
  int face = -1;
  int local_face = -1;
  BoundaryTag tag = BoundaryTag::Interior;
  Eigen::MatrixXd points;        // nq x dim
  Eigen::MatrixXd normals;       // nq x dim, unit and outward from the element
  Eigen::VectorXd weights;       // reference weight * surface measure
  Eigen::MatrixXd cell_values;   // nq x n, element basis (empty for face-only tabulation)
  Eigen::MatrixXd trace_values;  // nq x n_face, trace basis in the face parametrization
  double measure = 0.0;
};

struct ElementQuadrature {
  int element = -1;
  CellQuadrature cell;
  std::vector<FaceQuadrature> faces;  // in local face order
  double boundary_measure = 0.0;
};

/// Tabulates `basis` (cell) and the degree-`trace_degree` trace basis on all
/// faces of element e, with rules of the given order.
ElementQuadrature tabulate_element(const Mesh& mesh, int element, const ReferenceElement& basis,
                                   int trace_degree, int order);

/// Face-only tabulation, normals outward from the left element.
FaceQuadrature tabulate_face(const Mesh& mesh, int face, int trace_degree, int order);

}  // namespace hdg
