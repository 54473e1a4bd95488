#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "hdg/cell.hpp"

namespace hdg {

/// Highest basis degree. Post-processing a degree-4 solution needs degree 5.
inline constexpr int kMaxBasisDegree = 5;

/// Nodal Lagrange basis of degree k on a reference cell with equispaced nodes.
///
/// Simplices carry the complete space P^k; lines, quadrilaterals and
/// hexahedra carry the tensor space Q^k. The basis is obtained by inverting
/// the monomial Vandermonde matrix at the nodes, which is well conditioned for
/// the degrees supported here. For k = 1 the nodes coincide with
/// reference_vertices(type), in the same order.
class ReferenceElement {
 public:
  ReferenceElement(CellType type, int degree);

  CellType cell_type() const { return type_; }
  int degree() const { return degree_; }
  int dim() const { return dimension(type_); }
  int size() const { return static_cast<int>(nodes_.rows()); }

  /// size() x dim reference node coordinates.
  const Eigen::MatrixXd& nodes() const { return nodes_; }

  /// Node indices lying on each reference face (same face order as reference_faces).
  const std::vector<std::vector<int>>& face_nodes() const { return face_nodes_; }

  Eigen::VectorXd values(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  /// size() x dim reference gradients.
  Eigen::MatrixXd gradients(const Eigen::Ref<const Eigen::VectorXd>& xi) const;

  /// npts x size() basis values at each row of `points`.
  Eigen::MatrixXd tabulate(const Eigen::MatrixXd& points) const;
  /// One npts x size() matrix of reference derivatives per direction.
  std::vector<Eigen::MatrixXd> tabulate_gradients(const Eigen::MatrixXd& points) const;

 private:
  Eigen::MatrixXd monomials(const Eigen::MatrixXd& points) const;
  Eigen::MatrixXd monomial_derivatives(const Eigen::MatrixXd& points, int dir) const;

  CellType type_;
  int degree_;
  Eigen::MatrixXd nodes_;
  std::vector<std::array<int, 3>> exponents_;
  Eigen::MatrixXd coefficients_;  // monomial coefficients, one column per basis function
  std::vector<std::vector<int>> face_nodes_;
};

/// Shared immutable instance; thread-safe.
const ReferenceElement& reference_element(CellType type, int degree);

/// Dimension of P^k (simplices) or Q^k (tensor cells).
int basis_size(CellType type, int degree);

}  // namespace hdg
