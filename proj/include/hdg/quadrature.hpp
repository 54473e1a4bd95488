#pragma once

#include <Eigen/Dense>

#include "hdg/cell.hpp"

namespace hdg {

/// Highest polynomial order for which rules are generated.
inline constexpr int kMaxQuadratureOrder = 40;

struct QuadratureRule {
  CellType cell;
  int order;               // exact for polynomials up to this total (or tensor) degree
  Eigen::MatrixXd points;  // npts x dim, reference coordinates
  Eigen::VectorXd weights; // all positive

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre on [-1,1] with `npoints` nodes.
QuadratureRule gauss_legendre(int npoints);

/// Tensor Gauss rules on lines/quads/hexes and collapsed (Duffy) Gauss rules
/// on simplices. Throws std::invalid_argument for order < 1 or order above
/// kMaxQuadratureOrder.
QuadratureRule build_quadrature(CellType cell, int order);

/// Cached, thread-safe access to build_quadrature.
const QuadratureRule& quadrature_rule(CellType cell, int order);

/// Default integration order for a degree-k discretization.
inline int default_quadrature_order(int degree) { return 2 * degree + 2; }

}  // namespace hdg
