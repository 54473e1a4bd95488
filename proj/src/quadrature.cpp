#include "hdg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hdg {

QuadratureRule gauss_legendre(int npoints) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  QuadratureRule rule{CellType::Line, 2 * npoints - 1, Eigen::MatrixXd(npoints, 1),
                      Eigen::VectorXd(npoints)};
  const int n = npoints;
  // Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, p0};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pnm1] = legendre(x);
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pnm1] = legendre(x);
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points(i, 0) = -x;
    rule.points(n - 1 - i, 0) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  return rule;
}

namespace {

QuadratureRule tensor_rule(CellType cell, int order, int dim) {
  const QuadratureRule line = gauss_legendre((order + 2) / 2);
  const int n = line.size();
  int total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  QuadratureRule rule{cell, order, Eigen::MatrixXd(total, dim), Eigen::VectorXd(total)};
  for (int q = 0; q < total; ++q) {
    int rem = q;
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      const int i = rem % n;
      rem /= n;
      rule.points(q, d) = line.points(i, 0);
      w *= line.weights(i);
    }
    rule.weights(q) = w;
  }
  return rule;
}

// Collapsed-coordinate rules. The Duffy Jacobian raises the degree in the
// collapsed directions, hence the extra points.
QuadratureRule triangle_rule(int order) {
  const QuadratureRule line = gauss_legendre((order + 3) / 2);
  const int n = line.size();
  QuadratureRule rule{CellType::Triangle, order, Eigen::MatrixXd(n * n, 2), Eigen::VectorXd(n * n)};
  int q = 0;
  for (int i = 0; i < n; ++i) {
    const double a = 0.5 * (line.points(i, 0) + 1.0);
    for (int j = 0; j < n; ++j, ++q) {
      const double b = 0.5 * (line.points(j, 0) + 1.0);
      rule.points(q, 0) = a * (1.0 - b);
      rule.points(q, 1) = b;
      rule.weights(q) = 0.25 * line.weights(i) * line.weights(j) * (1.0 - b);
    }
  }
  return rule;
}

QuadratureRule tetrahedron_rule(int order) {
  const QuadratureRule line = gauss_legendre((order + 4) / 2);
  const int n = line.size();
  QuadratureRule rule{CellType::Tetrahedron, order, Eigen::MatrixXd(n * n * n, 3),
                      Eigen::VectorXd(n * n * n)};
  int q = 0;
  for (int i = 0; i < n; ++i) {
    const double a = 0.5 * (line.points(i, 0) + 1.0);
    for (int j = 0; j < n; ++j) {
      const double b = 0.5 * (line.points(j, 0) + 1.0);
      for (int l = 0; l < n; ++l, ++q) {
        const double c = 0.5 * (line.points(l, 0) + 1.0);
        rule.points(q, 0) = a * (1.0 - b) * (1.0 - c);
        rule.points(q, 1) = b * (1.0 - c);
        rule.points(q, 2) = c;
        rule.weights(q) = 0.125 * line.weights(i) * line.weights(j) * line.weights(l) *
                          (1.0 - b) * (1.0 - c) * (1.0 - c);
      }
    }
  }
  return rule;
}

}  // namespace

QuadratureRule build_quadrature(CellType cell, int order) {
  if (order < 1) throw std::invalid_argument("build_quadrature: order must be >= 1");
  if (order > kMaxQuadratureOrder)
    throw std::invalid_argument("build_quadrature: order " + std::to_string(order) +
                                " exceeds the maximum " + std::to_string(kMaxQuadratureOrder));
  switch (cell) {
    case CellType::Line: return tensor_rule(cell, order, 1);
    case CellType::Quadrilateral: return tensor_rule(cell, order, 2);
    case CellType::Hexahedron: return tensor_rule(cell, order, 3);
    case CellType::Triangle: return triangle_rule(order);
    case CellType::Tetrahedron: return tetrahedron_rule(order);
  }
  throw std::invalid_argument("build_quadrature: unknown cell type");
}

const QuadratureRule& quadrature_rule(CellType cell, int order) {
  static std::mutex mutex;
  static std::map<std::pair<CellType, int>, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({cell, order});
  if (it == cache.end()) it = cache.emplace(std::pair{cell, order}, build_quadrature(cell, order)).first;
  return it->second;
}

}  // namespace hdg
