#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "hdg/geometry.hpp"
#include "hdg/mesh.hpp"
#include "hdg/ref_element.hpp"

using namespace hdg;

namespace {

const CellType kCells[] = {CellType::Triangle, CellType::Quadrilateral, CellType::Tetrahedron,
                           CellType::Hexahedron};

// Random point inside the reference cell.
Eigen::VectorXd random_point(CellType cell, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int dim = dimension(cell);
  Eigen::VectorXd x(dim);
  if (is_simplex(cell)) {
    do {
      for (int d = 0; d < dim; ++d) x(d) = u(rng);
    } while (x.sum() > 1.0);
  } else {
    for (int d = 0; d < dim; ++d) x(d) = 2.0 * u(rng) - 1.0;
  }
  return x;
}

// Random polynomial in P^k (simplices) or Q^k (tensor cells), evaluated
// directly from its monomial expansion.
struct RandomPolynomial {
  std::vector<std::array<int, 3>> exps;
  std::vector<double> coef;
  RandomPolynomial(CellType cell, int k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int dim = dimension(cell);
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= (dim > 1 ? k : 0); ++b)
        for (int c = 0; c <= (dim > 2 ? k : 0); ++c) {
          if (is_simplex(cell) && a + b + c > k) continue;
          exps.push_back({a, b, c});
          coef.push_back(u(rng));
        }
  }
  double operator()(const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      double v = coef[i];
      for (int d = 0; d < x.size(); ++d) v *= std::pow(x(d), exps[i][d]);
      s += v;
    }
    return s;
  }
};

}  // namespace

TEST_SUITE("ref_element") {
  TEST_CASE("basis sizes match the polynomial spaces") {
    CHECK(reference_element(CellType::Triangle, 1).size() == 3);
    CHECK(reference_element(CellType::Quadrilateral, 2).size() == 9);
    CHECK(reference_element(CellType::Tetrahedron, 3).size() == 20);
    CHECK(reference_element(CellType::Hexahedron, 2).size() == 27);
    for (CellType c : kCells)
      for (int k = 1; k <= 4; ++k) CHECK(reference_element(c, k).size() == basis_size(c, k));
  }

  TEST_CASE("Kronecker property, partition of unity and gradient consistency") {
    std::mt19937_64 rng(3);
    for (CellType c : kCells)
      for (int k = 1; k <= 4; ++k) {
        const ReferenceElement& b = reference_element(c, k);
        const Eigen::MatrixXd V = b.tabulate(b.nodes());
        CHECK((V - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() < 1e-12);
        for (int t = 0; t < 5; ++t) {
          const Eigen::VectorXd x = random_point(c, rng);
          CHECK(std::abs(b.values(x).sum() - 1.0) < 1e-12);
          CHECK(b.gradients(x).colwise().sum().cwiseAbs().maxCoeff() < 1e-11);
          // Central differences of a polynomial of degree <= 4 with step 1e-4.
          for (int d = 0; d < b.dim(); ++d) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(b.dim());
            e(d) = 1e-4;
            const Eigen::VectorXd fd = (b.values(x + e) - b.values(x - e)) / 2e-4;
            CHECK((fd - b.gradients(x).col(d)).cwiseAbs().maxCoeff() < 1e-6);
          }
        }
      }
  }

  TEST_CASE("interpolation reproduces polynomials of degree k") {
    std::mt19937_64 rng(5);
    for (CellType c : kCells)
      for (int k = 1; k <= 4; ++k) {
        const ReferenceElement& b = reference_element(c, k);
        const RandomPolynomial f(c, k, rng);
        Eigen::VectorXd coeff(b.size());
        for (int i = 0; i < b.size(); ++i) coeff(i) = f(b.nodes().row(i).transpose());
        for (int t = 0; t < 10; ++t) {
          const Eigen::VectorXd x = random_point(c, rng);
          CHECK(std::abs(b.values(x).dot(coeff) - f(x)) < 1e-10);
        }
      }
  }

  TEST_CASE("vertices come first and face node lists lie on their faces") {
    for (CellType c : kCells) {
      const ReferenceElement& b = reference_element(c, 3);
      const Eigen::MatrixXd& v = reference_vertices(c);
      CHECK((b.nodes().topRows(v.rows()) - v).cwiseAbs().maxCoeff() == 0.0);
      CHECK(static_cast<int>(b.face_nodes().size()) == face_count(c));
      const CellType ft = face_type(c);
      for (const auto& fn : b.face_nodes()) CHECK(static_cast<int>(fn.size()) == basis_size(ft, 3));
    }
  }

  TEST_CASE("unsupported degrees are rejected") {
    CHECK_THROWS_AS(ReferenceElement(CellType::Triangle, 0), std::invalid_argument);
    CHECK_THROWS_AS(ReferenceElement(CellType::Hexahedron, kMaxBasisDegree + 1), std::invalid_argument);
  }

  TEST_CASE("physical map examples") {
    const Eigen::MatrixXd tri = reference_vertices(CellType::Triangle);
    const PhysicalMap m = map_physical(CellType::Triangle, tri, Eigen::Vector2d(0.2, 0.3));
    CHECK((m.jacobian - Eigen::Matrix2d::Identity()).norm() < 1e-15);
    CHECK(m.det == doctest::Approx(1.0));

    const double h = 0.3;
    Eigen::MatrixXd quad(4, 2);
    quad << 0, 0, h, 0, h, h, 0, h;
    CHECK(map_physical(CellType::Quadrilateral, quad, Eigen::Vector2d(0.1, -0.4)).det ==
          doctest::Approx(h * h / 4).epsilon(1e-14));

    Eigen::MatrixXd inverted = tri;
    inverted.row(1).swap(inverted.row(2));
    CHECK_THROWS_AS(map_physical(CellType::Triangle, inverted, Eigen::Vector2d(0.2, 0.2)), std::domain_error);
  }

  TEST_CASE("physical gradients of a linear field under a random affine map") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (CellType c : kCells) {
      const int dim = dimension(c);
      Eigen::MatrixXd A = Eigen::MatrixXd::Identity(dim, dim);
      for (int i = 0; i < A.size(); ++i) A.data()[i] += u(rng);
      const Eigen::MatrixXd verts = reference_vertices(c) * A.transpose();
      std::vector<int> ids(verts.rows());
      for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
      const Mesh mesh(dim, verts, {Element{c, ids}});
      const ReferenceElement& b = reference_element(c, 2);
      const ElementQuadrature eq = tabulate_element(mesh, 0, b, 2, 4);
      // f(x) = g . x + 0.7 has constant gradient g.
      const Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(dim, 0.5, -1.5);
      Eigen::VectorXd coeff(b.size());
      for (int i = 0; i < b.size(); ++i) {
        const Eigen::VectorXd x = map_physical(c, verts, b.nodes().row(i).transpose()).x;
        coeff(i) = g.dot(x) + 0.7;
      }
      for (int d = 0; d < dim; ++d)
        CHECK(((eq.cell.gradients[d] * coeff).array() - g(d)).abs().maxCoeff() < 1e-12);
      CHECK(eq.cell.weights.sum() == doctest::Approx(reference_measure(c) * A.determinant()).epsilon(1e-12));
    }
  }
}
