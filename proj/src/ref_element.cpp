#include "hdg/ref_element.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace hdg {

namespace {

std::vector<std::array<int, 3>> lattice(CellType type, int k) {
  std::vector<std::array<int, 3>> idx;
  const int dim = dimension(type);
  const bool simplex = is_simplex(type);
  const int kz = dim > 2 ? k : 0;
  const int ky = dim > 1 ? k : 0;
  for (int c = 0; c <= kz; ++c)
    for (int b = 0; b <= ky; ++b)
      for (int a = 0; a <= k; ++a) {
        if (simplex && a + b + c > k) continue;
        idx.push_back({a, b, c});
      }
  return idx;
}

bool on_face(CellType type, int face, const Eigen::RowVectorXd& x) {
  // A point lies on a face iff it lies on the affine hull of the face
  // vertices; all reference faces are planar.
  const auto& verts = reference_vertices(type);
  const auto& fv = reference_faces(type)[face];
  const int dim = dimension(type);
  const Eigen::RowVectorXd x0 = verts.row(fv[0]);
  if (dim == 1) return std::abs(x(0) - x0(0)) < 1e-12;
  if (dim == 2) {
    const Eigen::RowVectorXd t = verts.row(fv[1]) - x0;
    const Eigen::RowVectorXd d = x - x0;
    return std::abs(t(0) * d(1) - t(1) * d(0)) < 1e-12;
  }
  const Eigen::Vector3d t1 = (verts.row(fv[1]) - x0).transpose();
  const Eigen::Vector3d t2 = (verts.row(fv[2]) - x0).transpose();
  const Eigen::Vector3d d = (x - x0).transpose();
  return std::abs(t1.cross(t2).dot(d)) < 1e-12;
}

}  // namespace

int basis_size(CellType type, int degree) {
  const int k = degree;
  switch (type) {
    case CellType::Line: return k + 1;
    case CellType::Triangle: return (k + 1) * (k + 2) / 2;
    case CellType::Quadrilateral: return (k + 1) * (k + 1);
    case CellType::Tetrahedron: return (k + 1) * (k + 2) * (k + 3) / 6;
    case CellType::Hexahedron: return (k + 1) * (k + 1) * (k + 1);
  }
  return 0;
}

ReferenceElement::ReferenceElement(CellType type, int degree) : type_(type), degree_(degree) {
  if (degree < 1 || degree > kMaxBasisDegree)
    throw std::invalid_argument("ReferenceElement: unsupported degree " + std::to_string(degree) +
                                " for " + std::string(to_string(type)));
  const int dim = dimension(type);
  // Triangles and tetrahedra live on the unit corner, lines and tensor
  // cells on [-1, 1]^dim.
  const bool unit_coordinates = is_simplex(type) && type != CellType::Line;
  const auto idx = lattice(type, degree);
  const int n = static_cast<int>(idx.size());

  Eigen::MatrixXd pts(n, dim);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < dim; ++d)
      pts(i, d) = unit_coordinates ? double(idx[i][d]) / degree : -1.0 + 2.0 * idx[i][d] / degree;

  // Vertices first, in reference order; remaining nodes keep lattice order.
  const auto& verts = reference_vertices(type);
  std::vector<int> order;
  std::vector<bool> used(n, false);
  for (int v = 0; v < verts.rows(); ++v)
    for (int i = 0; i < n; ++i)
      if (!used[i] && (pts.row(i) - verts.row(v)).norm() < 1e-14) {
        order.push_back(i);
        used[i] = true;
        break;
      }
  if (static_cast<int>(order.size()) != verts.rows())
    throw std::logic_error("ReferenceElement: lattice misses a reference vertex");
  for (int i = 0; i < n; ++i)
    if (!used[i]) order.push_back(i);
  nodes_.resize(n, dim);
  for (int i = 0; i < n; ++i) nodes_.row(i) = pts.row(order[i]);

  // Exponents of the polynomial space coincide with the lattice indices.
  exponents_ = idx;

  const Eigen::MatrixXd vandermonde = monomials(nodes_);
  coefficients_ = vandermonde.fullPivLu().inverse();

  for (int f = 0; f < face_count(type); ++f) {
    std::vector<int> on;
    for (int i = 0; i < n; ++i)
      if (on_face(type, f, nodes_.row(i))) on.push_back(i);
    face_nodes_.push_back(std::move(on));
  }
}

Eigen::MatrixXd ReferenceElement::monomials(const Eigen::MatrixXd& points) const {
  const int npts = static_cast<int>(points.rows());
  const int dim = this->dim();
  const int nm = static_cast<int>(exponents_.size());
  Eigen::MatrixXd m(npts, nm);
  for (int q = 0; q < npts; ++q) {
    double pw[3][kMaxBasisDegree + 1];
    for (int d = 0; d < 3; ++d) {
      pw[d][0] = 1.0;
      const double x = d < dim ? points(q, d) : 0.0;
      for (int e = 1; e <= degree_; ++e) pw[d][e] = pw[d][e - 1] * x;
    }
    for (int j = 0; j < nm; ++j) {
      const auto& ex = exponents_[j];
      m(q, j) = pw[0][ex[0]] * pw[1][ex[1]] * pw[2][ex[2]];
    }
  }
  return m;
}

Eigen::MatrixXd ReferenceElement::monomial_derivatives(const Eigen::MatrixXd& points,
                                                       int dir) const {
  const int npts = static_cast<int>(points.rows());
  const int dim = this->dim();
  const int nm = static_cast<int>(exponents_.size());
  Eigen::MatrixXd m(npts, nm);
  for (int q = 0; q < npts; ++q) {
    double pw[3][kMaxBasisDegree + 1];
    for (int d = 0; d < 3; ++d) {
      pw[d][0] = 1.0;
      const double x = d < dim ? points(q, d) : 0.0;
      for (int e = 1; e <= degree_; ++e) pw[d][e] = pw[d][e - 1] * x;
    }
    for (int j = 0; j < nm; ++j) {
      const auto& ex = exponents_[j];
      if (ex[dir] == 0) {
        m(q, j) = 0.0;
        continue;
      }
      double v = ex[dir];
      for (int d = 0; d < 3; ++d) v *= pw[d][d == dir ? ex[d] - 1 : ex[d]];
      m(q, j) = v;
    }
  }
  return m;
}

Eigen::VectorXd ReferenceElement::values(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  const Eigen::MatrixXd pt = xi.transpose();
  return (monomials(pt) * coefficients_).transpose();
}

Eigen::MatrixXd ReferenceElement::gradients(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  const Eigen::MatrixXd pt = xi.transpose();
  Eigen::MatrixXd g(size(), dim());
  for (int d = 0; d < dim(); ++d) g.col(d) = (monomial_derivatives(pt, d) * coefficients_).transpose();
  return g;
}

Eigen::MatrixXd ReferenceElement::tabulate(const Eigen::MatrixXd& points) const {
  return monomials(points) * coefficients_;
}

std::vector<Eigen::MatrixXd> ReferenceElement::tabulate_gradients(
    const Eigen::MatrixXd& points) const {
  std::vector<Eigen::MatrixXd> g;
  g.reserve(dim());
  for (int d = 0; d < dim(); ++d) g.push_back(monomial_derivatives(points, d) * coefficients_);
  return g;
}

const ReferenceElement& reference_element(CellType type, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<CellType, int>, std::unique_ptr<ReferenceElement>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{type, degree}];
  if (!slot) slot = std::make_unique<ReferenceElement>(type, degree);
  return *slot;
}

}  // namespace hdg
