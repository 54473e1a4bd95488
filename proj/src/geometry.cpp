#include "hdg/geometry.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "hdg/quadrature.hpp"

namespace hdg {

namespace {

struct ReferenceTabulation {
  Eigen::MatrixXd values;
  std::vector<Eigen::MatrixXd> gradients;
};

// Basis values/gradients at rule points, shared by every element.
const ReferenceTabulation& reference_tabulation(const ReferenceElement& basis,
                                                const QuadratureRule& rule) {
  static std::mutex mutex;
  static std::map<std::tuple<CellType, int, int>, ReferenceTabulation> cache;
  std::lock_guard lock(mutex);
  const auto key = std::tuple{basis.cell_type(), basis.degree(), rule.order};
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache
             .emplace(key, ReferenceTabulation{basis.tabulate(rule.points),
                                               basis.tabulate_gradients(rule.points)})
             .first;
  return it->second;
}

Eigen::MatrixXd geometric_jacobian(const ReferenceElement& geo, const Eigen::MatrixXd& vertices,
                                   const Eigen::Ref<const Eigen::VectorXd>& xi) {
  // J = X^T * dN/dxi
  return vertices.transpose() * geo.gradients(xi);
}

// Face parametrization: vertex shape functions of the face cell, applied to
// both physical and element-reference vertex coordinates.
struct FaceMap {
  Eigen::MatrixXd shape;                    // nq x nvf
  std::vector<Eigen::MatrixXd> shape_grad;  // per face direction, nq x nvf
};

const FaceMap& face_map(CellType face, const QuadratureRule& rule) {
  static std::mutex mutex;
  static std::map<std::pair<CellType, int>, FaceMap> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({face, rule.order});
  if (it == cache.end()) {
    const auto& geo = reference_element(face, 1);
    it = cache.emplace(std::pair{face, rule.order},
                       FaceMap{geo.tabulate(rule.points), geo.tabulate_gradients(rule.points)})
             .first;
  }
  return it->second;
}

void fill_face_geometry(const Mesh& mesh, const Face& face, const Eigen::VectorXd& interior,
                        const QuadratureRule& rule, FaceQuadrature& fq) {
  const int dim = mesh.dim();
  const FaceMap& fm = face_map(face.type, rule);
  const int nq = rule.size();
  Eigen::MatrixXd xv(face.param.size(), dim);
  for (std::size_t i = 0; i < face.param.size(); ++i) xv.row(i) = mesh.nodes().row(face.param[i]);

  fq.points = fm.shape * xv;
  fq.normals.resize(nq, dim);
  fq.weights.resize(nq);
  fq.measure = 0.0;
  for (int q = 0; q < nq; ++q) {
    Eigen::VectorXd normal(dim);
    double jac = 0.0;
    if (dim == 2) {
      const Eigen::RowVectorXd t = fm.shape_grad[0].row(q) * xv;
      normal << t(1), -t(0);
      jac = t.norm();
    } else {
      const Eigen::Vector3d t1 = (fm.shape_grad[0].row(q) * xv).transpose();
      const Eigen::Vector3d t2 = (fm.shape_grad[1].row(q) * xv).transpose();
      normal = t1.cross(t2);
      jac = normal.norm();
    }
    if (jac <= 0.0) throw std::domain_error("degenerate face");
    normal /= jac;
    if (normal.dot(fq.points.row(q).transpose() - interior) < 0.0) normal = -normal;
    fq.normals.row(q) = normal.transpose();
    fq.weights(q) = rule.weights(q) * jac;
    fq.measure += fq.weights(q);
  }
}

}  // namespace

PhysicalMap map_physical(CellType type, const Eigen::MatrixXd& vertices,
                         const Eigen::Ref<const Eigen::VectorXd>& xi) {
  const auto& geo = reference_element(type, 1);
  PhysicalMap m;
  m.x = vertices.transpose() * geo.values(xi);
  m.jacobian = geometric_jacobian(geo, vertices, xi);
  m.det = m.jacobian.determinant();
  if (!(m.det > 0.0)) throw std::domain_error("map_physical: non-positive Jacobian determinant");
  m.inverse_transpose = m.jacobian.inverse().transpose();
  return m;
}

ElementQuadrature tabulate_element(const Mesh& mesh, int element, const ReferenceElement& basis,
                                   int trace_degree, int order) {
  const Element& el = mesh.element(element);
  const int dim = mesh.dim();
  const Eigen::MatrixXd xv = mesh.element_vertices(element);
  const Eigen::VectorXd centroid = xv.colwise().mean().transpose();

  ElementQuadrature eq;
  eq.element = element;

  const QuadratureRule& rule = quadrature_rule(el.type, order);
  const ReferenceTabulation& tab = reference_tabulation(basis, rule);
  const auto& geo = reference_element(el.type, 1);
  const int nq = rule.size();
  const Eigen::MatrixXd geo_values = geo.tabulate(rule.points);
  const auto geo_grads = geo.tabulate_gradients(rule.points);

  CellQuadrature& cq = eq.cell;
  cq.points = geo_values * xv;
  cq.weights.resize(nq);
  cq.values = tab.values;
  cq.gradients.assign(dim, Eigen::MatrixXd(nq, basis.size()));
  Eigen::MatrixXd dgeo(geo.size(), dim);
  Eigen::MatrixXd ref_grad(basis.size(), dim);
  for (int q = 0; q < nq; ++q) {
    for (int d = 0; d < dim; ++d) dgeo.col(d) = geo_grads[d].row(q).transpose();
    const Eigen::MatrixXd jac = xv.transpose() * dgeo;
    const double det = jac.determinant();
    if (!(det > 0.0))
      throw std::domain_error("tabulate_element: inverted element " + std::to_string(element));
    const Eigen::MatrixXd jinv = jac.inverse();
    for (int d = 0; d < dim; ++d) ref_grad.col(d) = tab.gradients[d].row(q).transpose();
    const Eigen::MatrixXd phys = ref_grad * jinv;  // rows: (grad_x N_i)^T
    for (int d = 0; d < dim; ++d) cq.gradients[d].row(q) = phys.col(d).transpose();
    cq.weights(q) = rule.weights(q) * det;
  }
  cq.measure = cq.weights.sum();

  const CellType ftype = face_type(el.type);
  const QuadratureRule& frule = quadrature_rule(ftype, order);
  const FaceMap& fm = face_map(ftype, frule);
  const ReferenceElement& trace = reference_element(ftype, trace_degree);
  const ReferenceTabulation& ttab = reference_tabulation(trace, frule);
  const auto& ref_verts = reference_vertices(el.type);

  const auto& efaces = mesh.element_faces(element);
  eq.faces.resize(efaces.size());
  for (std::size_t lf = 0; lf < efaces.size(); ++lf) {
    const Face& face = mesh.face(efaces[lf]);
    const FaceSide& side =
        (face.left.element == element && face.left.local_face == static_cast<int>(lf))
            ? face.left
            : *face.right;
    FaceQuadrature& fq = eq.faces[lf];
    fq.face = efaces[lf];
    fq.local_face = static_cast<int>(lf);
    fq.tag = face.tag;
    fill_face_geometry(mesh, face, centroid, frule, fq);

    Eigen::MatrixXd xi_verts(side.local_vertices.size(), dim);
    for (std::size_t i = 0; i < side.local_vertices.size(); ++i)
      xi_verts.row(i) = ref_verts.row(side.local_vertices[i]);
    fq.cell_values = basis.tabulate(fm.shape * xi_verts);
    fq.trace_values = ttab.values;
    eq.boundary_measure += fq.measure;
  }
  return eq;
}

FaceQuadrature tabulate_face(const Mesh& mesh, int face_id, int trace_degree, int order) {
  const Face& face = mesh.face(face_id);
  const QuadratureRule& frule = quadrature_rule(face.type, order);
  const Eigen::MatrixXd xv = mesh.element_vertices(face.left.element);
  FaceQuadrature fq;
  fq.face = face_id;
  fq.local_face = face.left.local_face;
  fq.tag = face.tag;
  fill_face_geometry(mesh, face, xv.colwise().mean().transpose(), frule, fq);
  fq.trace_values = reference_tabulation(reference_element(face.type, trace_degree), frule).values;
  return fq;
}

}  // namespace hdg
