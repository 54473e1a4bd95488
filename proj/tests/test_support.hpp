#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hdg/geometry.hpp"
#include "hdg/global_solver.hpp"
#include "hdg/local_solver.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/mesh.hpp"
#include "hdg/ref_element.hpp"

namespace hdg::test {

/// Single reference-shaped triangle (0,0), (1,0), (0,1) with the given
/// Neumann predicate.
inline Mesh single_triangle(const PointPredicate& neumann) {
  Eigen::MatrixXd nodes(3, 2);
  nodes << 0, 0, 1, 0, 0, 1;
  return classify_boundary(Mesh(2, nodes, {Element{CellType::Triangle, {0, 1, 2}}}), neumann);
}

/// Single unit-corner tetrahedron with the given Neumann predicate.
inline Mesh single_tetrahedron(const PointPredicate& neumann) {
  Eigen::MatrixXd nodes(4, 3);
  nodes << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  return classify_boundary(Mesh(3, nodes, {Element{CellType::Tetrahedron, {0, 1, 2, 3}}}), neumann);
}

/// Physical coordinates of the degree-k nodes of element e (one row each).
inline Eigen::MatrixXd physical_nodes(const Mesh& mesh, int e, int degree) {
  const CellType type = mesh.element(e).type;
  const ReferenceElement& basis = reference_element(type, degree);
  const Eigen::MatrixXd vertices = mesh.element_vertices(e);
  Eigen::MatrixXd x(basis.size(), mesh.dim());
  for (int i = 0; i < basis.size(); ++i)
    x.row(i) = map_physical(type, vertices, basis.nodes().row(i).transpose()).x.transpose();
  return x;
}

/// Nodal interpolant (m x n) of a vector field on element e.
inline Eigen::MatrixXd interpolate(const Mesh& mesh, int e, int degree, const VectorField& f) {
  const Eigen::MatrixXd x = physical_nodes(mesh, e, degree);
  Eigen::MatrixXd out;
  for (int i = 0; i < x.rows(); ++i) {
    const Eigen::VectorXd v = f(x.row(i).transpose());
    if (i == 0) out.resize(v.size(), x.rows());
    out.col(i) = v;
  }
  return out;
}

/// L2 projection of a vector field onto the degree-k trace basis of face f,
/// component major (c * nf + a).
inline Eigen::VectorXd project_trace(const Mesh& mesh, int f, int degree, const VectorField& field) {
  const FaceQuadrature fq = tabulate_face(mesh, f, degree, 2 * degree + 6);
  const Eigen::MatrixXd& phi = fq.trace_values;
  const Eigen::MatrixXd mass = phi.transpose() * fq.weights.asDiagonal() * phi;
  const int nf = static_cast<int>(phi.cols());
  const int nsd = mesh.dim();
  Eigen::MatrixXd values(fq.weights.size(), nsd);
  for (int q = 0; q < values.rows(); ++q) values.row(q) = field(fq.points.row(q).transpose()).transpose();
  const Eigen::MatrixXd coeffs = mass.ldlt().solve(phi.transpose() * fq.weights.asDiagonal() * values);
  Eigen::VectorXd out(nsd * nf);
  for (int c = 0; c < nsd; ++c) out.segment(c * nf, nf) = coeffs.col(c);
  return out;
}

/// L2 projection (m x n) of a vector field onto the degree-k basis of element e.
inline Eigen::MatrixXd project_cell(const Mesh& mesh, int e, int degree, const VectorField& field) {
  const ReferenceElement& basis = reference_element(mesh.element(e).type, degree);
  const ElementQuadrature eq = tabulate_element(mesh, e, basis, 1, 2 * degree + 8);
  const CellQuadrature& cq = eq.cell;
  const Eigen::MatrixXd mass = cq.values.transpose() * cq.weights.asDiagonal() * cq.values;
  Eigen::MatrixXd values;
  for (int q = 0; q < cq.weights.size(); ++q) {
    const Eigen::VectorXd v = field(cq.points.row(q).transpose());
    if (q == 0) values.resize(cq.weights.size(), v.size());
    values.row(q) = v.transpose();
  }
  return mass.ldlt().solve(cq.values.transpose() * cq.weights.asDiagonal() * values).transpose();
}

/// Neumann load <phi_a, t_c> of face f (component major).
inline Eigen::VectorXd traction_load(const Mesh& mesh, int f, int degree, const TractionField& t) {
  const FaceQuadrature fq = tabulate_face(mesh, f, degree, 2 * degree + 6);
  const int nf = static_cast<int>(fq.trace_values.cols());
  const int nsd = mesh.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nsd * nf);
  for (int q = 0; q < fq.weights.size(); ++q) {
    const Eigen::VectorXd tq = t(fq.points.row(q).transpose(), fq.normals.row(q).transpose());
    for (int c = 0; c < nsd; ++c)
      out.segment(c * nf, nf) += fq.weights(q) * tq(c) * fq.trace_values.row(q).transpose();
  }
  return out;
}

/// Mean of a scalar over the boundary of element e.
inline double element_boundary_mean(const Mesh& mesh, int e, const ScalarField& f) {
  double integral = 0.0, measure = 0.0;
  for (int face : mesh.element_faces(e)) {
    const FaceQuadrature fq = tabulate_face(mesh, face, 1, 12);
    for (int q = 0; q < fq.weights.size(); ++q) integral += fq.weights(q) * f(fq.points.row(q).transpose());
    measure += fq.weights.sum();
  }
  return integral / measure;
}

/// Relative gap between the condensed pipeline (solve_stokes) and a dense
/// solve of the uncondensed single-element system in (x, uhat, rho):
///   [  K   -C  -e ] [x   ]   [F]
///   [ -C^T  M   0 ] [uhat] = [g]   (g: Neumann traction load)
///   [ -e^T  0   0 ] [rho ]   [0]
/// The mesh must hold one element with at least one Neumann face.
struct MonolithicComparison {
  double gap = 0.0;                // max |pipeline - monolithic| / max |monolithic|
  double symmetry = 0.0;           // max |A - A^T| / max |A|
};

inline MonolithicComparison compare_monolithic(const Mesh& mesh, const StokesData& data, int k, double tau) {
  const VoigtOps ops(mesh.dim(), data.viscosity);
  const LocalSystem sys = assemble_local(mesh, 0, k, ops, tau, data);
  const int nx = sys.layout.size(), nt = sys.trace_size(), N = nx + nt + 1;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(N);
  A.topLeftCorner(nx, nx) = sys.matrix;
  A.block(0, nx, nx, nt) = -sys.trace_coupling;
  A.block(nx, 0, nt, nx) = -sys.trace_coupling.transpose();
  A.block(nx, nx, nt, nt) = sys.trace_mass;
  A(sys.layout.zeta(), N - 1) = -1.0;
  A(N - 1, sys.layout.zeta()) = -1.0;
  b.head(nx) = sys.load;
  for (const TraceBlock& tb : sys.traces)
    b.segment(nx + tb.offset, tb.size) = traction_load(mesh, tb.face, k, data.traction);
  const Eigen::VectorXd z = A.fullPivLu().solve(b);

  SolverOptions opt;
  opt.degree = k;
  opt.tau = tau;
  opt.execution = Execution::Serial;
  const SolutionFields fields = solve_stokes(mesh, data, opt);
  Eigen::VectorXd y(N);
  y.head(nx) = pack(sys.layout, fields.elements[0]);
  for (const TraceBlock& tb : sys.traces) {
    const Eigen::MatrixXd& t = fields.face_traces[tb.face];
    const int nf = static_cast<int>(t.cols());
    for (int c = 0; c < t.rows(); ++c) y.segment(nx + tb.offset + c * nf, nf) = t.row(c).transpose();
  }
  y(N - 1) = fields.rho(0);

  MonolithicComparison out;
  out.gap = (y - z).cwiseAbs().maxCoeff() / z.cwiseAbs().maxCoeff();
  out.symmetry = (A - A.transpose()).cwiseAbs().maxCoeff() / A.cwiseAbs().maxCoeff();
  return out;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace hdg::test
