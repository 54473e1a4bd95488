#include "hdg/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "hdg/geometry.hpp"
#include "hdg/quadrature.hpp"
#include "hdg/ref_element.hpp"

namespace hdg {

double symmetry_defect(const Eigen::SparseMatrix<double>& A) {
  const Eigen::SparseMatrix<double> At = A.transpose();
  const Eigen::SparseMatrix<double> diff = A - At;
  double dmax = 0.0, amax = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      dmax = std::max(dmax, std::abs(it.value()));
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      amax = std::max(amax, std::abs(it.value()));
  return amax > 0.0 ? dmax / amax : dmax;
}

namespace {

Eigen::VectorXd trace_at(const SolutionFields& fields, const FaceQuadrature& fq, int q,
                         const VectorField& dirichlet) {
  if (fq.tag == BoundaryTag::Dirichlet) return dirichlet(fq.points.row(q).transpose());
  return fields.face_traces[fq.face] * fq.trace_values.row(q).transpose();
}

}  // namespace

Eigen::VectorXd compatibility_residuals(const Mesh& mesh, const SolutionFields& fields,
                                        const VectorField& dirichlet) {
  const int k = fields.degree;
  Eigen::VectorXd res(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementQuadrature eq = tabulate_element(mesh, e, reference_element(mesh.element(e).type, k), k,
                                                  default_quadrature_order(k));
    double s = 0.0;
    for (const auto& fq : eq.faces)
      for (int q = 0; q < fq.weights.size(); ++q)
        s += fq.weights(q) * trace_at(fields, fq, q, dirichlet).dot(fq.normals.row(q).transpose());
    res(e) = s;
  }
  return res;
}

Eigen::VectorXd mean_pressure_residuals(const Mesh& mesh, const SolutionFields& fields) {
  const int k = fields.degree;
  Eigen::VectorXd res(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementQuadrature eq = tabulate_element(mesh, e, reference_element(mesh.element(e).type, k), k,
                                                  default_quadrature_order(k));
    double s = 0.0;
    for (const auto& fq : eq.faces) s += fq.weights.dot(fq.cell_values * fields.elements[e].p);
    res(e) = std::abs(s / eq.boundary_measure - fields.rho(e));
  }
  return res;
}

double boundary_mean_pressure(const Mesh& mesh, const SolutionFields& fields) {
  const int k = fields.degree;
  double integral = 0.0, measure = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementQuadrature eq = tabulate_element(mesh, e, reference_element(mesh.element(e).type, k), k,
                                                  default_quadrature_order(k));
    for (const auto& fq : eq.faces) {
      if (!mesh.face(fq.face).is_boundary()) continue;
      integral += fq.weights.dot(fq.cell_values * fields.elements[e].p);
      measure += fq.measure;
    }
  }
  return integral / measure;
}

double flux_residual(const Mesh& mesh, const SolutionFields& fields, const VoigtOps& ops,
                     const StokesData& data, double tau) {
  const int k = fields.degree, nsd = ops.nsd();
  const int order = default_quadrature_order(k);
  std::vector<Eigen::MatrixXd> acc(mesh.num_faces());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementQuadrature eq =
        tabulate_element(mesh, e, reference_element(mesh.element(e).type, k), k, order);
    const ElementFields& ef = fields.elements[e];
    for (const auto& fq : eq.faces) {
      if (fq.tag == BoundaryTag::Dirichlet) continue;
      Eigen::MatrixXd& a = acc[fq.face];
      if (a.size() == 0) a = Eigen::MatrixXd::Zero(nsd, fq.trace_values.cols());
      for (int q = 0; q < fq.weights.size(); ++q) {
        const Eigen::VectorXd nrm = fq.normals.row(q).transpose();
        const Eigen::VectorXd N = fq.cell_values.row(q).transpose();
        const Eigen::VectorXd flux = ops.normal_matrix(nrm).transpose() * ops.D_sqrt() * (ef.L * N) +
                                     nrm * ef.p.dot(N) +
                                     tau * (ef.u * N - trace_at(fields, fq, q, data.dirichlet));
        a += fq.weights(q) * flux * fq.trace_values.row(q);
      }
    }
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).tag != BoundaryTag::Neumann) continue;
    const FaceQuadrature fq = tabulate_face(mesh, f, k, order);
    for (int q = 0; q < fq.weights.size(); ++q)
      acc[f] += fq.weights(q) *
                data.traction(fq.points.row(q).transpose(), fq.normals.row(q).transpose()) *
                fq.trace_values.row(q);
  }
  double worst = 0.0;
  for (const auto& a : acc)
    if (a.size() > 0) worst = std::max(worst, a.cwiseAbs().maxCoeff());
  return worst;
}

ConstraintResiduals postprocess_constraint_residuals(const Mesh& mesh, const SolutionFields& fields,
                                                     const PostprocessedField& ustar, const VoigtOps& ops,
                                                     const VectorField& dirichlet) {
  const int k = fields.degree, nsd = ops.nsd();
  const int order = postprocess_quadrature_order(k);
  ConstraintResiduals r;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const CellType type = mesh.element(e).type;
    const ElementQuadrature high = tabulate_element(mesh, e, reference_element(type, k + 1), k, order);
    const ElementQuadrature low = tabulate_element(mesh, e, reference_element(type, k), k, order);
    const Eigen::MatrixXd& us = ustar.elements[e];
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(nsd);
    Eigen::VectorXd curl = Eigen::VectorXd::Zero(ops.nrr());
    for (int q = 0; q < high.cell.weights.size(); ++q) {
      const double w = high.cell.weights(q);
      mean += w * (us * high.cell.values.row(q).transpose() -
                   fields.elements[e].u * low.cell.values.row(q).transpose());
      Eigen::MatrixXd grad(nsd, nsd);
      for (int d = 0; d < nsd; ++d) grad.col(d) = us * high.cell.gradients[d].row(q).transpose();
      curl += w * ops.curl_from_gradient(grad);
    }
    for (const auto& fq : low.faces)
      for (int q = 0; q < fq.weights.size(); ++q)
        curl -= fq.weights(q) *
                ops.circulation_density(trace_at(fields, fq, q, dirichlet), fq.normals.row(q).transpose());
    r.mean = std::max(r.mean, mean.cwiseAbs().maxCoeff());
    r.circulation = std::max(r.circulation, curl.cwiseAbs().maxCoeff());
  }
  return r;
}

}  // namespace hdg
