#include "hdg/postprocess.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "hdg/geometry.hpp"
#include "hdg/ref_element.hpp"

namespace hdg {

PostprocessSystem assemble_postprocess(const Mesh& mesh, int e, const SolutionFields& fields,
                                       const VoigtOps& ops, const VectorField& dirichlet) {
  const int k = fields.degree;
  const CellType type = mesh.element(e).type;
  const int order = postprocess_quadrature_order(k);
  const ElementQuadrature high = tabulate_element(mesh, e, reference_element(type, k + 1), k, order);
  const ElementQuadrature low = tabulate_element(mesh, e, reference_element(type, k), k, order);

  const int nsd = ops.nsd(), nrr = ops.nrr();
  const int n = high.cell.values.cols();
  const ElementFields& ef = fields.elements[e];

  PostprocessSystem sys;
  sys.stiffness = Eigen::MatrixXd::Zero(nsd * n, nsd * n);
  sys.load = Eigen::VectorXd::Zero(nsd * n);
  sys.constraints = Eigen::MatrixXd::Zero(nsd + nrr, nsd * n);
  sys.constraint_rhs = Eigen::VectorXd::Zero(nsd + nrr);

  const auto& cq = high.cell;
  Eigen::MatrixXd grads(n, nsd);
  for (int q = 0; q < cq.weights.size(); ++q) {
    const double w = cq.weights(q);
    for (int d = 0; d < nsd; ++d) grads.col(d) = cq.gradients[d].row(q).transpose();
    const Eigen::MatrixXd B = ops.strain_rows(grads);
    sys.stiffness.noalias() += w * B.transpose() * ops.D_sqrt() * B;
    const Eigen::VectorXd Lq = ef.L * low.cell.values.row(q).transpose();
    sys.load.noalias() -= w * B.transpose() * Lq;

    const Eigen::VectorXd uq = ef.u * low.cell.values.row(q).transpose();
    for (int c = 0; c < nsd; ++c) {
      sys.constraints.block(c, c * n, 1, n) += w * cq.values.row(q);
      sys.constraint_rhs(c) += w * uq(c);
    }
    sys.constraints.bottomRows(nrr) += w * ops.rotation_rows(grads);
  }

  const auto& faces = mesh.element_faces(e);
  for (const auto& fq : low.faces) {
    const int f = faces[fq.local_face];
    const bool given = fq.tag == BoundaryTag::Dirichlet;
    if (!given && fields.face_traces[f].size() == 0)
      throw std::invalid_argument("postprocess: missing trace on face " + std::to_string(f));
    for (int q = 0; q < fq.weights.size(); ++q) {
      const Eigen::VectorXd uhat = given ? dirichlet(fq.points.row(q).transpose())
                                         : Eigen::VectorXd(fields.face_traces[f] *
                                                           fq.trace_values.row(q).transpose());
      sys.constraint_rhs.tail(nrr) +=
          fq.weights(q) * ops.circulation_density(uhat, fq.normals.row(q).transpose());
    }
  }
  return sys;
}

Eigen::MatrixXd postprocess_element(const Mesh& mesh, int e, const SolutionFields& fields,
                                    const VoigtOps& ops, const VectorField& dirichlet) {
  const PostprocessSystem sys = assemble_postprocess(mesh, e, fields, ops, dirichlet);
  const int nu = sys.stiffness.rows(), nc = sys.constraints.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nu + nc, nu + nc);
  M.topLeftCorner(nu, nu) = sys.stiffness;
  M.topRightCorner(nu, nc) = sys.constraints.transpose();
  M.bottomLeftCorner(nc, nu) = sys.constraints;
  Eigen::VectorXd rhs(nu + nc);
  rhs << sys.load, sys.constraint_rhs;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  if (!(lu.rcond() > 1e2 * std::numeric_limits<double>::epsilon()))
    throw std::runtime_error("postprocess: singular bordered system on element " + std::to_string(e));
  const Eigen::VectorXd x = lu.solve(rhs);

  const int nsd = ops.nsd(), n = nu / nsd;
  Eigen::MatrixXd ustar(nsd, n);
  for (int c = 0; c < nsd; ++c) ustar.row(c) = x.segment(c * n, n).transpose();
  return ustar;
}

PostprocessedField postprocess_all(const Mesh& mesh, const SolutionFields& fields, const VoigtOps& ops,
                                   const VectorField& dirichlet, Execution policy) {
  PostprocessedField out;
  out.degree = fields.degree + 1;
  out.elements.resize(mesh.num_elements());
  for_each_element(policy, mesh.num_elements(), [&](int e) {
    out.elements[e] = postprocess_element(mesh, e, fields, ops, dirichlet);
  });
  return out;
}

}  // namespace hdg
