#include "hdg/local_solver.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "hdg/quadrature.hpp"

namespace hdg {

LocalSystem assemble_local(const Mesh& mesh, int element, int degree, const VoigtOps& ops,
                           double tau, const StokesData& data) {
  if (!(tau > 0.0)) throw std::invalid_argument("assemble_local: tau must be positive");
  const ReferenceElement& basis = reference_element(mesh.element(element).type, degree);
  const ElementQuadrature eq =
      tabulate_element(mesh, element, basis, degree, default_quadrature_order(degree));

  const int nsd = ops.nsd(), msd = ops.msd(), n = basis.size();
  const LocalLayout lay{nsd, msd, n};
  const int nf = eq.faces.front().trace_values.cols();
  const int block = nsd * nf;

  LocalSystem sys;
  sys.element = element;
  sys.layout = lay;
  sys.tau = tau;
  sys.face_basis_size = nf;
  int trace_cols = 0;
  for (const auto& fq : eq.faces)
    if (fq.tag != BoundaryTag::Dirichlet) {
      sys.traces.push_back({fq.face, trace_cols, block});
      trace_cols += block;
    }

  const int size = lay.size();
  sys.matrix = Eigen::MatrixXd::Zero(size, size);
  sys.trace_coupling = Eigen::MatrixXd::Zero(size, trace_cols);
  sys.trace_mass = Eigen::MatrixXd::Zero(trace_cols, trace_cols);
  sys.load = Eigen::VectorXd::Zero(size);
  sys.domain_boundary_moment = Eigen::VectorXd::Zero(n);
  auto& K = sys.matrix;
  auto& C = sys.trace_coupling;
  auto& F = sys.load;
  const Eigen::VectorXd& dsq = ops.d_sqrt();

  // Volume terms.
  const auto& cq = eq.cell;
  const Eigen::MatrixXd wv = cq.weights.asDiagonal() * cq.values;
  const Eigen::MatrixXd mass = cq.values.transpose() * wv;
  std::vector<Eigen::MatrixXd> grad(nsd);  // grad[d](i, j) = \int N_i d_d N_j
  for (int d = 0; d < nsd; ++d) grad[d] = wv.transpose() * cq.gradients[d];

  for (int r = 0; r < msd; ++r) {
    K.block(lay.L(r), lay.L(r), n, n) = -mass;
    for (int c = 0; c < nsd; ++c) {
      const int d = ops.strain_direction(r, c);
      if (d < 0) continue;
      K.block(lay.L(r), lay.u(c), n, n) = dsq(r) * grad[d].transpose();
      K.block(lay.u(c), lay.L(r), n, n) = dsq(r) * grad[d];
    }
  }
  for (int c = 0; c < nsd; ++c) {
    K.block(lay.u(c), lay.p(), n, n) = grad[c];
    K.block(lay.p(), lay.u(c), n, n) = grad[c].transpose();
  }

  // Source.
  for (int q = 0; q < cq.weights.size(); ++q) {
    const Eigen::VectorXd s = data.source(cq.points.row(q).transpose());
    for (int c = 0; c < nsd; ++c) F.segment(lay.u(c), n) += s(c) * wv.row(q).transpose();
  }

  // Face terms.
  Eigen::VectorXd boundary_integral = Eigen::VectorXd::Zero(n);
  int trace_index = 0;
  for (const auto& fq : eq.faces) {
    const Eigen::MatrixXd wn = fq.weights.asDiagonal() * fq.cell_values;
    const Eigen::MatrixXd face_mass = fq.cell_values.transpose() * wn;
    const Eigen::VectorXd moment = wn.colwise().sum().transpose();
    boundary_integral += moment;
    if (mesh.face(fq.face).is_boundary()) {
      sys.domain_boundary_moment += moment;
      sys.domain_boundary_measure += fq.measure;
    }
    for (int c = 0; c < nsd; ++c) K.block(lay.u(c), lay.u(c), n, n) += tau * face_mass;

    if (fq.tag == BoundaryTag::Dirichlet) {
      for (int q = 0; q < fq.weights.size(); ++q) {
        const Eigen::VectorXd ud = data.dirichlet(fq.points.row(q).transpose());
        const Eigen::VectorXd nrm = fq.normals.row(q).transpose();
        const Eigen::VectorXd wq = wn.row(q).transpose();
        for (int r = 0; r < msd; ++r)
          for (int c = 0; c < nsd; ++c) {
            const int d = ops.strain_direction(r, c);
            if (d >= 0) F.segment(lay.L(r), n) += dsq(r) * nrm(d) * ud(c) * wq;
          }
        for (int c = 0; c < nsd; ++c) {
          F.segment(lay.u(c), n) += tau * ud(c) * wq;
          F.segment(lay.p(), n) += nrm(c) * ud(c) * wq;
        }
      }
      continue;
    }

    const TraceBlock& tb = sys.traces[trace_index++];
    const Eigen::MatrixXd& phi = fq.trace_values;
    const Eigen::MatrixXd cell_trace = wn.transpose() * phi;  // \int N_i phi_a
    std::vector<Eigen::MatrixXd> normal_trace(nsd);           // \int N_i n_d phi_a
    for (int d = 0; d < nsd; ++d)
      normal_trace[d] = wn.transpose() * (fq.normals.col(d).asDiagonal() * phi);
    const Eigen::MatrixXd trace_trace = phi.transpose() * (fq.weights.asDiagonal() * phi);

    for (int c = 0; c < nsd; ++c) {
      const int col = tb.offset + c * nf;
      for (int r = 0; r < msd; ++r) {
        const int d = ops.strain_direction(r, c);
        if (d >= 0) C.block(lay.L(r), col, n, nf) = dsq(r) * normal_trace[d];
      }
      C.block(lay.u(c), col, n, nf) = tau * cell_trace;
      C.block(lay.p(), col, n, nf) = normal_trace[c];
      sys.trace_mass.block(col, col, nf, nf) = tau * trace_trace;
    }
  }

  // Boundary-mean constraint <p,1>/|dOmega_e| = rho through the multiplier.
  const Eigen::VectorXd mean_row = boundary_integral / eq.boundary_measure;
  K.block(lay.p(), lay.zeta(), n, 1) = mean_row;
  K.block(lay.zeta(), lay.p(), 1, n) = mean_row.transpose();
  return sys;
}

CondensedElement condense(const LocalSystem& sys) {
  const int size = sys.layout.size();
  const int nt = sys.trace_size();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
  const double rcond = lu.rcond();
  if (!(rcond > 1e2 * std::numeric_limits<double>::epsilon()))
    throw std::runtime_error("condense: local matrix of element " + std::to_string(sys.element) +
                             " is singular (rcond " + std::to_string(rcond) + ")");

  Eigen::MatrixXd rhs(size, nt + 2);
  rhs.leftCols(nt) = sys.trace_coupling;
  rhs.col(nt).setZero();
  rhs(sys.layout.zeta(), nt) = 1.0;
  rhs.col(nt + 1) = sys.load;

  CondensedElement ce;
  ce.element = sys.element;
  ce.layout = sys.layout;
  ce.face_basis_size = sys.face_basis_size;
  ce.traces = sys.traces;
  ce.recovery = lu.solve(rhs);
  ce.domain_boundary_moment = sys.domain_boundary_moment;
  ce.domain_boundary_measure = sys.domain_boundary_measure;

  const auto zc = ce.recovery.leftCols(nt);
  const auto zr = ce.recovery.col(nt);
  const auto zf = ce.recovery.col(nt + 1);
  const int iz = sys.layout.zeta();
  ce.K_uu = sys.trace_mass - sys.trace_coupling.transpose() * zc;
  ce.K_ur = -(sys.trace_coupling.transpose() * zr);
  ce.K_rr = -zr(iz);
  ce.f_u = sys.trace_coupling.transpose() * zf;
  ce.f_r = zf(iz);
  return ce;
}

ElementFields reconstruct(const CondensedElement& ce, const Eigen::Ref<const Eigen::VectorXd>& traces,
                          double rho) {
  const int nt = ce.trace_size();
  if (traces.size() != nt)
    throw std::invalid_argument("reconstruct: element " + std::to_string(ce.element) + " expects " +
                                std::to_string(nt) + " trace values, got " +
                                std::to_string(traces.size()));
  Eigen::VectorXd x = ce.recovery.col(nt + 1) + rho * ce.recovery.col(nt);
  if (nt > 0) x.noalias() += ce.recovery.leftCols(nt) * traces;

  const LocalLayout& lay = ce.layout;
  ElementFields f;
  f.L.resize(lay.msd, lay.n);
  f.u.resize(lay.nsd, lay.n);
  for (int r = 0; r < lay.msd; ++r) f.L.row(r) = x.segment(lay.L(r), lay.n).transpose();
  for (int c = 0; c < lay.nsd; ++c) f.u.row(c) = x.segment(lay.u(c), lay.n).transpose();
  f.p = x.segment(lay.p(), lay.n);
  f.zeta = x(lay.zeta());
  return f;
}

Eigen::VectorXd pack(const LocalLayout& lay, const ElementFields& f) {
  Eigen::VectorXd x(lay.size());
  for (int r = 0; r < lay.msd; ++r) x.segment(lay.L(r), lay.n) = f.L.row(r).transpose();
  for (int c = 0; c < lay.nsd; ++c) x.segment(lay.u(c), lay.n) = f.u.row(c).transpose();
  x.segment(lay.p(), lay.n) = f.p;
  x(lay.zeta()) = f.zeta;
  return x;
}

Eigen::VectorXd local_residual(const LocalSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& traces, double rho) {
  Eigen::VectorXd r = sys.matrix * x - sys.load;
  if (sys.trace_size() > 0) r -= sys.trace_coupling * traces;
  r(sys.layout.zeta()) -= rho;
  return r;
}

}  // namespace hdg
