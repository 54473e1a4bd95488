#include "hdg/identities.hpp"

#include <random>

#include "hdg/geometry.hpp"
#include "hdg/mesh.hpp"

namespace hdg {

namespace {

Mesh single_element(CellType type, const Eigen::MatrixXd& vertices) {
  std::vector<int> ids(vertices.rows());
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) ids[i] = i;
  return Mesh(static_cast<int>(vertices.cols()), vertices, {Element{type, ids}});
}

int identity_order(const ReferenceElement& basis) { return 2 * basis.degree() + 2; }

}  // namespace

IdentityCheck check_generalized_gauss(CellType type, const Eigen::MatrixXd& vertices,
                                      const ReferenceElement& basis, const VoigtOps& ops,
                                      const Eigen::MatrixXd& stress, const Eigen::MatrixXd& velocity) {
  const Mesh mesh = single_element(type, vertices);
  const ElementQuadrature eq = tabulate_element(mesh, 0, basis, 1, identity_order(basis));
  const int nsd = ops.nsd();
  const int msd = ops.msd();

  IdentityCheck out{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), 0.0};
  for (const auto& fq : eq.faces) {
    for (int q = 0; q < fq.weights.size(); ++q) {
      const Eigen::VectorXd s = stress * fq.cell_values.row(q).transpose();
      const Eigen::VectorXd v = velocity * fq.cell_values.row(q).transpose();
      const Eigen::VectorXd n = fq.normals.row(q).transpose();
      out.boundary(0) += fq.weights(q) * (ops.normal_matrix(n).transpose() * s).dot(v);
    }
  }
  const auto& cq = eq.cell;
  for (int q = 0; q < cq.weights.size(); ++q) {
    const Eigen::VectorXd s = stress * cq.values.row(q).transpose();
    const Eigen::VectorXd v = velocity * cq.values.row(q).transpose();
    Eigen::MatrixXd grad_v(nsd, nsd), grad_s(msd, nsd);
    for (int d = 0; d < nsd; ++d) {
      grad_v.col(d) = velocity * cq.gradients[d].row(q).transpose();
      grad_s.col(d) = stress * cq.gradients[d].row(q).transpose();
    }
    Eigen::VectorXd div_s = Eigen::VectorXd::Zero(nsd);
    for (int r = 0; r < msd; ++r)
      for (int c = 0; c < nsd; ++c)
        if (ops.strain_direction(r, c) >= 0) div_s(c) += grad_s(r, ops.strain_direction(r, c));
    out.volume(0) += cq.weights(q) * (s.dot(ops.strain_from_gradient(grad_v)) + div_s.dot(v));
  }
  out.residual = (out.boundary - out.volume).cwiseAbs().maxCoeff();
  return out;
}

IdentityCheck check_generalized_stokes(CellType type, const Eigen::MatrixXd& vertices,
                                       const ReferenceElement& basis, const VoigtOps& ops,
                                       const Eigen::MatrixXd& velocity) {
  const Mesh mesh = single_element(type, vertices);
  const ElementQuadrature eq = tabulate_element(mesh, 0, basis, 1, identity_order(basis));
  const int nsd = ops.nsd();

  IdentityCheck out{Eigen::VectorXd::Zero(ops.nrr()), Eigen::VectorXd::Zero(ops.nrr()), 0.0};
  for (const auto& fq : eq.faces)
    for (int q = 0; q < fq.weights.size(); ++q) {
      const Eigen::VectorXd v = velocity * fq.cell_values.row(q).transpose();
      out.boundary += fq.weights(q) * ops.circulation_density(v, fq.normals.row(q).transpose());
    }
  const auto& cq = eq.cell;
  for (int q = 0; q < cq.weights.size(); ++q) {
    Eigen::MatrixXd grad_v(nsd, nsd);
    for (int d = 0; d < nsd; ++d) grad_v.col(d) = velocity * cq.gradients[d].row(q).transpose();
    out.volume += cq.weights(q) * ops.curl_from_gradient(grad_v);
  }
  out.residual = (out.boundary - out.volume).cwiseAbs().maxCoeff();
  return out;
}

IdentitySweep sweep_identities(int max_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  IdentitySweep sweep;
  for (CellType type : {CellType::Triangle, CellType::Quadrilateral, CellType::Tetrahedron,
                        CellType::Hexahedron}) {
    const int dim = dimension(type);
    const VoigtOps ops(dim, 1.0);
    for (int k = 1; k <= max_degree; ++k) {
      const ReferenceElement& basis = reference_element(type, k);
      // Random orientation-preserving affine image of the reference cell.
      Eigen::MatrixXd a(dim, dim);
      do {
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) a(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * unit(rng);
      } while (a.determinant() < 0.2);
      Eigen::VectorXd shift(dim);
      for (int i = 0; i < dim; ++i) shift(i) = unit(rng);
      Eigen::MatrixXd verts = reference_vertices(type) * a.transpose();
      verts.rowwise() += shift.transpose();

      Eigen::MatrixXd stress(ops.msd(), basis.size()), velocity(dim, basis.size());
      for (int i = 0; i < stress.size(); ++i) stress.data()[i] = unit(rng);
      for (int i = 0; i < velocity.size(); ++i) velocity.data()[i] = unit(rng);

      const double g =
          check_generalized_gauss(type, verts, basis, ops, stress, velocity).residual;
      const double s = check_generalized_stokes(type, verts, basis, ops, velocity).residual;
      sweep.rows.push_back({type, k, g, s});
      sweep.max_gauss = std::max(sweep.max_gauss, g);
      sweep.max_stokes = std::max(sweep.max_stokes, s);
      ++sweep.cases;
    }
  }
  return sweep;
}

}  // namespace hdg
