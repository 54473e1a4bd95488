#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hdg/geometry.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/mesh.hpp"
#include "hdg/voigt.hpp"

namespace hdg {

/// Ordering of the element unknowns: L (msd blocks of n), u (nsd blocks of
/// n), p (n) and the scalar multiplier zeta of the boundary-mean constraint.
struct LocalLayout {
  int nsd = 0;
  int msd = 0;
  int n = 0;

  int L(int r) const { return r * n; }
  int u(int c) const { return (msd + c) * n; }
  int p() const { return (msd + nsd) * n; }
  int zeta() const { return (msd + nsd + 1) * n; }
  int size() const { return zeta() + 1; }
};

/// Columns [offset, offset + size) of the trace coupling belong to mesh face
/// `face`; within a block the ordering is component major (c * nf + a).
struct TraceBlock {
  int face;
  int offset;
  int size;
};

/// Element saddle system
///   K x = C uhat + e_zeta rho + F
/// with x = (L, u, p, zeta). K is symmetric. Dirichlet faces only enter F;
/// every other face contributes a block of C.
struct LocalSystem {
  int element = -1;
  LocalLayout layout;
  double tau = 0.0;
  int face_basis_size = 0;
  Eigen::MatrixXd matrix;          // K
  Eigen::MatrixXd trace_coupling;  // C
  Eigen::MatrixXd trace_mass;      // tau <phi, phi> on the trace blocks
  Eigen::VectorXd load;            // F
  std::vector<TraceBlock> traces;
  Eigen::VectorXd domain_boundary_moment;  // \int_{dOmega_e cap dOmega} N_i
  double domain_boundary_measure = 0.0;

  int trace_size() const { return static_cast<int>(trace_coupling.cols()); }
};

/// Fields of one element in nodal coefficients.
struct ElementFields {
  Eigen::MatrixXd L;  // msd x n
  Eigen::MatrixXd u;  // nsd x n
  Eigen::VectorXd p;  // n
  double zeta = 0.0;
};

/// Element contribution to the trace system after static condensation, with
/// the operator that recovers x from (uhat, rho).
///
/// The trace rows read  sum_e { tau<w,uhat> - <w, flux(L,p,u)> } = <w, t>_N
/// and the rho row reads -zeta_e = 0 (the element compatibility condition).
struct CondensedElement {
  int element = -1;
  LocalLayout layout;
  int face_basis_size = 0;
  std::vector<TraceBlock> traces;
  Eigen::MatrixXd K_uu;
  Eigen::VectorXd K_ur;
  double K_rr = 0.0;
  Eigen::VectorXd f_u;
  double f_r = 0.0;
  Eigen::MatrixXd recovery;  // size x (trace + 2): [K^-1 C | K^-1 e_zeta | K^-1 F]
  Eigen::VectorXd domain_boundary_moment;
  double domain_boundary_measure = 0.0;

  int trace_size() const { return static_cast<int>(K_uu.rows()); }
};

/// Assembles the local problem of element e with degree-k bases, scalar
/// stabilization tau > 0, source and Dirichlet data from `data`.
LocalSystem assemble_local(const Mesh& mesh, int element, int degree, const VoigtOps& ops,
                           double tau, const StokesData& data);

/// Exact Schur complement onto (uhat, rho). Throws std::runtime_error when
/// the local matrix is numerically singular.
CondensedElement condense(const LocalSystem& system);

/// Recovers (L, u, p, zeta) from the element traces (component-major blocks
/// in `traces` order) and the element mean pressure.
ElementFields reconstruct(const CondensedElement& element, const Eigen::Ref<const Eigen::VectorXd>& traces,
                          double rho);

/// Packs fields into the local unknown vector x.
Eigen::VectorXd pack(const LocalLayout& layout, const ElementFields& fields);

/// K x - C uhat - e_zeta rho - F.
Eigen::VectorXd local_residual(const LocalSystem& system, const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& traces, double rho);

}  // namespace hdg
