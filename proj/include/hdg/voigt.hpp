#pragma once

#include <array>

#include <Eigen/Dense>

namespace hdg {

/// Voigt storage of symmetric tensors and the matrix forms of the symmetric
/// gradient, divergence, normal projection and curl.
///
/// Component order is (11, 22, 12) in 2D and (11, 22, 33, 12, 13, 23) in 3D.
/// Off-diagonal strain components are stored un-halved:
/// e_ij = du_i/dx_j + du_j/dx_i for i != j.
class VoigtOps {
 public:
  VoigtOps(int nsd, double viscosity);

  int nsd() const { return nsd_; }
  int msd() const { return msd_; }
  int nrr() const { return nrr_; }
  double viscosity() const { return nu_; }

  const Eigen::VectorXd& E() const { return E_; }
  const Eigen::MatrixXd& D() const { return D_; }
  const Eigen::MatrixXd& D_sqrt() const { return D_sqrt_; }
  /// Diagonal of D^{1/2}.
  const Eigen::VectorXd& d_sqrt() const { return d_sqrt_; }

  /// Direction of the derivative linking Voigt row r and velocity component c
  /// in the symmetric gradient, or -1 when the entry is zero. The same table
  /// gives the normal matrix: N(r, c) = n[strain_direction(r, c)].
  int strain_direction(int r, int c) const { return table_[r][c]; }

  /// msd x (nsd * n) matrix mapping nodal velocity coefficients (component
  /// major: column c * n + i) to e_V, given n x nsd physical basis gradients.
  Eigen::MatrixXd strain_rows(const Eigen::MatrixXd& gradients) const;

  /// nrr x (nsd * n) matrix mapping nodal velocity coefficients to the curl.
  Eigen::MatrixXd rotation_rows(const Eigen::MatrixXd& gradients) const;

  /// msd x nsd normal matrix N; requires a unit normal (to 1e-12).
  Eigen::MatrixXd normal_matrix(const Eigen::Ref<const Eigen::VectorXd>& n) const;

  /// nsd x nrr tangent matrix T; requires a unit normal (to 1e-12).
  Eigen::MatrixXd tangent_matrix(const Eigen::Ref<const Eigen::VectorXd>& n) const;

  /// Symmetric tensor from a Voigt strain vector (off-diagonals halved).
  Eigen::MatrixXd voigt_to_tensor(const Eigen::Ref<const Eigen::VectorXd>& v) const;
  /// Inverse of voigt_to_tensor (off-diagonals doubled).
  Eigen::VectorXd tensor_to_voigt(const Eigen::Ref<const Eigen::MatrixXd>& t) const;

  /// Strain e_V of a velocity with gradient grad(i, j) = du_i/dx_j.
  Eigen::VectorXd strain_from_gradient(const Eigen::Ref<const Eigen::MatrixXd>& grad) const;
  /// Curl of a velocity with gradient grad(i, j) = du_i/dx_j.
  Eigen::VectorXd curl_from_gradient(const Eigen::Ref<const Eigen::MatrixXd>& grad) const;

  /// Boundary integrand of the generalized Stokes theorem, oriented so that
  /// the closed-surface integral equals the volume integral of the curl.
  /// With T as defined by tangent_matrix this is -v^T T.
  Eigen::VectorXd circulation_density(const Eigen::Ref<const Eigen::VectorXd>& v,
                                      const Eigen::Ref<const Eigen::VectorXd>& n) const;

 private:
  void require_unit(const Eigen::Ref<const Eigen::VectorXd>& n) const;

  int nsd_, msd_, nrr_;
  double nu_;
  Eigen::VectorXd E_;
  Eigen::MatrixXd D_, D_sqrt_;
  Eigen::VectorXd d_sqrt_;
  std::array<std::array<int, 3>, 6> table_{};
};

}  // namespace hdg
