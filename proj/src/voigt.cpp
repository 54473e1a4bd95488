#include "hdg/voigt.hpp"

#include <cmath>
#include <stdexcept>

namespace hdg {

VoigtOps::VoigtOps(int nsd, double viscosity)
    : nsd_(nsd), msd_(nsd * (nsd + 1) / 2), nrr_(nsd * (nsd - 1) / 2), nu_(viscosity) {
  if (nsd != 2 && nsd != 3) throw std::invalid_argument("VoigtOps: nsd must be 2 or 3");
  if (!(viscosity > 0.0)) throw std::invalid_argument("VoigtOps: viscosity must be positive");
  E_ = Eigen::VectorXd::Zero(msd_);
  E_.head(nsd_).setOnes();
  Eigen::VectorXd diag(msd_);
  diag.head(nsd_).setConstant(2.0 * nu_);
  diag.tail(msd_ - nsd_).setConstant(nu_);
  D_ = diag.asDiagonal();
  d_sqrt_ = diag.cwiseSqrt();
  D_sqrt_ = d_sqrt_.asDiagonal();

  for (auto& row : table_) row.fill(-1);
  for (int i = 0; i < nsd_; ++i) table_[i][i] = i;
  if (nsd_ == 2) {
    table_[2][0] = 1;
    table_[2][1] = 0;
  } else {
    table_[3][0] = 1;  // 12
    table_[3][1] = 0;
    table_[4][0] = 2;  // 13
    table_[4][2] = 0;
    table_[5][1] = 2;  // 23
    table_[5][2] = 1;
  }
}

Eigen::MatrixXd VoigtOps::strain_rows(const Eigen::MatrixXd& gradients) const {
  const int n = static_cast<int>(gradients.rows());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(msd_, nsd_ * n);
  for (int r = 0; r < msd_; ++r)
    for (int c = 0; c < nsd_; ++c) {
      const int d = table_[r][c];
      if (d >= 0) b.block(r, c * n, 1, n) = gradients.col(d).transpose();
    }
  return b;
}

Eigen::MatrixXd VoigtOps::rotation_rows(const Eigen::MatrixXd& gradients) const {
  const int n = static_cast<int>(gradients.rows());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(nrr_, nsd_ * n);
  auto put = [&](int row, int comp, int dir, double sign) {
    w.block(row, comp * n, 1, n) += sign * gradients.col(dir).transpose();
  };
  if (nsd_ == 2) {
    put(0, 0, 1, -1.0);
    put(0, 1, 0, 1.0);
  } else {
    put(0, 1, 2, -1.0);
    put(0, 2, 1, 1.0);
    put(1, 0, 2, 1.0);
    put(1, 2, 0, -1.0);
    put(2, 0, 1, -1.0);
    put(2, 1, 0, 1.0);
  }
  return w;
}

void VoigtOps::require_unit(const Eigen::Ref<const Eigen::VectorXd>& n) const {
  if (n.size() != nsd_) throw std::invalid_argument("VoigtOps: normal has wrong length");
  if (std::abs(n.norm() - 1.0) > 1e-12) throw std::invalid_argument("VoigtOps: normal is not unit");
}

Eigen::MatrixXd VoigtOps::normal_matrix(const Eigen::Ref<const Eigen::VectorXd>& n) const {
  require_unit(n);
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(msd_, nsd_);
  for (int r = 0; r < msd_; ++r)
    for (int c = 0; c < nsd_; ++c)
      if (table_[r][c] >= 0) N(r, c) = n(table_[r][c]);
  return N;
}

Eigen::MatrixXd VoigtOps::tangent_matrix(const Eigen::Ref<const Eigen::VectorXd>& n) const {
  require_unit(n);
  Eigen::MatrixXd T(nsd_, nrr_);
  if (nsd_ == 2) {
    T << n(1), -n(0);
  } else {
    T << 0.0, -n(2), n(1),
         n(2), 0.0, -n(0),
         -n(1), n(0), 0.0;
  }
  return T;
}

Eigen::MatrixXd VoigtOps::voigt_to_tensor(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != msd_) throw std::invalid_argument("voigt_to_tensor: wrong length");
  Eigen::MatrixXd t(nsd_, nsd_);
  for (int i = 0; i < nsd_; ++i) t(i, i) = v(i);
  for (int r = nsd_; r < msd_; ++r) {
    int i = -1, j = -1;
    for (int c = 0; c < nsd_; ++c)
      if (table_[r][c] >= 0) (i < 0 ? i : j) = c;
    t(i, j) = t(j, i) = 0.5 * v(r);
  }
  return t;
}

Eigen::VectorXd VoigtOps::tensor_to_voigt(const Eigen::Ref<const Eigen::MatrixXd>& t) const {
  if (t.rows() != nsd_ || t.cols() != nsd_)
    throw std::invalid_argument("tensor_to_voigt: wrong shape");
  Eigen::VectorXd v(msd_);
  for (int i = 0; i < nsd_; ++i) v(i) = t(i, i);
  for (int r = nsd_; r < msd_; ++r) {
    int i = -1, j = -1;
    for (int c = 0; c < nsd_; ++c)
      if (table_[r][c] >= 0) (i < 0 ? i : j) = c;
    v(r) = t(i, j) + t(j, i);
  }
  return v;
}

Eigen::VectorXd VoigtOps::strain_from_gradient(const Eigen::Ref<const Eigen::MatrixXd>& grad) const {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(msd_);
  for (int r = 0; r < msd_; ++r)
    for (int c = 0; c < nsd_; ++c)
      if (table_[r][c] >= 0) e(r) += grad(c, table_[r][c]);
  return e;
}

Eigen::VectorXd VoigtOps::curl_from_gradient(const Eigen::Ref<const Eigen::MatrixXd>& grad) const {
  Eigen::VectorXd w(nrr_);
  if (nsd_ == 2) {
    w(0) = grad(1, 0) - grad(0, 1);
  } else {
    w(0) = grad(2, 1) - grad(1, 2);
    w(1) = grad(0, 2) - grad(2, 0);
    w(2) = grad(1, 0) - grad(0, 1);
  }
  return w;
}

Eigen::VectorXd VoigtOps::circulation_density(const Eigen::Ref<const Eigen::VectorXd>& v,
                                              const Eigen::Ref<const Eigen::VectorXd>& n) const {
  return -(v.transpose() * tangent_matrix(n)).transpose();
}

}  // namespace hdg
