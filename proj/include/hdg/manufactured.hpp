#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hdg {

using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using ScalarField = std::function<double(const Eigen::VectorXd&)>;
using MatrixField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using TractionField = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
using PointPredicate = std::function<bool(const Eigen::VectorXd&)>;

/// Data of a Stokes boundary value problem in Cauchy-stress form.
struct StokesData {
  int nsd = 2;
  double viscosity = 1.0;
  VectorField source;
  VectorField dirichlet;
  TractionField traction;  // t(x, n) = sigma(x) n on Neumann faces
};

/// Closed-form Stokes solution with the data it induces.
struct ManufacturedSolution {
  std::string name;
  int nsd = 2;
  double viscosity = 1.0;
  VectorField velocity;
  MatrixField velocity_gradient;  // (i, j) = du_i/dx_j
  VectorField velocity_laplacian;
  ScalarField pressure;
  VectorField pressure_gradient;
  PointPredicate neumann;  // boundary part carrying tractions

  /// s = -nu lap(u) + grad p (u divergence free).
  Eigen::VectorXd source(const Eigen::VectorXd& x) const;
  /// sigma n with sigma = -p I + nu (grad u + grad u^T).
  Eigen::VectorXd traction(const Eigen::VectorXd& x, const Eigen::VectorXd& n) const;
  /// Exact mixed variable L = -D^{1/2} grad_S u in Voigt storage.
  Eigen::VectorXd mixed(const Eigen::VectorXd& x) const;
  double divergence(const Eigen::VectorXd& x) const;

  StokesData data() const;

  /// Copy with viscosity, pressure, source and traction scaled by `factor`
  /// (velocity unchanged).
  ManufacturedSolution scaled(double factor) const;
};

/// 2D Wang flow on [0,1]^2 with a = b = lambda = 1, nu = 1, p = 0 and
/// tractions on x2 = 0.
ManufacturedSolution wang_flow();

/// 3D exponential flow on [0,1]^3 with a = 1, b = 0.5, nu = 1,
/// p = x1 (1 - x1) and tractions on x3 = 0.
ManufacturedSolution exp_flow_3d();

/// Multivariate polynomial as a list of monomial terms.
class Polynomial {
 public:
  struct Term {
    double coefficient;
    std::array<int, 3> exponents;
  };

  Polynomial() = default;
  explicit Polynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

  double operator()(const Eigen::VectorXd& x) const;
  Polynomial derivative(int dir) const;
  const std::vector<Term>& terms() const { return terms_; }

  /// Random polynomial of total degree <= degree in `dim` variables.
  static Polynomial random(int dim, int degree, std::uint64_t seed);

 private:
  std::vector<Term> terms_;
};

/// Random divergence-free polynomial velocity of total degree <= degree
/// (curl of a random stream function / vector potential) with a random
/// pressure of total degree <= degree. Tractions on the face x_nsd = 0 when
/// `with_neumann`, otherwise pure Dirichlet.
ManufacturedSolution polynomial_flow(int nsd, int degree, double viscosity, std::uint64_t seed,
                                     bool with_neumann = true);

/// Planar predicate helpers.
PointPredicate on_plane(int axis, double value);
PointPredicate nowhere();

}  // namespace hdg
