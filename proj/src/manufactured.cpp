#include "hdg/manufactured.hpp"

#include <cmath>
#include <random>

#include "hdg/voigt.hpp"

namespace hdg {

Eigen::VectorXd ManufacturedSolution::source(const Eigen::VectorXd& x) const {
  return -viscosity * velocity_laplacian(x) + pressure_gradient(x);
}

Eigen::VectorXd ManufacturedSolution::traction(const Eigen::VectorXd& x,
                                               const Eigen::VectorXd& n) const {
  const Eigen::MatrixXd g = velocity_gradient(x);
  Eigen::MatrixXd sigma = viscosity * (g + g.transpose());
  sigma.diagonal().array() -= pressure(x);
  return sigma * n;
}

Eigen::VectorXd ManufacturedSolution::mixed(const Eigen::VectorXd& x) const {
  const VoigtOps ops(nsd, viscosity);
  return -(ops.d_sqrt().array() * ops.strain_from_gradient(velocity_gradient(x)).array()).matrix();
}

double ManufacturedSolution::divergence(const Eigen::VectorXd& x) const {
  return velocity_gradient(x).trace();
}

StokesData ManufacturedSolution::data() const {
  // Capture by value so the data outlives this object.
  auto self = *this;
  return StokesData{nsd, viscosity, [self](const Eigen::VectorXd& x) { return self.source(x); },
                    velocity,
                    [self](const Eigen::VectorXd& x, const Eigen::VectorXd& n) {
                      return self.traction(x, n);
                    }};
}

ManufacturedSolution ManufacturedSolution::scaled(double factor) const {
  ManufacturedSolution out = *this;
  out.viscosity = viscosity * factor;
  out.pressure = [p = pressure, factor](const Eigen::VectorXd& x) { return factor * p(x); };
  out.pressure_gradient = [g = pressure_gradient, factor](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(factor * g(x));
  };
  return out;
}

PointPredicate on_plane(int axis, double value) {
  return [axis, value](const Eigen::VectorXd& x) { return std::abs(x(axis) - value) < 1e-12; };
}

PointPredicate nowhere() {
  return [](const Eigen::VectorXd&) { return false; };
}

ManufacturedSolution wang_flow() {
  constexpr double a = 1.0, b = 1.0, lambda = 1.0;
  ManufacturedSolution m;
  m.name = "wang2d";
  m.nsd = 2;
  m.viscosity = 1.0;
  m.velocity = [](const Eigen::VectorXd& x) {
    const double e = std::exp(-lambda * x(1));
    return Eigen::Vector2d(2.0 * a * x(1) - b * lambda * std::cos(lambda * x(0)) * e,
                           b * lambda * std::sin(lambda * x(0)) * e)
        .eval();
  };
  m.velocity_gradient = [](const Eigen::VectorXd& x) {
    const double e = std::exp(-lambda * x(1));
    const double c = std::cos(lambda * x(0)), s = std::sin(lambda * x(0));
    const double bl2 = b * lambda * lambda;
    Eigen::Matrix2d g;
    g << bl2 * s * e, 2.0 * a + bl2 * c * e,
         bl2 * c * e, -bl2 * s * e;
    return Eigen::MatrixXd(g);
  };
  m.velocity_laplacian = [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(2).eval(); };
  m.pressure = [](const Eigen::VectorXd&) { return 0.0; };
  m.pressure_gradient = [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(2).eval(); };
  m.neumann = on_plane(1, 0.0);
  return m;
}

namespace {

// Velocity components as sums of c * exp(alpha . x).
struct ExpTerm {
  double coefficient;
  Eigen::Vector3d alpha;
};

}  // namespace

ManufacturedSolution exp_flow_3d() {
  constexpr double a = 1.0, b = 0.5;
  // Exponent vectors of the three distinct exponentials.
  const Eigen::Vector3d e1(a, b, -a - b);  // a(x1-x3) + b(x2-x3)
  const Eigen::Vector3d e2(b, -a - b, a);  // a(x3-x2) + b(x1-x2)
  const Eigen::Vector3d e3(-a - b, a, b);  // a(x2-x1) + b(x3-x1)
  const std::array<std::vector<ExpTerm>, 3> terms = {{
      {{b, e1}, {-a, e2}},
      {{b, e3}, {-a, e1}},
      {{b, e2}, {-a, e3}},
  }};

  ManufacturedSolution m;
  m.name = "exp3d";
  m.nsd = 3;
  m.viscosity = 1.0;
  m.velocity = [terms](const Eigen::VectorXd& x) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
    for (int i = 0; i < 3; ++i)
      for (const auto& t : terms[i]) u(i) += t.coefficient * std::exp(t.alpha.dot(x));
    return u;
  };
  m.velocity_gradient = [terms](const Eigen::VectorXd& x) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
      for (const auto& t : terms[i])
        g.row(i) += t.coefficient * std::exp(t.alpha.dot(x)) * t.alpha.transpose();
    return g;
  };
  m.velocity_laplacian = [terms](const Eigen::VectorXd& x) {
    Eigen::VectorXd l = Eigen::VectorXd::Zero(3);
    for (int i = 0; i < 3; ++i)
      for (const auto& t : terms[i])
        l(i) += t.coefficient * t.alpha.squaredNorm() * std::exp(t.alpha.dot(x));
    return l;
  };
  m.pressure = [](const Eigen::VectorXd& x) { return x(0) * (1.0 - x(0)); };
  m.pressure_gradient = [](const Eigen::VectorXd& x) {
    return Eigen::Vector3d(1.0 - 2.0 * x(0), 0.0, 0.0).eval();
  };
  m.neumann = on_plane(2, 0.0);
  return m;
}

double Polynomial::operator()(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coefficient;
    for (int d = 0; d < 3; ++d)
      if (t.exponents[d] > 0) v *= std::pow(x(d), t.exponents[d]);
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(int dir) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exponents[dir] == 0) continue;
    Term d = t;
    d.coefficient *= t.exponents[dir];
    --d.exponents[dir];
    out.push_back(d);
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::random(int dim, int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Term> terms;
  const int kz = dim > 2 ? degree : 0;
  for (int c = 0; c <= kz; ++c)
    for (int b = 0; b <= degree; ++b)
      for (int a = 0; a <= degree; ++a)
        if (a + b + c <= degree) terms.push_back({unit(rng), {a, b, c}});
  return Polynomial(std::move(terms));
}

ManufacturedSolution polynomial_flow(int nsd, int degree, double viscosity, std::uint64_t seed,
                                     bool with_neumann) {
  // u = curl(potential): divergence free by construction, degree <= `degree`.
  std::vector<Polynomial> u(nsd);
  if (nsd == 2) {
    const Polynomial psi = Polynomial::random(2, degree + 1, seed);
    u[0] = psi.derivative(1);
    Polynomial minus_dx = psi.derivative(0);
    std::vector<Polynomial::Term> t = minus_dx.terms();
    for (auto& term : t) term.coefficient = -term.coefficient;
    u[1] = Polynomial(std::move(t));
  } else {
    std::array<Polynomial, 3> pot;
    for (int i = 0; i < 3; ++i) pot[i] = Polynomial::random(3, degree + 1, seed + 101 * (i + 1));
    auto diff = [](const Polynomial& p, const Polynomial& q) {
      std::vector<Polynomial::Term> t = p.terms();
      for (auto term : q.terms()) {
        term.coefficient = -term.coefficient;
        t.push_back(term);
      }
      return Polynomial(std::move(t));
    };
    u[0] = diff(pot[2].derivative(1), pot[1].derivative(2));
    u[1] = diff(pot[0].derivative(2), pot[2].derivative(0));
    u[2] = diff(pot[1].derivative(0), pot[0].derivative(1));
  }
  const Polynomial p = Polynomial::random(nsd, degree, seed + 7919);

  std::vector<std::vector<Polynomial>> du(nsd, std::vector<Polynomial>(nsd));
  std::vector<Polynomial> lap_terms;
  for (int i = 0; i < nsd; ++i) {
    std::vector<Polynomial::Term> lap;
    for (int j = 0; j < nsd; ++j) {
      du[i][j] = u[i].derivative(j);
      const Polynomial second = du[i][j].derivative(j);
      lap.insert(lap.end(), second.terms().begin(), second.terms().end());
    }
    lap_terms.emplace_back(std::move(lap));
  }
  std::vector<Polynomial> dp(nsd);
  for (int j = 0; j < nsd; ++j) dp[j] = p.derivative(j);

  ManufacturedSolution m;
  m.name = "polynomial";
  m.nsd = nsd;
  m.viscosity = viscosity;
  m.velocity = [u](const Eigen::VectorXd& x) {
    Eigen::VectorXd v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v(i) = u[i](x);
    return v;
  };
  m.velocity_gradient = [du](const Eigen::VectorXd& x) {
    const int n = static_cast<int>(du.size());
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = du[i][j](x);
    return g;
  };
  m.velocity_laplacian = [lap_terms](const Eigen::VectorXd& x) {
    Eigen::VectorXd v(lap_terms.size());
    for (std::size_t i = 0; i < lap_terms.size(); ++i) v(i) = lap_terms[i](x);
    return v;
  };
  m.pressure = [p](const Eigen::VectorXd& x) { return p(x); };
  m.pressure_gradient = [dp](const Eigen::VectorXd& x) {
    Eigen::VectorXd v(dp.size());
    for (std::size_t i = 0; i < dp.size(); ++i) v(i) = dp[i](x);
    return v;
  };
  m.neumann = with_neumann ? on_plane(nsd - 1, 0.0) : nowhere();
  return m;
}

}  // namespace hdg
