#include <cmath>

#include "doctest.h"
#include "hdg/analysis.hpp"
#include "hdg/diagnostics.hpp"
#include "hdg/postprocess.hpp"
#include "test_support.hpp"

using namespace hdg;
using namespace hdg::test;

namespace {

const PointPredicate kEverywhere = [](const Eigen::VectorXd&) { return true; };

/// Fields built from L2 projections of an exact solution: L, u, p onto P^k
/// per element, uhat onto the face basis on every non-Dirichlet face.
SolutionFields projected_fields(const Mesh& mesh, int k, const ManufacturedSolution& sol) {
  SolutionFields f;
  f.nsd = mesh.dim();
  f.degree = k;
  f.rho = Eigen::VectorXd::Zero(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    ElementFields ef;
    ef.L = project_cell(mesh, e, k, [&](const Eigen::VectorXd& x) { return sol.mixed(x); });
    ef.u = project_cell(mesh, e, k, sol.velocity);
    ef.p = project_cell(mesh, e, k, [&](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, sol.pressure(x)); })
               .row(0)
               .transpose();
    f.elements.push_back(ef);
  }
  f.face_traces.resize(mesh.num_faces());
  for (int face = 0; face < mesh.num_faces(); ++face) {
    if (mesh.face(face).tag == BoundaryTag::Dirichlet) continue;
    const Eigen::VectorXd t = project_trace(mesh, face, k, sol.velocity);
    const int nf = static_cast<int>(t.size()) / f.nsd;
    f.face_traces[face] = Eigen::Map<const Eigen::MatrixXd>(t.data(), nf, f.nsd).transpose();
  }
  return f;
}

ManufacturedSolution rigid_rotation() {
  ManufacturedSolution s;
  s.name = "rotation";
  s.nsd = 2;
  s.velocity = [](const Eigen::VectorXd& x) { return Eigen::Vector2d(-x(1), x(0)).eval(); };
  s.velocity_gradient = [](const Eigen::VectorXd&) { return (Eigen::Matrix2d() << 0, -1, 1, 0).finished().eval(); };
  s.velocity_laplacian = [](const Eigen::VectorXd&) { return Eigen::Vector2d::Zero().eval(); };
  s.pressure = [](const Eigen::VectorXd&) { return 0.0; };
  s.pressure_gradient = [](const Eigen::VectorXd&) { return Eigen::Vector2d::Zero().eval(); };
  s.neumann = nowhere();
  return s;
}

/// \int_{Omega_e} grad_W of an element field with degree-m coefficients.
Eigen::VectorXd integrated_curl(const Mesh& mesh, int e, int m, const Eigen::MatrixXd& coeffs, const VoigtOps& ops) {
  const ElementQuadrature eq = tabulate_element(mesh, e, reference_element(mesh.element(e).type, m), 1, 2 * m + 2);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(ops.nrr());
  for (int q = 0; q < eq.cell.weights.size(); ++q) {
    Eigen::MatrixXd grad(mesh.dim(), mesh.dim());
    for (int j = 0; j < mesh.dim(); ++j) grad.col(j) = coeffs * eq.cell.gradients[j].row(q).transpose();
    w += eq.cell.weights(q) * ops.curl_from_gradient(grad);
  }
  return w;
}

}  // namespace

TEST_SUITE("postprocess") {
  TEST_CASE("a linear velocity is recovered exactly") {
    for (MeshFamily family : {MeshFamily::Tri2, MeshFamily::Quad, MeshFamily::Tet}) {
      CAPTURE(to_string(family));
      const int nsd = dimension(family);
      const ManufacturedSolution sol = polynomial_flow(nsd, 1, 1.0, 8);
      const CaseResult r = run_case(sol, family, 1, 4.0, 1, Execution::Serial);
      for (int e = 0; e < r.mesh.num_elements(); ++e)
        CHECK(max_abs(r.ustar.elements[e] - interpolate(r.mesh, e, 2, sol.velocity)) <= 1e-10);
      CHECK(r.errors.ustar <= 1e-10);
    }
  }

  TEST_CASE("zero fields give zero") {
    const Mesh mesh = classify_boundary(generate_cartesian_mesh(Box::unit(2), 2, MeshFamily::Quad), kEverywhere);
    const VoigtOps ops(2, 1.0);
    SolutionFields f;
    f.nsd = 2;
    f.degree = 2;
    f.rho = Eigen::VectorXd::Zero(mesh.num_elements());
    const int n = basis_size(CellType::Quadrilateral, 2);
    for (int e = 0; e < mesh.num_elements(); ++e)
      f.elements.push_back({Eigen::MatrixXd::Zero(3, n), Eigen::MatrixXd::Zero(2, n), Eigen::VectorXd::Zero(n), 0.0});
    f.face_traces.assign(mesh.num_faces(), Eigen::MatrixXd::Zero(2, 3));
    const PostprocessedField u = postprocess_all(mesh, f, ops, [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(2).eval(); }, Execution::Serial);
    for (const auto& c : u.elements) CHECK(c.norm() == 0.0);
  }

  TEST_CASE("rigid rotation: u* reproduces it with circulation 2 |Omega_e|") {
    const ManufacturedSolution rot = rigid_rotation();
    for (MeshFamily family : {MeshFamily::Tri1, MeshFamily::Quad}) {
      CAPTURE(to_string(family));
      const Mesh mesh = generate_cartesian_mesh(Box::unit(2), 2, family);
      const VoigtOps ops(2, 1.0);
      const int k = 1;
      const SolutionFields fields = projected_fields(mesh, k, rot);
      const PostprocessedField u = postprocess_all(mesh, fields, ops, rot.velocity, Execution::Serial);
      CHECK(u.degree == 2);
      for (int e = 0; e < mesh.num_elements(); ++e) {
        CHECK(max_abs(u.elements[e] - interpolate(mesh, e, 2, rot.velocity)) <= 1e-12);
        const double area = tabulate_element(mesh, e, reference_element(mesh.element(e).type, 1), 1, 2).cell.measure;
        CHECK(integrated_curl(mesh, e, 2, u.elements[e], ops)(0) == doctest::Approx(2.0 * area).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("the stiffness annihilates rigid modes") {
    for (MeshFamily family : {MeshFamily::Quad, MeshFamily::Tri2, MeshFamily::Hex, MeshFamily::Tet}) {
      CAPTURE(to_string(family));
      const int nsd = dimension(family);
      const ManufacturedSolution sol = polynomial_flow(nsd, 2, 1.0, 2);
      const Mesh mesh = problem_mesh(sol, family, 1);
      const VoigtOps ops(nsd, 1.7);
      const int k = 2;
      const SolutionFields fields = projected_fields(mesh, k, sol);
      const PostprocessSystem sys = assemble_postprocess(mesh, 0, fields, ops, sol.velocity);
      const int n = static_cast<int>(sys.stiffness.rows()) / nsd;
      std::vector<VectorField> modes;
      for (int c = 0; c < nsd; ++c)
        modes.push_back([nsd, c](const Eigen::VectorXd&) { return Eigen::VectorXd::Unit(nsd, c).eval(); });
      for (int a = 0; a < nsd; ++a)
        for (int b = a + 1; b < nsd; ++b)
          modes.push_back([nsd, a, b](const Eigen::VectorXd& x) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(nsd);
            v(a) = -x(b);
            v(b) = x(a);
            return v;
          });
      CHECK(static_cast<int>(modes.size()) == nsd + ops.nrr());
      for (const VectorField& mode : modes) {
        const Eigen::MatrixXd coeffs = interpolate(mesh, 0, k + 1, mode);
        Eigen::VectorXd v(nsd * n);
        for (int c = 0; c < nsd; ++c) v.segment(c * n, n) = coeffs.row(c).transpose();
        CHECK((sys.stiffness * v).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }

  TEST_CASE("mean and circulation constraints hold on solved fields") {
    for (MeshFamily family : {MeshFamily::Tri2, MeshFamily::Quad, MeshFamily::Tet, MeshFamily::Hex}) {
      CAPTURE(to_string(family));
      const int nsd = dimension(family);
      const ManufacturedSolution sol = nsd == 2 ? wang_flow() : exp_flow_3d();
      const CaseResult r = run_case(sol, family, 2, default_tau(family), nsd == 2 ? 2 : 1, Execution::Serial);
      const VoigtOps ops(nsd, sol.viscosity);
      const ConstraintResiduals c = postprocess_constraint_residuals(r.mesh, r.fields, r.ustar, ops, sol.velocity);
      CHECK(c.mean <= 1e-10);
      CHECK(c.circulation <= 1e-10);
    }
  }

  TEST_CASE("degree k + 1 velocities are recovered from projected data") {
    // On simplices grad_S of a degree-(k+1) test function lies in P^k, so the
    // projected L, u and uhat carry exactly the information u* needs.
    for (MeshFamily family : {MeshFamily::Tri1, MeshFamily::Tri2, MeshFamily::Tet})
      for (int k : {1, 2, 3}) {
        const int nsd = dimension(family);
        if (nsd == 3 && k == 3) continue;
        CAPTURE(to_string(family));
        CAPTURE(k);
        const ManufacturedSolution sol = polynomial_flow(nsd, k + 1, 1.3, 40 + k);
        const Mesh mesh = problem_mesh(sol, family, 1);
        const VoigtOps ops(nsd, sol.viscosity);
        const SolutionFields fields = projected_fields(mesh, k, sol);
        const PostprocessedField u = postprocess_all(mesh, fields, ops, sol.velocity, Execution::Serial);
        double worst = 0.0;
        for (int e = 0; e < mesh.num_elements(); ++e)
          worst = std::max(worst, max_abs(u.elements[e] - interpolate(mesh, e, k + 1, sol.velocity)));
        CHECK(worst <= 1e-10);
      }
  }

  TEST_CASE("serial and parallel post-processing agree") {
    const ManufacturedSolution sol = wang_flow();
    const Mesh mesh = problem_mesh(sol, MeshFamily::Tri1, 2);
    const VoigtOps ops(2, 1.0);
    const SolutionFields fields = projected_fields(mesh, 2, sol);
    const PostprocessedField a = postprocess_all(mesh, fields, ops, sol.velocity, Execution::Serial);
    const PostprocessedField b = postprocess_all(mesh, fields, ops, sol.velocity, Execution::Parallel);
    for (size_t e = 0; e < a.elements.size(); ++e) CHECK(max_abs(a.elements[e] - b.elements[e]) == 0.0);
  }

  TEST_CASE("a missing trace is reported") {
    const ManufacturedSolution sol = wang_flow();
    const Mesh mesh = problem_mesh(sol, MeshFamily::Quad, 1);
    SolutionFields fields = projected_fields(mesh, 1, sol);
    for (auto& t : fields.face_traces) t.resize(0, 0);
    CHECK_THROWS_AS(postprocess_element(mesh, 0, fields, VoigtOps(2, 1.0), sol.velocity), std::invalid_argument);
  }
}
