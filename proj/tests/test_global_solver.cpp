#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "hdg/analysis.hpp"
#include "hdg/diagnostics.hpp"
#include "hdg/global_solver.hpp"
#include "test_support.hpp"

using namespace hdg;
using namespace hdg::test;

namespace {

SolverOptions options(int k, double tau, Execution policy = Execution::Serial,
                      LinearSolver method = LinearSolver::Auto) {
  SolverOptions opt;
  opt.degree = k;
  opt.tau = tau;
  opt.execution = policy;
  opt.linear_solver = method;
  return opt;
}

// Element traces gathered from the solved face traces in the block order of `sys`.
Eigen::VectorXd gather_traces(const LocalSystem& sys, const SolutionFields& fields) {
  Eigen::VectorXd t(sys.trace_size());
  for (const TraceBlock& tb : sys.traces) {
    const Eigen::MatrixXd& ft = fields.face_traces[tb.face];
    const int nf = static_cast<int>(ft.cols());
    for (int c = 0; c < ft.rows(); ++c) t.segment(tb.offset + c * nf, nf) = ft.row(c).transpose();
  }
  return t;
}

ManufacturedSolution pure_dirichlet(ManufacturedSolution sol) {
  sol.neumann = nowhere();
  return sol;
}

double max_field_difference(const SolutionFields& a, const SolutionFields& b) {
  double d = 0.0;
  for (size_t e = 0; e < a.elements.size(); ++e) {
    d = std::max(d, max_abs(a.elements[e].L - b.elements[e].L));
    d = std::max(d, max_abs(a.elements[e].u - b.elements[e].u));
    d = std::max(d, max_abs(a.elements[e].p - b.elements[e].p));
  }
  return std::max(d, max_abs(a.rho - b.rho));
}

}  // namespace

TEST_SUITE("global_solver") {
  TEST_CASE("single all-Dirichlet triangle: rho plus the boundary-mean multiplier") {
    const ManufacturedSolution sol = pure_dirichlet(polynomial_flow(2, 2, 1.0, 3));
    const Mesh mesh = single_triangle(sol.neumann);
    const VoigtOps ops(2, 1.0);
    const auto condensed = condense_all(mesh, 2, ops, 4.0, sol.data(), Execution::Serial);
    const TraceSystem base = assemble_global(mesh, condensed, sol.data(), 2);
    CHECK(base.dofs.num_trace == 0);
    CHECK(base.matrix.rows() == 1);
    const TraceSystem sys = enforce_pure_dirichlet(base, mesh, condensed);
    CHECK(sys.matrix.rows() == 2);
    CHECK(sys.pure_dirichlet_constraint());
    const Eigen::VectorXd x = solve(sys);
    CHECK(x.allFinite());

    const SolutionFields fields = solve_stokes(mesh, sol.data(), options(2, 4.0));
    CHECK(fields.pure_dirichlet);
    CHECK(std::abs(boundary_mean_pressure(mesh, fields)) <= 1e-10);
    CHECK(std::abs(fields.rho(0) - x(0)) <= 1e-12);
  }

  TEST_CASE("a shared face collects the contributions of both elements") {
    const Mesh mesh = generate_cartesian_mesh(Box::unit(2), 1, MeshFamily::Tri2);
    REQUIRE(mesh.num_elements() == 2);
    REQUIRE(mesh.count_internal_faces() == 1);
    const ManufacturedSolution sol = pure_dirichlet(wang_flow());
    const VoigtOps ops(2, 1.0);
    const int k = 2;
    const auto condensed = condense_all(mesh, k, ops, 4.0, sol.data(), Execution::Serial);
    const TraceSystem sys = assemble_global(mesh, condensed, sol.data(), k);
    const int nt = sys.dofs.num_trace;
    CHECK(nt == 2 * (k + 1));
    REQUIRE(condensed[0].trace_size() == nt);
    REQUIRE(condensed[1].trace_size() == nt);
    const Eigen::MatrixXd block = Eigen::MatrixXd(sys.matrix).topLeftCorner(nt, nt);
    CHECK(max_abs(block - condensed[0].K_uu - condensed[1].K_uu) <= 1e-13);
    CHECK(max_abs(condensed[0].K_uu) > 0.1);
    CHECK(max_abs(condensed[1].K_uu) > 0.1);
    CHECK(max_abs(sys.rhs.head(nt) - condensed[0].f_u - condensed[1].f_u) <= 1e-13);
  }

  TEST_CASE("Wang flow on tri2, n = 4, k = 2: every local problem is solved") {
    const ManufacturedSolution sol = wang_flow();
    const Mesh mesh = problem_mesh(sol, MeshFamily::Tri2, 2);
    const VoigtOps ops(2, sol.viscosity);
    const StokesData data = sol.data();
    const double tau = 40.0;
    const SolutionFields fields = solve_stokes(mesh, data, options(2, tau));
    CHECK(fields.stats.relative_residual <= 1e-10);
    double worst = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const LocalSystem sys = assemble_local(mesh, e, 2, ops, tau, data);
      const Eigen::VectorXd r =
          local_residual(sys, pack(sys.layout, fields.elements[e]), gather_traces(sys, fields), fields.rho(e));
      worst = std::max(worst, r.cwiseAbs().maxCoeff() / std::max(1.0, sys.load.cwiseAbs().maxCoeff()));
    }
    CHECK(worst <= 1e-9);
    CHECK(flux_residual(mesh, fields, ops, data, tau) <= 1e-9);
    CHECK(compatibility_residuals(mesh, fields, data.dirichlet).maxCoeff() <= 1e-9);
    CHECK(mean_pressure_residuals(mesh, fields).maxCoeff() <= 1e-10);
  }

  TEST_CASE("pure Dirichlet problems fix the boundary mean of the pressure") {
    for (MeshFamily family : {MeshFamily::Quad, MeshFamily::Tri2, MeshFamily::Tet}) {
      CAPTURE(to_string(family));
      const int nsd = dimension(family);
      const ManufacturedSolution sol =
          nsd == 2 ? pure_dirichlet(wang_flow()) : polynomial_flow(3, 3, 1.0, 9, false);
      const Mesh mesh = problem_mesh(sol, family, nsd == 2 ? 2 : 1);
      REQUIRE(!mesh.has_neumann());
      const SolutionFields fields = solve_stokes(mesh, sol.data(), options(2, 4.0));
      CHECK(fields.pure_dirichlet);
      CHECK(std::abs(boundary_mean_pressure(mesh, fields)) <= 1e-10);
    }
  }

  TEST_CASE("pure Dirichlet and mixed boundary conditions give the same velocity") {
    const ManufacturedSolution mixed = wang_flow();
    const ManufacturedSolution dirichlet = pure_dirichlet(mixed);
    const CaseResult a = run_case(mixed, MeshFamily::Quad, 2, 4.0, 3, Execution::Serial);
    const CaseResult b = run_case(dirichlet, MeshFamily::Quad, 2, 4.0, 3, Execution::Serial);
    std::vector<Eigen::MatrixXd> diff;
    for (size_t e = 0; e < a.fields.elements.size(); ++e)
      diff.push_back(a.fields.elements[e].u - b.fields.elements[e].u);
    const double gap = l2_error(a.mesh, diff, 2, [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(2).eval(); });
    CHECK(a.errors.u <= 1e-3);
    CHECK(b.errors.u <= 1e-3);
    CHECK(gap <= 2.0 * std::max(a.errors.u, b.errors.u));
  }

  TEST_CASE("the pure Dirichlet constraint is guarded") {
    const ManufacturedSolution sol = pure_dirichlet(wang_flow());
    const Mesh mesh = problem_mesh(sol, MeshFamily::Quad, 1);
    const VoigtOps ops(2, 1.0);
    const auto condensed = condense_all(mesh, 1, ops, 4.0, sol.data(), Execution::Serial);
    const TraceSystem once = enforce_pure_dirichlet(assemble_global(mesh, condensed, sol.data(), 1), mesh, condensed);
    CHECK_THROWS_AS(enforce_pure_dirichlet(once, mesh, condensed), std::logic_error);

    const Mesh neumann = problem_mesh(wang_flow(), MeshFamily::Quad, 1);
    const auto cn = condense_all(neumann, 1, ops, 4.0, wang_flow().data(), Execution::Serial);
    CHECK_THROWS_AS(enforce_pure_dirichlet(assemble_global(neumann, cn, wang_flow().data(), 1), neumann, cn),
                    std::invalid_argument);
  }

  TEST_CASE("dof accounting") {
    for (MeshFamily family : {MeshFamily::Quad, MeshFamily::Tri1, MeshFamily::Tri2, MeshFamily::Hex, MeshFamily::Tet})
      for (bool neumann : {true, false}) {
        CAPTURE(to_string(family));
        CAPTURE(neumann);
        const int nsd = dimension(family);
        const int k = 2;
        ManufacturedSolution sol = polynomial_flow(nsd, 2, 1.0, 4, neumann);
        const Mesh mesh = problem_mesh(sol, family, 1);
        const VoigtOps ops(nsd, 1.0);
        const auto condensed = condense_all(mesh, k, ops, 4.0, sol.data(), Execution::Serial);
        TraceSystem sys = assemble_global(mesh, condensed, sol.data(), k);
        if (!mesh.has_neumann()) sys = enforce_pure_dirichlet(sys, mesh, condensed);
        const CellType face_type = mesh.face(0).type;
        const int nf = basis_size(face_type, k);
        const int open_faces = mesh.num_faces() - mesh.count_faces(BoundaryTag::Dirichlet);
        const int expected = nsd * nf * open_faces + mesh.num_elements() + (neumann ? 0 : 1);
        CHECK(sys.dofs.size() == expected);
        CHECK(sys.matrix.rows() == expected);
        CHECK(sys.matrix.cols() == expected);
      }
  }

  TEST_CASE("the global matrix is symmetric") {
    for (MeshFamily family : {MeshFamily::Quad, MeshFamily::Tri1, MeshFamily::Tri2, MeshFamily::Hex, MeshFamily::Tet})
      for (int k : {1, 3}) {
        CAPTURE(to_string(family));
        CAPTURE(k);
        const int nsd = dimension(family);
        const ManufacturedSolution sol = polynomial_flow(nsd, 2, 0.9, 6, k == 1);
        const Mesh mesh = problem_mesh(sol, family, 1);
        const VoigtOps ops(nsd, sol.viscosity);
        const auto condensed = condense_all(mesh, k, ops, 4.0, sol.data(), Execution::Serial);
        TraceSystem sys = assemble_global(mesh, condensed, sol.data(), k);
        if (!mesh.has_neumann()) sys = enforce_pure_dirichlet(sys, mesh, condensed);
        CHECK(symmetry_defect(sys.matrix) <= 1e-10);
      }
  }

  TEST_CASE("zero data gives the zero solution") {
    for (bool neumann : {true, false}) {
      ManufacturedSolution sol = wang_flow().scaled(1.0);
      const Mesh mesh = problem_mesh(neumann ? sol : pure_dirichlet(sol), MeshFamily::Tri1, 2);
      StokesData data;
      data.nsd = 2;
      data.source = [](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(2).eval(); };
      data.dirichlet = data.source;
      data.traction = [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(2).eval(); };
      const SolutionFields fields = solve_stokes(mesh, data, options(2, 4.0));
      double biggest = max_abs(fields.rho);
      for (const auto& f : fields.elements) biggest = std::max({biggest, max_abs(f.L), max_abs(f.u), max_abs(f.p)});
      for (const auto& t : fields.face_traces) biggest = std::max(biggest, max_abs(t));
      CHECK(biggest == 0.0);
    }
  }

  TEST_CASE("degree-k polynomial solutions are reproduced") {
    for (MeshFamily family : {MeshFamily::Quad, MeshFamily::Tri1, MeshFamily::Tet})
      for (int k : {1, 2}) {
        CAPTURE(to_string(family));
        CAPTURE(k);
        const int nsd = dimension(family);
        const ManufacturedSolution sol = polynomial_flow(nsd, k, 1.0, 20 + k);
        const CaseResult r = run_case(sol, family, k, 4.0, nsd == 2 ? 2 : 1, Execution::Serial);
        CHECK(r.errors.u <= 1e-8);
        CHECK(r.errors.p <= 1e-8);
        CHECK(r.errors.L <= 1e-8);
      }
  }

  TEST_CASE("element reordering leaves the solution unchanged") {
    const ManufacturedSolution sol = wang_flow();
    const Mesh mesh = problem_mesh(sol, MeshFamily::Tri2, 2);
    std::vector<int> perm(mesh.num_elements());
    std::iota(perm.begin(), perm.end(), 0);
    for (size_t i = 0; i < perm.size(); ++i) std::swap(perm[i], perm[(7 * i + 3) % perm.size()]);
    const Mesh permuted = permute_elements(mesh, perm);
    const SolutionFields a = solve_stokes(mesh, sol.data(), options(2, 40.0));
    const SolutionFields b = solve_stokes(permuted, sol.data(), options(2, 40.0));
    double diff = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      diff = std::max(diff, max_abs(b.elements[e].L - a.elements[perm[e]].L));
      diff = std::max(diff, max_abs(b.elements[e].u - a.elements[perm[e]].u));
      diff = std::max(diff, max_abs(b.elements[e].p - a.elements[perm[e]].p));
      diff = std::max(diff, std::abs(b.rho(e) - a.rho(perm[e])));
    }
    CHECK(diff <= 1e-10);
  }

  TEST_CASE("serial and parallel execution agree") {
    const ManufacturedSolution sol = exp_flow_3d();
    const Mesh mesh = problem_mesh(sol, MeshFamily::Hex, 1);
    const SolutionFields a = solve_stokes(mesh, sol.data(), options(2, 4.0, Execution::Serial));
    const SolutionFields b = solve_stokes(mesh, sol.data(), options(2, 4.0, Execution::Parallel));
    CHECK(max_field_difference(a, b) <= 1e-14);
  }

  TEST_CASE("both direct solvers agree") {
    for (bool neumann : {true, false}) {
      CAPTURE(neumann);
      const ManufacturedSolution sol = neumann ? wang_flow() : pure_dirichlet(wang_flow());
      const Mesh mesh = problem_mesh(sol, MeshFamily::Tri1, 2);
      const SolutionFields a = solve_stokes(mesh, sol.data(), options(2, 4.0, Execution::Serial, LinearSolver::SparseLU));
      const SolutionFields b =
          solve_stokes(mesh, sol.data(), options(2, 4.0, Execution::Serial, LinearSolver::BlockCholesky));
      CHECK(a.stats.method == to_string(LinearSolver::SparseLU));
      CHECK(b.stats.method == to_string(LinearSolver::BlockCholesky));
      CHECK(max_field_difference(a, b) <= 1e-10);
    }
  }

  TEST_CASE("solver statistics") {
    const ManufacturedSolution sol = wang_flow();
    const Mesh mesh = problem_mesh(sol, MeshFamily::Quad, 2);
    const SolutionFields f = solve_stokes(mesh, sol.data(), options(1, 4.0));
    CHECK(f.stats.rho_dofs == mesh.num_elements());
    CHECK(f.stats.multiplier_dofs == 0);
    CHECK(f.stats.total_dofs == f.stats.trace_dofs + f.stats.rho_dofs);
    CHECK(f.stats.nonzeros > 0);
    CHECK(f.stats.relative_residual <= 1e-10);
  }
}
