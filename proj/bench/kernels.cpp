// Serial reference kernels against their OpenMP counterparts, and the two
// direct solvers of the global system.
#include <benchmark/benchmark.h>

#include "hdg/analysis.hpp"
#include "hdg/global_solver.hpp"
#include "hdg/postprocess.hpp"

namespace {

using namespace hdg;

struct Setup {
  ManufacturedSolution sol = wang_flow();
  Mesh mesh = problem_mesh(sol, MeshFamily::Quad, 4);
  StokesData data = sol.data();
  VoigtOps ops{2, 1.0};
};

Setup& setup() {
  static Setup s;
  return s;
}

void BM_Condense(benchmark::State& state) {
  const auto policy = state.range(0) ? Execution::Parallel : Execution::Serial;
  const int k = static_cast<int>(state.range(1));
  Setup& s = setup();
  for (auto _ : state) {
    auto condensed = condense_all(s.mesh, k, s.ops, 4.0, s.data, policy);
    benchmark::DoNotOptimize(condensed.data());
  }
  state.SetLabel(policy == Execution::Parallel ? "parallel" : "serial");
}

void BM_Postprocess(benchmark::State& state) {
  const auto policy = state.range(0) ? Execution::Parallel : Execution::Serial;
  const int k = static_cast<int>(state.range(1));
  Setup& s = setup();
  const SolutionFields fields = solve_stokes(s.mesh, s.data, {k, 4.0, Execution::Serial});
  for (auto _ : state) {
    auto ustar = postprocess_all(s.mesh, fields, s.ops, s.data.dirichlet, policy);
    benchmark::DoNotOptimize(ustar.elements.data());
  }
  state.SetLabel(policy == Execution::Parallel ? "parallel" : "serial");
}

void BM_GlobalSolve(benchmark::State& state) {
  const auto method = state.range(0) ? LinearSolver::BlockCholesky : LinearSolver::SparseLU;
  const int k = static_cast<int>(state.range(1));
  Setup& s = setup();
  const auto condensed = condense_all(s.mesh, k, s.ops, 4.0, s.data, Execution::Parallel);
  const TraceSystem system = assemble_global(s.mesh, condensed, s.data, k);
  for (auto _ : state) {
    Eigen::VectorXd x = solve(system, nullptr, method);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetLabel(to_string(method));
}

}  // namespace

BENCHMARK(BM_Condense)->ArgsProduct({{0, 1}, {1, 2, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Postprocess)->ArgsProduct({{0, 1}, {1, 2, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GlobalSolve)->ArgsProduct({{0, 1}, {1, 2, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
