#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hdg/local_solver.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/mesh.hpp"
#include "hdg/parallel.hpp"

namespace hdg {

/// Global numbering: nsd * n_face trace unknowns per non-Dirichlet face
/// (component major, nodes in the face parametrization), then one mean
/// pressure per element, then the optional pure-Dirichlet multiplier.
struct DofMap {
  int nsd = 0;
  int degree = 0;
  std::vector<int> face_offset;  // -1 on Dirichlet faces
  std::vector<int> face_size;    // 0 on Dirichlet faces
  int num_trace = 0;
  int num_elements = 0;
  int multiplier = -1;

  int rho(int element) const { return num_trace + element; }
  int size() const { return num_trace + num_elements + (multiplier >= 0 ? 1 : 0); }
};

DofMap build_dof_map(const Mesh& mesh, int nsd, int degree);

/// Symmetric (indefinite) trace system in (uhat, rho[, multiplier]).
struct TraceSystem {
  DofMap dofs;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;

  bool pure_dirichlet_constraint() const { return dofs.multiplier >= 0; }
};

/// Direct method for the global system.
///
/// SparseLU factors the whole symmetric indefinite matrix with UMFPACK in an
/// AMD order of the trace block that defers each mean-pressure unknown until
/// its element faces are eliminated. BlockCholesky factors the (positive
/// definite) trace block with a supernodal Cholesky and handles the
/// mean-pressure and multiplier unknowns through their dense Schur
/// complement; it serves as an independent cross-check and refuses Schur
/// blocks larger than kMaxSchurSize. Auto selects SparseLU.
enum class LinearSolver { Auto, SparseLU, BlockCholesky };

inline constexpr int kMaxSchurSize = 8192;

const char* to_string(LinearSolver solver);

struct SolverStats {
  std::string method;
  int trace_dofs = 0;
  int rho_dofs = 0;
  int multiplier_dofs = 0;
  int total_dofs = 0;
  long nonzeros = 0;
  double factorization_seconds = 0.0;
  double solve_seconds = 0.0;
  double relative_residual = 0.0;
};

/// Per-element fields, single-valued face traces and element mean pressures.
struct SolutionFields {
  int nsd = 0;
  int degree = 0;
  std::vector<ElementFields> elements;
  std::vector<Eigen::MatrixXd> face_traces;  // nsd x n_face; empty on Dirichlet faces
  Eigen::VectorXd rho;
  bool pure_dirichlet = false;
  SolverStats stats;
};

/// Failure of the global factorization or solve.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Condenses every element (data-parallel under Execution::Parallel).
std::vector<CondensedElement> condense_all(const Mesh& mesh, int degree, const VoigtOps& ops, double tau,
                                           const StokesData& data, Execution policy);

/// Sums the element contributions and the Neumann traction load. Throws
/// std::logic_error on a dof-map inconsistency.
TraceSystem assemble_global(const Mesh& mesh, const std::vector<CondensedElement>& condensed,
                            const StokesData& data, int degree);

/// Adds the multiplier fixing the boundary mean of the pressure to zero,
/// expressed through the pressure recovery on boundary elements. Rejects
/// meshes with Neumann faces and systems that already carry the constraint.
TraceSystem enforce_pure_dirichlet(TraceSystem system, const Mesh& mesh,
                                   const std::vector<CondensedElement>& condensed);

/// Direct solve with one step of iterative refinement when the relative
/// residual exceeds 1e-12. Throws SolverError when factorization fails or the
/// residual stays above 1e-10.
Eigen::VectorXd solve(const TraceSystem& system, SolverStats* stats = nullptr,
                      LinearSolver method = LinearSolver::Auto);

SolutionFields reconstruct_all(const Mesh& mesh, const std::vector<CondensedElement>& condensed,
                               const DofMap& dofs, const Eigen::VectorXd& solution, Execution policy);

struct SolverOptions {
  int degree = 2;
  double tau = 4.0;
  Execution execution = Execution::Parallel;
  LinearSolver linear_solver = LinearSolver::Auto;
};

/// Full pipeline: condense, assemble (plus the pure-Dirichlet constraint when
/// the mesh has no Neumann face), solve and reconstruct.
SolutionFields solve_stokes(const Mesh& mesh, const StokesData& data, const SolverOptions& options);

}  // namespace hdg
