#include "hdg/global_solver.hpp"

#include <chrono>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/CholmodSupport>
#include <amd.h>
#include <umfpack.h>

#include "hdg/ref_element.hpp"
#include "hdg/geometry.hpp"
#include "hdg/quadrature.hpp"

namespace hdg {

namespace {

using Triplet = Eigen::Triplet<double>;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Global index of every column of the element trace block.
std::vector<int> trace_indices(const CondensedElement& ce, const DofMap& dofs) {
  std::vector<int> idx;
  idx.reserve(ce.trace_size());
  for (const auto& tb : ce.traces) {
    const int off = dofs.face_offset[tb.face];
    if (off < 0 || dofs.face_size[tb.face] != tb.size)
      throw std::logic_error("dof map inconsistent with element " + std::to_string(ce.element) +
                             " on face " + std::to_string(tb.face));
    for (int j = 0; j < tb.size; ++j) idx.push_back(off + j);
  }
  return idx;
}

}  // namespace

DofMap build_dof_map(const Mesh& mesh, int nsd, int degree) {
  DofMap d;
  d.nsd = nsd;
  d.degree = degree;
  d.face_offset.assign(mesh.num_faces(), -1);
  d.face_size.assign(mesh.num_faces(), 0);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.tag == BoundaryTag::Dirichlet) continue;
    d.face_offset[f] = d.num_trace;
    d.face_size[f] = nsd * basis_size(face.type, degree);
    d.num_trace += d.face_size[f];
  }
  d.num_elements = mesh.num_elements();
  return d;
}

std::vector<CondensedElement> condense_all(const Mesh& mesh, int degree, const VoigtOps& ops, double tau,
                                           const StokesData& data, Execution policy) {
  std::vector<CondensedElement> out(mesh.num_elements());
  for_each_element(policy, mesh.num_elements(), [&](int e) {
    out[e] = condense(assemble_local(mesh, e, degree, ops, tau, data));
  });
  return out;
}

TraceSystem assemble_global(const Mesh& mesh, const std::vector<CondensedElement>& condensed,
                            const StokesData& data, int degree) {
  if (static_cast<int>(condensed.size()) != mesh.num_elements())
    throw std::logic_error("assemble_global: expected one condensed element per mesh element");
  TraceSystem sys;
  sys.dofs = build_dof_map(mesh, data.nsd, degree);
  const DofMap& dofs = sys.dofs;
  const int n = dofs.size();
  sys.rhs = Eigen::VectorXd::Zero(n);

  std::size_t reserve = 0;
  for (const auto& ce : condensed) {
    const std::size_t t = ce.trace_size();
    reserve += t * t + 2 * t + 1;
  }
  std::vector<Triplet> triplets;
  triplets.reserve(reserve);

  for (const auto& ce : condensed) {
    const std::vector<int> idx = trace_indices(ce, dofs);
    const int r = dofs.rho(ce.element);
    const int nt = static_cast<int>(idx.size());
    for (int j = 0; j < nt; ++j) {
      for (int i = 0; i < nt; ++i) triplets.emplace_back(idx[i], idx[j], ce.K_uu(i, j));
      triplets.emplace_back(idx[j], r, ce.K_ur(j));
      triplets.emplace_back(r, idx[j], ce.K_ur(j));
      sys.rhs(idx[j]) += ce.f_u(j);
    }
    triplets.emplace_back(r, r, ce.K_rr);
    sys.rhs(r) += ce.f_r;
  }

  // Neumann load <w, t>.
  const int order = default_quadrature_order(degree);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).tag != BoundaryTag::Neumann) continue;
    const FaceQuadrature fq = tabulate_face(mesh, f, degree, order);
    const int nf = fq.trace_values.cols();
    for (int q = 0; q < fq.weights.size(); ++q) {
      const Eigen::VectorXd t =
          data.traction(fq.points.row(q).transpose(), fq.normals.row(q).transpose());
      for (int c = 0; c < data.nsd; ++c)
        sys.rhs.segment(dofs.face_offset[f] + c * nf, nf) +=
            fq.weights(q) * t(c) * fq.trace_values.row(q).transpose();
    }
  }

  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

TraceSystem enforce_pure_dirichlet(TraceSystem sys, const Mesh& mesh,
                                   const std::vector<CondensedElement>& condensed) {
  if (mesh.has_neumann())
    throw std::invalid_argument("enforce_pure_dirichlet: mesh has Neumann faces");
  if (sys.pure_dirichlet_constraint())
    throw std::logic_error("enforce_pure_dirichlet: constraint already applied");

  const int old_size = sys.dofs.size();
  sys.dofs.multiplier = old_size;
  const int m = old_size;

  double boundary = 0.0;
  for (const auto& ce : condensed) boundary += ce.domain_boundary_measure;
  if (!(boundary > 0.0)) throw std::logic_error("enforce_pure_dirichlet: mesh has no boundary");

  // Row g: (1/|dOmega|) sum_e m_e^T p_e with p_e = Z_p [uhat; rho; 1].
  Eigen::VectorXd g = Eigen::VectorXd::Zero(old_size);
  double g_const = 0.0;
  for (const auto& ce : condensed) {
    if (ce.domain_boundary_measure <= 0.0) continue;
    const LocalLayout& lay = ce.layout;
    const int nt = ce.trace_size();
    const Eigen::VectorXd row =
        ce.recovery.middleRows(lay.p(), lay.n).transpose() * ce.domain_boundary_moment / boundary;
    const std::vector<int> idx = trace_indices(ce, sys.dofs);
    for (int j = 0; j < nt; ++j) g(idx[j]) += row(j);
    g(sys.dofs.rho(ce.element)) += row(nt);
    g_const += row(nt + 1);
  }

  std::vector<Triplet> triplets;
  triplets.reserve(sys.matrix.nonZeros() + 2 * old_size);
  for (int k = 0; k < sys.matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, k); it; ++it)
      triplets.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < old_size; ++i)
    if (g(i) != 0.0) {
      triplets.emplace_back(m, i, g(i));
      triplets.emplace_back(i, m, g(i));
    }
  sys.matrix.resize(old_size + 1, old_size + 1);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  sys.rhs.conservativeResize(old_size + 1);
  sys.rhs(m) = -g_const;
  return sys;
}

const char* to_string(LinearSolver solver) {
  switch (solver) {
    case LinearSolver::Auto: return "auto";
    case LinearSolver::SparseLU: return "sparse-lu";
    case LinearSolver::BlockCholesky: return "block-cholesky";
  }
  return "unknown";
}

namespace {

class Factorization {
 public:
  virtual ~Factorization() = default;
  virtual Eigen::VectorXd apply(const Eigen::VectorXd& b) = 0;
};

// Fill-reducing order for the trace block with every constraint unknown
// (mean pressure, multiplier) placed right after the last trace dof it
// couples to, so that its pivot is taken once the coupled trace block has
// been eliminated and is nonzero.
std::vector<int> constrained_ordering(const Eigen::SparseMatrix<double>& matrix, int num_trace) {
  const int n = static_cast<int>(matrix.rows());
  Eigen::SparseMatrix<double> trace = matrix.topLeftCorner(num_trace, num_trace);
  trace.makeCompressed();
  std::vector<int> amd(num_trace);
  if (num_trace > 0) {
    const int status = amd_order(num_trace, trace.outerIndexPtr(), trace.innerIndexPtr(), amd.data(),
                                 nullptr, nullptr);
    if (status != AMD_OK && status != AMD_OK_BUT_JUMBLED)
      throw SolverError("AMD ordering of the trace block failed");
  }
  std::vector<int> position(num_trace);
  for (int i = 0; i < num_trace; ++i) position[amd[i]] = i;
  std::vector<std::vector<int>> after(std::max(num_trace, 1));
  for (int j = num_trace; j < n; ++j) {
    int last = -1;
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, j); it; ++it)
      if (it.row() < num_trace) last = std::max(last, position[it.row()]);
    after[last >= 0 ? last : std::max(num_trace - 1, 0)].push_back(j);
  }
  std::vector<int> order;
  order.reserve(n);
  for (int i = 0; i < num_trace; ++i) {
    order.push_back(amd[i]);
    order.insert(order.end(), after[i].begin(), after[i].end());
  }
  if (num_trace == 0) order = after[0];
  return order;
}

class SparseLUFactorization final : public Factorization {
 public:
  SparseLUFactorization(const Eigen::SparseMatrix<double>& matrix, int num_trace,
                        const std::string& diagnostics)
      : matrix_(matrix) {
    matrix_.makeCompressed();
    const int n = static_cast<int>(matrix_.rows());
    std::vector<int> order = constrained_ordering(matrix_, num_trace);
    umfpack_di_defaults(control_);
    control_[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
    double info[UMFPACK_INFO];
    void* symbolic = nullptr;
    int status = umfpack_di_qsymbolic(n, n, matrix_.outerIndexPtr(), matrix_.innerIndexPtr(),
                                      matrix_.valuePtr(), order.data(), &symbolic, control_, info);
    if (status == UMFPACK_OK)
      status = umfpack_di_numeric(matrix_.outerIndexPtr(), matrix_.innerIndexPtr(), matrix_.valuePtr(),
                                  symbolic, &numeric_, control_, info);
    umfpack_di_free_symbolic(&symbolic);
    if (status != UMFPACK_OK)
      throw SolverError("global factorization failed, UMFPACK status " + std::to_string(status) +
                        diagnostics);
  }
  ~SparseLUFactorization() override { umfpack_di_free_numeric(&numeric_); }
  SparseLUFactorization(const SparseLUFactorization&) = delete;
  SparseLUFactorization& operator=(const SparseLUFactorization&) = delete;

  Eigen::VectorXd apply(const Eigen::VectorXd& b) override {
    Eigen::VectorXd x(b.size());
    double info[UMFPACK_INFO];
    const int status = umfpack_di_solve(UMFPACK_A, matrix_.outerIndexPtr(), matrix_.innerIndexPtr(),
                                        matrix_.valuePtr(), x.data(), b.data(), numeric_, control_, info);
    if (status != UMFPACK_OK) x.setConstant(std::numeric_limits<double>::quiet_NaN());
    return x;
  }

 private:
  Eigen::SparseMatrix<double> matrix_;
  double control_[UMFPACK_CONTROL];
  void* numeric_ = nullptr;
};

// [A B; B^T C] with A the trace block: A = L L^T, then the dense Schur
// complement C - B^T A^{-1} B over the mean-pressure and multiplier unknowns.
class BlockCholeskyFactorization final : public Factorization {
 public:
  BlockCholeskyFactorization(const Eigen::SparseMatrix<double>& matrix, int num_trace,
                             const std::string& diagnostics)
      : nt_(num_trace), m_(static_cast<int>(matrix.rows()) - num_trace) {
    const Eigen::SparseMatrix<double> a = matrix.topLeftCorner(nt_, nt_);
    b_ = matrix.topRightCorner(nt_, m_);
    llt_.compute(a);
    if (llt_.info() != Eigen::Success)
      throw SolverError("trace block is not positive definite" + diagnostics);

    Eigen::MatrixXd schur = matrix.bottomRightCorner(m_, m_);
    constexpr int kChunk = 512;
    for (int j0 = 0; j0 < m_; j0 += kChunk) {
      const int c = std::min(kChunk, m_ - j0);
      const Eigen::MatrixXd rhs = b_.middleCols(j0, c);
      const Eigen::MatrixXd x = llt_.solve(rhs);
      schur.middleCols(j0, c) -= b_.transpose() * x;
    }
    schur_.compute(schur);
    if (!(schur_.rcond() > 1e2 * std::numeric_limits<double>::epsilon()))
      throw SolverError("singular mean-pressure Schur complement" + diagnostics);
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& rhs) override {
    const Eigen::VectorXd bu = rhs.head(nt_);
    const Eigen::VectorXd z = llt_.solve(bu);
    Eigen::VectorXd x(nt_ + m_);
    x.tail(m_) = schur_.solve(rhs.tail(m_) - b_.transpose() * z);
    x.head(nt_) = llt_.solve(bu - b_ * x.tail(m_));
    return x;
  }

 private:
  int nt_;
  int m_;
  Eigen::SparseMatrix<double> b_;
  Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt_;
  Eigen::PartialPivLU<Eigen::MatrixXd> schur_;
};

}  // namespace

Eigen::VectorXd solve(const TraceSystem& sys, SolverStats* stats, LinearSolver method) {
  const int n = sys.dofs.size();
  if (sys.matrix.rows() != n || sys.rhs.size() != n)
    throw std::logic_error("solve: system size does not match its dof map");
  const int constraints = n - sys.dofs.num_trace;
  if (method == LinearSolver::Auto) method = LinearSolver::SparseLU;
  if (method == LinearSolver::BlockCholesky && constraints > kMaxSchurSize)
    throw std::invalid_argument("solve: " + std::to_string(constraints) +
                                " constraint unknowns exceed the block Cholesky limit");
  SolverStats st;
  st.method = to_string(method);
  st.trace_dofs = sys.dofs.num_trace;
  st.rho_dofs = sys.dofs.num_elements;
  st.multiplier_dofs = sys.pure_dirichlet_constraint() ? 1 : 0;
  st.total_dofs = n;
  st.nonzeros = sys.matrix.nonZeros();

  const std::string diagnostics =
      " (" + st.method + ", trace dofs " + std::to_string(st.trace_dofs) + ", rho dofs " +
      std::to_string(st.rho_dofs) + ", multiplier dofs " + std::to_string(st.multiplier_dofs) +
      ", nnz " + std::to_string(st.nonzeros) + ")";

  auto start = Clock::now();
  std::unique_ptr<Factorization> factor;
  if (method == LinearSolver::BlockCholesky)
    factor = std::make_unique<BlockCholeskyFactorization>(sys.matrix, sys.dofs.num_trace, diagnostics);
  else
    factor = std::make_unique<SparseLUFactorization>(sys.matrix, sys.dofs.num_trace, diagnostics);
  st.factorization_seconds = seconds_since(start);

  start = Clock::now();
  Eigen::VectorXd x = factor->apply(sys.rhs);
  const double bnorm = sys.rhs.norm();
  const auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return sys.rhs - sys.matrix * v;
  };
  Eigen::VectorXd r = residual(x);
  double rel = bnorm > 0.0 ? r.norm() / bnorm : r.norm();
  if (rel > 1e-12) {
    x += factor->apply(r);
    r = residual(x);
    rel = bnorm > 0.0 ? r.norm() / bnorm : r.norm();
  }
  st.solve_seconds = seconds_since(start);
  st.relative_residual = rel;
  if (!x.allFinite() || !(rel <= 1e-10)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", rel);
    throw SolverError(std::string("global solve failed, relative residual ") + buf + diagnostics);
  }
  if (stats) *stats = st;
  return x;
}

SolutionFields reconstruct_all(const Mesh& mesh, const std::vector<CondensedElement>& condensed,
                               const DofMap& dofs, const Eigen::VectorXd& x, Execution policy) {
  SolutionFields out;
  out.nsd = dofs.nsd;
  out.degree = dofs.degree;
  out.pure_dirichlet = dofs.multiplier >= 0;
  out.rho = x.segment(dofs.num_trace, dofs.num_elements);
  out.face_traces.resize(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (dofs.face_offset[f] < 0) continue;
    const int nf = dofs.face_size[f] / dofs.nsd;
    Eigen::MatrixXd t(dofs.nsd, nf);
    for (int c = 0; c < dofs.nsd; ++c) t.row(c) = x.segment(dofs.face_offset[f] + c * nf, nf).transpose();
    out.face_traces[f] = std::move(t);
  }
  out.elements.resize(condensed.size());
  for_each_element(policy, static_cast<int>(condensed.size()), [&](int e) {
    const CondensedElement& ce = condensed[e];
    const std::vector<int> idx = trace_indices(ce, dofs);
    Eigen::VectorXd local(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) local(j) = x(idx[j]);
    out.elements[e] = reconstruct(ce, local, x(dofs.rho(ce.element)));
  });
  return out;
}

SolutionFields solve_stokes(const Mesh& mesh, const StokesData& data, const SolverOptions& opt) {
  if (mesh.dim() != data.nsd)
    throw std::invalid_argument("solve_stokes: mesh dimension does not match the problem");
  const VoigtOps ops(data.nsd, data.viscosity);
  const auto condensed = condense_all(mesh, opt.degree, ops, opt.tau, data, opt.execution);
  TraceSystem sys = assemble_global(mesh, condensed, data, opt.degree);
  if (!mesh.has_neumann()) sys = enforce_pure_dirichlet(std::move(sys), mesh, condensed);
  SolverStats stats;
  const Eigen::VectorXd x = solve(sys, &stats, opt.linear_solver);
  SolutionFields fields = reconstruct_all(mesh, condensed, sys.dofs, x, opt.execution);
  fields.stats = stats;
  return fields;
}

}  // namespace hdg
