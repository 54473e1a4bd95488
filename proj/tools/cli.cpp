#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "CLI11.hpp"

#include "hdg/diagnostics.hpp"
#include "hdg/global_solver.hpp"
#include "hdg/identities.hpp"
#include "hdg/mesh_io.hpp"
#include "hdg/report.hpp"

namespace hdg::cli {

namespace {

// Validation failures are reported as usage errors (exit 2).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("not an integer: '" + s + "'");
  return v;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

MeshFamily default_family(Problem p) { return p == Problem::Exp3d ? MeshFamily::Tet : MeshFamily::Quad; }

Execution policy(const RunConfig& c) { return c.serial ? Execution::Serial : Execution::Parallel; }

std::filesystem::path output_dir(const RunConfig& c) {
  if (const char* env = std::getenv("HDG_OUTPUT_DIR"); env && *env) return env;
  return c.output_dir;
}

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
}

nlohmann::json stats_json(const SolverStats& stats, bool timings) {
  nlohmann::json j = to_json(stats);
  if (!timings) {
    j.erase("factorization_seconds");
    j.erase("solve_seconds");
  }
  return j;
}

void validate(const RunConfig& c) {
  const int dim = dimension(c.family);
  if ((c.problem == Problem::Wang2d && dim != 2) || (c.problem == Problem::Exp3d && dim != 3))
    throw UsageError("family " + std::string(to_string(c.family)) + " does not match problem " +
                     std::string(to_string(c.problem)));
  for (int k : c.degrees)
    if (k < 1 || k > 4) throw UsageError("degree k must lie in 1..4");
  for (int l : c.levels)
    if (l < 0 || l > 10) throw UsageError("level must lie in 0..10");
  for (double t : c.taus)
    if (!(t > 0.0)) throw UsageError("tau must be positive");
  if (c.threads < 0) throw UsageError("threads must be non-negative");
  if (c.max_degree < 1 || c.max_degree > 5) throw UsageError("max degree must lie in 1..5");
}

// Acceptance thresholds for convergence studies of smooth solutions.
struct Thresholds {
  double primal;
  double ustar;
};
Thresholds thresholds(MeshFamily family) {
  return dimension(family) == 3 ? Thresholds{0.85, 1.7} : Thresholds{0.9, 1.8};
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const int k = c.degrees.front();
  const int level = c.levels.front();
  const double tau = c.taus.empty() ? default_tau(c.family) : c.taus.front();
  const ManufacturedSolution sol = make_problem(c.problem, dimension(c.family), k, c.seed);
  const CaseResult r = run_case(sol, c.family, k, tau, level, policy(c));

  nlohmann::json summary = {{"problem", std::string(to_string(c.problem))},
                            {"family", std::string(to_string(c.family))},
                            {"k", k},
                            {"tau", tau},
                            {"level", level},
                            {"h", r.h},
                            {"dofs", r.dofs},
                            {"errors", to_json(r.errors)},
                            {"solver", stats_json(r.fields.stats, c.timings)}};
  if (c.timings) summary["seconds"] = r.seconds;
  out << summary.dump(2) << '\n';

  if (const auto dir = output_dir(c); !dir.empty()) {
    write_file(dir, "summary.json", summary.dump(2) + "\n");
    write_file(dir, "mesh.json", mesh_to_json(r.mesh).dump() + "\n");
    write_file(dir, "fields.json", fields_to_json(r.mesh, r.fields, r.ustar).dump() + "\n");
    if (c.export_vtk) {
      std::filesystem::create_directories(dir);
      write_vtk((dir / "solution.vtk").string(), r.mesh, r.fields, r.ustar);
    }
  }
  if (c.assert_mode && c.problem == Problem::Polynomial) {
    const ErrorSet& e = r.errors;
    if (!(e.u <= 1e-8 && e.p <= 1e-8 && e.L <= 1e-8)) {
      err << "assert: polynomial solution not reproduced to 1e-8\n";
      return kFailure;
    }
  }
  return kOk;
}

int cmd_convergence(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.levels.size() < 3) throw UsageError("--levels needs at least three consecutive levels");
  const std::optional<double> tau = c.taus.empty() ? std::nullopt : std::optional<double>(c.taus.front());
  const ConvergenceReport report = convergence_study(c.problem, c.family, c.degrees, tau, c.levels, policy(c), c.seed);
  const std::string csv = convergence_csv(report);
  const std::string slopes = slopes_csv(report);
  out << csv << '\n' << slopes;
  if (const auto dir = output_dir(c); !dir.empty()) {
    write_file(dir, "convergence.csv", csv);
    write_file(dir, "slopes.csv", slopes);
    write_file(dir, "convergence.json", to_json(report).dump(2) + "\n");
  }

  int status = kOk;
  for (const auto& s : report.series)
    if (!s.failure.empty()) {
      err << "series " << to_string(s.family) << " k=" << s.degree << " failed: " << s.failure << '\n';
      status = kFailure;
    }
  if (!c.assert_mode || status != kOk) return status;

  for (const auto& s : report.series) {
    const auto& finest = s.levels.back().errors;
    bool ok = true;
    if (c.problem == Problem::Polynomial) {
      for (const auto& l : s.levels) ok = ok && l.errors.u <= 1e-8 && l.errors.p <= 1e-8 && l.errors.L <= 1e-8;
    } else {
      const Thresholds t = thresholds(s.family);
      const double k = s.degree;
      ok = s.slopes.u >= k + t.primal && s.slopes.p >= k + t.primal && s.slopes.L >= k + t.primal &&
           s.slopes.ustar >= k + t.ustar && finest.ustar < finest.u;
    }
    if (!ok) {
      err << "assert: " << to_string(s.family) << " k=" << s.degree << " misses the acceptance thresholds\n";
      status = kFailure;
    }
  }
  return status;
}

int cmd_tau_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const std::vector<double> taus = c.taus.empty() ? std::vector<double>{0.1, 1, 4, 10, 100, 1000, 10000} : c.taus;
  const int k = c.degrees.front(), level = c.levels.front();
  const std::vector<TauRow> rows = tau_sweep(c.problem, c.family, k, level, taus, policy(c), c.seed);
  const std::string csv = tau_sweep_csv(c.family, k, level, rows);
  out << csv;
  if (const auto dir = output_dir(c); !dir.empty()) {
    write_file(dir, "tau_sweep.csv", csv);
    write_file(dir, "tau_sweep.json", tau_sweep_json(c.family, k, level, rows).dump(2) + "\n");
  }
  int status = kOk;
  for (const auto& r : rows)
    if (!r.failure.empty()) {
      err << "tau " << format_double(r.tau) << " failed: " << r.failure << '\n';
      status = kFailure;
    }
  if (!c.assert_mode || status != kOk) return status;

  std::size_t best = 0, at4 = rows.size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].errors.u < rows[best].errors.u) best = i;
    if (rows[i].tau == 4.0) at4 = i;
  }
  bool ok = best != 0 && best + 1 != rows.size();
  if (at4 < rows.size()) ok = ok && rows.back().errors.L > rows[at4].errors.L;
  if (!ok) {
    err << "assert: tau sweep does not show an interior minimum of err(u) and growth of err(L)\n";
    return kFailure;
  }
  return kOk;
}

int cmd_check_identities(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const IdentitySweep sweep = sweep_identities(c.max_degree, c.seed);
  const std::string text = to_json(sweep).dump(2) + "\n";
  out << text;
  if (const auto dir = output_dir(c); !dir.empty()) write_file(dir, "identities.json", text);
  if (c.assert_mode && !(sweep.max_gauss <= 1e-11 && sweep.max_stokes <= 1e-11)) {
    err << "assert: identity residual above 1e-11\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots)), hi = to_int(text.substr(dots + 2));
    if (hi < lo) throw UsageError("empty range '" + text + "'");
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
  }
  for (const auto& part : split(text, ',')) out.push_back(to_int(part));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(to_double(part));
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"HDG solver for Stokes flow in Cauchy-stress form with Voigt notation", "hdg"};
  app.require_subcommand(1, 1);

  std::string problem, family, degrees, level, levels, taus, output;
  RunConfig cfg;
  long long seed = 1;

  const auto common = [&](CLI::App* sub, bool problem_required) {
    auto* p = sub->add_option("--problem", problem, "wang2d | exp3d | polynomial");
    if (problem_required) p->required();
    sub->add_option("--family", family, "quad | tri1 | tri2 | hex | tet");
    sub->add_option("--tau", taus, "stabilization (comma list for tau-sweep)");
    sub->add_option("--output", output, "output directory (HDG_OUTPUT_DIR overrides)");
    sub->add_option("--threads", cfg.threads, "OpenMP threads (0: runtime default)");
    sub->add_flag("--serial", cfg.serial, "use the serial reference kernels");
    sub->add_flag("--assert", cfg.assert_mode, "exit 1 when acceptance thresholds are missed");
    sub->add_flag("--timings", cfg.timings, "include wall-clock timings in the output");
    sub->add_option("--seed", seed, "seed of the randomized problems and checks");
  };

  auto* solve_cmd = app.add_subcommand("solve", "single solve with error summary");
  common(solve_cmd, true);
  solve_cmd->add_option("--k", degrees, "polynomial degree");
  solve_cmd->add_option("--level", level, "refinement level (n = 2^level)");
  solve_cmd->add_flag("--vtk", cfg.export_vtk, "also write solution.vtk to the output directory");

  auto* conv_cmd = app.add_subcommand("convergence", "h-convergence study");
  common(conv_cmd, true);
  conv_cmd->add_option("--k", degrees, "degree or range, e.g. 1..3");
  conv_cmd->add_option("--levels", levels, "level range, e.g. 1..4")->required();

  auto* tau_cmd = app.add_subcommand("tau-sweep", "errors as a function of tau");
  common(tau_cmd, false);
  tau_cmd->add_option("--k", degrees, "polynomial degree");
  tau_cmd->add_option("--level", level, "refinement level (n = 2^level)");

  auto* id_cmd = app.add_subcommand("check-identities", "generalized Gauss and Stokes identities");
  id_cmd->add_option("--max-degree", cfg.max_degree, "largest polynomial degree");
  id_cmd->add_option("--seed", seed, "seed of the random fields");
  id_cmd->add_option("--output", output, "output directory (HDG_OUTPUT_DIR overrides)");
  id_cmd->add_flag("--assert", cfg.assert_mode, "exit 1 when a residual exceeds 1e-11");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (seed < 0) throw UsageError("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    if (!problem.empty()) cfg.problem = parse_problem(problem);
    cfg.family = family.empty() ? default_family(cfg.problem) : parse_mesh_family(family);
    if (!degrees.empty()) cfg.degrees = parse_int_list(degrees);
    if (!level.empty()) cfg.levels = {to_int(level)};
    if (!levels.empty()) cfg.levels = parse_int_list(levels);
    if (!taus.empty()) cfg.taus = parse_double_list(taus);
    cfg.output_dir = output;
    validate(cfg);
    set_thread_count(cfg.threads);
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(cfg, out, err);
    if (conv_cmd->parsed()) return cmd_convergence(cfg, out, err);
    if (tau_cmd->parsed()) return cmd_tau_sweep(cfg, out, err);
    return cmd_check_identities(cfg, out, err);
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace hdg::cli
