#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdg/analysis.hpp"

namespace hdg::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

/// Validated options shared by the subcommands.
struct RunConfig {
  Problem problem = Problem::Wang2d;
  MeshFamily family = MeshFamily::Quad;
  std::vector<int> degrees{2};
  std::vector<int> levels{3};
  std::vector<double> taus;  // empty: family default
  std::string output_dir;    // empty: stdout only
  bool export_vtk = false;
  bool assert_mode = false;
  bool timings = false;
  bool serial = false;
  int threads = 0;
  int max_degree = 3;
  std::uint64_t seed = 1;
};

/// "3", "1..3" or "0.1,1,4" style lists.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`. The output directory may be overridden by
/// the HDG_OUTPUT_DIR environment variable.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdg::cli
