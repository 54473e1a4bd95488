#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hdg/analysis.hpp"
#include "hdg/identities.hpp"

namespace hdg {

/// printf("%.17g"): round-trip exact text for doubles.
std::string format_double(double value);

/// Column header shared by convergence and tau-sweep tables.
inline constexpr const char* kCsvHeader = "family,k,tau,level,h,dofs,err_u,err_p,err_L,err_ustar";

std::string convergence_csv(const ConvergenceReport& report);
/// Failed tau values appear with nan errors.
std::string tau_sweep_csv(MeshFamily family, int degree, int level, const std::vector<TauRow>& rows);

/// Slope summary lines "family,k,tau,slope_u,slope_p,slope_L,slope_ustar".
std::string slopes_csv(const ConvergenceReport& report);

nlohmann::json to_json(const ErrorSet& errors);
nlohmann::json to_json(const SolverStats& stats);
nlohmann::json to_json(const ConvergenceReport& report);
nlohmann::json to_json(const IdentitySweep& sweep);
nlohmann::json tau_sweep_json(MeshFamily family, int degree, int level, const std::vector<TauRow>& rows);

}  // namespace hdg
