#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coopqed/analysis.hpp"
#include "coopqed/config.hpp"

namespace coopqed {

/// Environment variable that overrides the default output directory.
inline constexpr const char* kOutputDirEnv = "COOPQED_OUTPUT_DIR";

/// explicit_dir if given, else $COOPQED_OUTPUT_DIR, else "./out".
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& explicit_dir);

/// Throws Error(Validation) listing every violated invariant of the
/// config's parameters and initial state.
void check_config(const RunConfig& config);

/// Derived quantities before any integration: detunings, dressed energies
/// and coefficients for n = 0, 1, coupling and detuning matrices,
/// discriminant sign and the integration step budget.
std::string describe(const RunConfig& config);

struct RunSummary {
  std::size_t samples = 0;
  long long substeps_per_sample = 0;
  Detection c2;
  Detection c3;
  Detection async;
  std::optional<double> a_bar;
  std::size_t clamp_count = 0;
  std::vector<std::string> warnings;
};

/// Writes trajectory.csv, measures.csv and summary.json into out_dir.
/// Throws Error(Validation), Error(StepTooLarge), Error(NormDrift) or
/// Error(Io); NoPlateau only produces warnings.
RunSummary run(const RunConfig& config, const std::filesystem::path& out_dir);

struct SweepRunSummary {
  SweepResult result;
  std::vector<std::string> warnings;
};

/// One point_NNN directory per axis value (each with point.cfg, the CSVs
/// and summary.json) plus the aggregate sweep.csv with header
/// eta_over_Omega,tau_D,A_bar,converged. jobs = 0 uses the config value.
/// Throws Error(Validation) if the config has no [sweep] section.
SweepRunSummary run_sweep(const RunConfig& config, const std::filesystem::path& out_dir, unsigned jobs = 0);

/// Config of a single sweep point, runnable on its own.
RunConfig sweep_point_config(const RunConfig& config, double axis_value);

std::string version();

}  // namespace coopqed
