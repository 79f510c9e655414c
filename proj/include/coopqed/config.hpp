#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coopqed/analysis.hpp"
#include "coopqed/dynamics.hpp"
#include "coopqed/params.hpp"

namespace coopqed {

enum class AxisSpacing { Linear, Log };

struct SweepSpec {
  double from = 0.0;  ///< eta / omega_l
  double to = 0.0;
  int points = 0;
  AxisSpacing spacing = AxisSpacing::Log;
  unsigned jobs = 1;
  SweepObservable observable = SweepObservable::Delay;

  std::vector<double> axis() const;
};

/// Which delay detections the run summary reports.
struct DetectSelection {
  bool c2 = true;
  bool c3 = true;
  bool async = true;
};

/// Everything a run or sweep needs, parsed from the sectioned key-value
/// format documented in docs/config.md.
struct RunConfig {
  SystemParams params;
  BareState initial = BareState::cavity_driven();
  std::string initial_label = "cavity-driven";
  PipelineOptions pipeline;
  std::size_t output_stride = 1;
  DetectSelection detect;
  std::optional<SweepSpec> sweep;
};

/// Throws Error(ConfigParse) for syntax errors, unknown sections or keys,
/// bad numbers or units, and missing required keys.
RunConfig parse_config(std::string_view text);

/// Reads and parses a config file; Error(ConfigParse) if unreadable.
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form. Frequencies are written in rad/s and times in
/// seconds with round-trip precision, so parse_config(to_config_text(c))
/// reproduces c exactly.
std::string to_config_text(const RunConfig& config);

}  // namespace coopqed
