#pragma once

#include <filesystem>
#include <string>

#include "coopqed/dynamics.hpp"
#include "coopqed/measures.hpp"

namespace coopqed {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Header t,re_gL0,im_gL0,...,im_gR1; one row per stride-th sample.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, std::size_t stride = 1);

/// Header t,C2,C3_literal,C3_residual,A.
void write_measures_csv(const std::filesystem::path& path, const MeasureSeries& series, std::size_t stride = 1);

/// Parses a file written by write_measures_csv. Throws Error(Io) on
/// malformed input.
MeasureSeries read_measures_csv(const std::filesystem::path& path);

}  // namespace coopqed
