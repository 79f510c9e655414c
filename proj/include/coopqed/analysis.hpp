#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coopqed/dynamics.hpp"
#include "coopqed/measures.hpp"

namespace coopqed {

enum class Measure { C2, C3Literal, C3Residual, Async };

const char* to_string(Measure m) noexcept;
std::span<const double> select(const MeasureSeries& series, Measure m);

struct DetectorOptions {
  /// Half-width of the acceptance band around the plateau level, relative.
  double band_frac = 0.05;
  /// Envelope block length in seconds; 0 keeps every sample as a peak.
  double window = 0.0;
  /// Trailing fraction of the series whose envelope mean defines the plateau.
  double tail_frac = 0.25;
  /// Absolute slack added to the band, for plateaus at zero.
  double abs_floor = 1e-12;
};

struct DelayResult {
  double tau_d = 0.0;
  /// Mean of the raw measure over t >= tau_d.
  double saturated_value = 0.0;
  /// Mean of the envelope over the trailing tail_frac of the series.
  double plateau_level = 0.0;
  DetectorOptions detection;
};

/// Upper envelope: the maximum of each consecutive block of window_samples
/// samples, placed at its own time and linearly interpolated back onto the
/// sample grid (held flat outside the first and last peak).
std::vector<double> upper_envelope(std::span<const double> times, std::span<const double> values,
                                   std::size_t window_samples);

/// Earliest time after which the upper envelope stays within
/// +-band_frac of its trailing plateau mean until the end of the series.
/// Throws Error(NoPlateau) when the band is not held over the trailing
/// tail_frac itself, and Error(InvalidArgument) for an empty series.
DelayResult detect_delay(const MeasureSeries& series, Measure which, const DetectorOptions& options = {});
DelayResult detect_delay(std::span<const double> times, std::span<const double> values,
                         const DetectorOptions& options = {});

/// Mean asynchronicity over t > tau_d, with tau_d detected on the
/// asynchronicity series itself. Propagates Error(NoPlateau).
double stationary_async(const MeasureSeries& series, const DetectorOptions& options = {});

/// 2 pi / |zeta_kj| for the slowest drive transition with |lambda_jk| above
/// min_coupling; nullopt when no transition qualifies or zeta vanishes.
std::optional<double> drive_detuning_period(const Model& model, double min_coupling = 1e-2);

enum class C3Variant { Literal, Residual };

struct PipelineOptions {
  EvolveOptions evolve;
  DetectorOptions detector;
  /// Envelope window in drive-detuning periods; used when detector.window is 0.
  double window_periods = 3.0;
  C3Variant c3_variant = C3Variant::Residual;
};

/// Detector options with the window resolved against the model.
DetectorOptions resolve_detector(const Model& model, const PipelineOptions& options);

struct Detection {
  std::optional<DelayResult> result;
  std::string failure;  ///< NoPlateau message when result is empty
};

struct PipelineResult {
  Trajectory trajectory;
  MeasureSeries series;
  DetectorOptions detector;
  Detection c2;
  Detection c3;  ///< on the configured C3 variant
  Detection async;
  std::optional<double> a_bar;
};

/// evolve + measure_series + detect_delay on C2, C3 and asynchronicity.
/// NoPlateau is recorded in the Detection, never thrown.
PipelineResult run_pipeline(const Model& model, const BareState& initial, const PipelineOptions& options);

enum class SweepObservable { Delay, Async };

struct SweepPoint {
  double axis_value = 0.0;  ///< eta / omega_l
  double eta = 0.0;         ///< rad/s, applied to both couplings
  std::optional<double> tau_d;
  std::optional<double> a_bar;
  std::optional<double> c2_saturated;
  std::optional<double> c3_saturated;
  bool converged = false;
  std::string failure;
};

struct SweepResult {
  std::vector<double> axis;
  std::vector<SweepPoint> points;
  SweepObservable observable = SweepObservable::Delay;
};

struct SweepRequest {
  SystemParams base;
  std::vector<double> axis;  ///< eta / omega_l, strictly increasing
  BareState initial = BareState::cavity_driven();
  PipelineOptions pipeline;
  bool include_cavity_offset = true;
  SweepObservable observable = SweepObservable::Delay;
  unsigned jobs = 1;
  /// Called once per finished point from the worker that ran it.
  std::function<void(std::size_t, const SweepPoint&, const PipelineResult&)> on_point;
};

/// One full pipeline per axis point, run on up to `jobs` threads. Results
/// are ordered by axis. Per-point failures land in SweepPoint::failure.
/// Throws Error(InvalidArgument) for an empty or non-increasing axis.
SweepResult sweep(const SweepRequest& request);

/// Parameters of a single sweep point.
SystemParams sweep_point_params(const SystemParams& base, double axis_value);

}  // namespace coopqed
