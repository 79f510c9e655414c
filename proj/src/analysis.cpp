#include "coopqed/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "coopqed/error.hpp"

namespace coopqed {

const char* to_string(Measure m) noexcept {
  switch (m) {
    case Measure::C2: return "C2";
    case Measure::C3Literal: return "C3_literal";
    case Measure::C3Residual: return "C3_residual";
    case Measure::Async: return "A";
  }
  return "?";
}

std::span<const double> select(const MeasureSeries& series, Measure m) {
  switch (m) {
    case Measure::C2: return series.c2;
    case Measure::C3Literal: return series.c3_literal;
    case Measure::C3Residual: return series.c3_residual;
    case Measure::Async: return series.async;
  }
  return {};
}

std::vector<double> upper_envelope(std::span<const double> times, std::span<const double> values,
                                   std::size_t window_samples) {
  const std::size_t n = values.size();
  std::vector<double> env(n);
  if (n == 0) return env;
  window_samples = std::max<std::size_t>(window_samples, 1);

  std::vector<std::size_t> peaks;
  for (std::size_t start = 0; start < n; start += window_samples) {
    const std::size_t stop = std::min(n, start + window_samples);
    std::size_t best = start;
    for (std::size_t i = start + 1; i < stop; ++i) {
      if (values[i] > values[best]) best = i;
    }
    peaks.push_back(best);
  }

  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i <= peaks.front()) {
      env[i] = values[peaks.front()];
      continue;
    }
    if (i >= peaks.back()) {
      env[i] = values[peaks.back()];
      continue;
    }
    while (peaks[seg + 1] < i) ++seg;
    if (peaks[seg + 1] == i) {
      env[i] = values[i];
      continue;
    }
    const std::size_t a = peaks[seg];
    const std::size_t b = peaks[seg + 1];
    const double w = (times[i] - times[a]) / (times[b] - times[a]);
    env[i] = values[a] + w * (values[b] - values[a]);
  }
  return env;
}

DelayResult detect_delay(std::span<const double> times, std::span<const double> values,
                         const DetectorOptions& options) {
  const std::size_t n = values.size();
  if (n == 0 || times.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "detect_delay needs a non-empty series with matching times");
  }
  std::size_t window_samples = 1;
  if (options.window > 0.0 && n > 1) {
    const double dt = times[1] - times[0];
    window_samples = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(options.window / dt)));
  }
  const std::vector<double> env = upper_envelope(times, values, window_samples);

  const double t0 = times.front();
  const double t_end = times.back();
  const double tail_start = t_end - options.tail_frac * (t_end - t0);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (times[i] >= tail_start) {
      sum += env[i];
      ++count;
    }
  }
  const double plateau = sum / static_cast<double>(count);
  const double half_band = options.band_frac * std::abs(plateau) + options.abs_floor;

  std::size_t first = 0;
  for (std::size_t i = n; i-- > 0;) {
    if (std::abs(env[i] - plateau) > half_band) {
      first = i + 1;
      break;
    }
  }
  if (first >= n || times[first] > tail_start) {
    std::ostringstream msg;
    msg << "no plateau: envelope leaves the +-" << options.band_frac * 100.0 << "% band of " << plateau
        << " inside the trailing window";
    throw Error(ErrorCode::NoPlateau, msg.str());
  }

  DelayResult out;
  out.tau_d = times[first] - t0;
  out.plateau_level = plateau;
  out.detection = options;
  double raw = 0.0;
  for (std::size_t i = first; i < n; ++i) raw += values[i];
  out.saturated_value = raw / static_cast<double>(n - first);
  return out;
}

DelayResult detect_delay(const MeasureSeries& series, Measure which, const DetectorOptions& options) {
  return detect_delay(series.times, select(series, which), options);
}

double stationary_async(const MeasureSeries& series, const DetectorOptions& options) {
  return detect_delay(series, Measure::Async, options).saturated_value;
}

std::optional<double> drive_detuning_period(const Model& model, double min_coupling) {
  double slowest = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (std::abs(model.couplings.lambda(j, k)) >= min_coupling) {
        slowest = std::min(slowest, std::abs(model.couplings.zeta(k, j)));
      }
    }
  }
  if (!std::isfinite(slowest) || slowest == 0.0) return std::nullopt;
  return 2.0 * std::numbers::pi / slowest;
}

DetectorOptions resolve_detector(const Model& model, const PipelineOptions& options) {
  DetectorOptions det = options.detector;
  if (det.window <= 0.0 && options.window_periods > 0.0) {
    if (const auto period = drive_detuning_period(model)) {
      det.window = options.window_periods * *period;
    }
  }
  return det;
}

namespace {

Detection detect(const MeasureSeries& series, Measure which, const DetectorOptions& options) {
  Detection d;
  try {
    d.result = detect_delay(series, which, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPlateau) throw;
    d.failure = e.what();
  }
  return d;
}

}  // namespace

PipelineResult run_pipeline(const Model& model, const BareState& initial, const PipelineOptions& options) {
  PipelineResult out;
  out.trajectory = evolve(model, initial, options.evolve);
  out.series = measure_series(out.trajectory);
  out.detector = resolve_detector(model, options);
  out.c2 = detect(out.series, Measure::C2, out.detector);
  out.c3 = detect(out.series,
                  options.c3_variant == C3Variant::Residual ? Measure::C3Residual : Measure::C3Literal,
                  out.detector);
  out.async = detect(out.series, Measure::Async, out.detector);
  if (out.async.result) out.a_bar = out.async.result->saturated_value;
  return out;
}

SystemParams sweep_point_params(const SystemParams& base, double axis_value) {
  SystemParams p = base;
  p.eta_l = axis_value * base.omega_l;
  p.eta_r = p.eta_l;
  return p;
}

SweepResult sweep(const SweepRequest& request) {
  if (request.axis.empty()) throw Error(ErrorCode::InvalidArgument, "sweep axis is empty");
  for (std::size_t i = 1; i < request.axis.size(); ++i) {
    if (!(request.axis[i] > request.axis[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "sweep axis must be strictly increasing");
    }
  }

  SweepResult result;
  result.axis = request.axis;
  result.observable = request.observable;
  result.points.resize(request.axis.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < request.axis.size(); i = next++) {
      SweepPoint& point = result.points[i];
      point.axis_value = request.axis[i];
      const SystemParams params = sweep_point_params(request.base, point.axis_value);
      point.eta = params.eta_l;
      try {
        const ValidationReport report = validate(params);
        if (!report.ok()) throw Error(ErrorCode::Validation, report.violations.front());
        const Model model = build_model(params, request.include_cavity_offset);
        const PipelineResult run = run_pipeline(model, request.initial, request.pipeline);
        if (run.c2.result) {
          point.tau_d = run.c2.result->tau_d;
          point.c2_saturated = run.c2.result->saturated_value;
        }
        if (run.c3.result) point.c3_saturated = run.c3.result->saturated_value;
        point.a_bar = run.a_bar;
        const Detection& primary = request.observable == SweepObservable::Delay ? run.c2 : run.async;
        point.converged = primary.result.has_value();
        point.failure = primary.failure;
        if (request.on_point) request.on_point(i, point, run);
      } catch (const std::exception& e) {
        point.converged = false;
        point.failure = e.what();
      }
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(request.jobs, static_cast<unsigned>(request.axis.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return result;
}

}  // namespace coopqed
