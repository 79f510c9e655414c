#include "coopqed/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "coopqed/error.hpp"

namespace coopqed {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::ClusterMismatch: return "ClusterMismatch";
    case ErrorCode::FrameError: return "FrameError";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NormDrift: return "NormDrift";
    case ErrorCode::BadSubsystem: return "BadSubsystem";
    case ErrorCode::NoPlateau: return "NoPlateau";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

double unit_scale(FrequencyUnit unit) noexcept {
  switch (unit) {
    case FrequencyUnit::Hz: return 1.0;
    case FrequencyUnit::kHz: return 1e3;
    case FrequencyUnit::MHz: return 1e6;
    case FrequencyUnit::GHz: return 1e9;
  }
  return 1.0;
}

}  // namespace

double angular(double value_over_2pi, FrequencyUnit unit) noexcept {
  return 2.0 * std::numbers::pi * value_over_2pi * unit_scale(unit);
}

double cyclic(double angular_value, FrequencyUnit unit) noexcept {
  return angular_value / (2.0 * std::numbers::pi * unit_scale(unit));
}

SystemParams reference_symmetric_params() noexcept {
  SystemParams p;
  p.omega_c = angular(5.32, FrequencyUnit::GHz);
  p.omega_l = angular(5.1, FrequencyUnit::GHz);
  p.omega_r = angular(5.1, FrequencyUnit::GHz);
  p.eta_l = angular(300.0, FrequencyUnit::MHz);
  p.eta_r = angular(300.0, FrequencyUnit::MHz);
  p.epsilon_d = angular(200.0, FrequencyUnit::kHz);
  p.omega_d = angular(5.3, FrequencyUnit::GHz);
  return p;
}

SystemParams reference_asymmetric_params() noexcept {
  SystemParams p = reference_symmetric_params();
  p.omega_r = angular(6.1, FrequencyUnit::GHz);
  return p;
}

Detunings detunings(const SystemParams& params, int n) {
  if (n < 0) {
    throw Error(ErrorCode::InvalidArgument, "cluster index must be non-negative, got " + std::to_string(n));
  }
  Detunings d;
  d.n = n;
  d.delta = params.omega_l - params.omega_r;
  d.delta_n = (n + 1) * params.omega_c - params.omega_l - params.omega_r;
  return d;
}

ValidationReport validate(const SystemParams& params) {
  ValidationReport report;
  auto require_positive = [&](double value, const char* name) {
    if (!std::isfinite(value) || !(value > 0.0)) {
      report.violations.push_back(std::string(name) + " must be finite and strictly positive");
    }
  };
  require_positive(params.omega_c, "omega_c");
  require_positive(params.omega_l, "omega_l");
  require_positive(params.omega_r, "omega_r");
  require_positive(params.eta_l, "eta_l");
  require_positive(params.eta_r, "eta_r");
  require_positive(params.omega_d, "omega_d");
  if (!std::isfinite(params.epsilon_d) || params.epsilon_d < 0.0) {
    report.violations.push_back("epsilon_d must be finite and non-negative");
  }

  if (params.eta_r > 0.0 && params.eta_l > 0.0) {
    const double lo = kEtaRatioLow * params.eta_r;
    const double hi = kEtaRatioHigh * params.eta_r;
    if (!(params.eta_l > lo && params.eta_l < hi)) {
      report.ratio_in_range = false;
      std::ostringstream msg;
      msg.precision(10);
      msg << "real-root range violated: coupling ratio eta_l/eta_r = " << params.eta_l / params.eta_r
          << " must lie in (" << kEtaRatioLow << ", " << kEtaRatioHigh << "), i.e. " << lo << " < eta_l < " << hi
          << " rad/s";
      report.violations.push_back(msg.str());
    }
  } else {
    report.ratio_in_range = false;
  }

  // Discriminant with delta_n = 0: p = -(Delta^2 + eta_l^2 + eta_r^2), q = -Delta (eta_l^2 - eta_r^2).
  const double delta = params.omega_l - params.omega_r;
  const double p = -(delta * delta + params.eta_l * params.eta_l + params.eta_r * params.eta_r);
  const double q = -delta * (params.eta_l * params.eta_l - params.eta_r * params.eta_r);
  report.resonant_discriminant = q * q / 4.0 + p * p * p / 27.0;
  if (!(report.resonant_discriminant < 0.0)) {
    report.violations.push_back("near-resonant discriminant is not negative: three distinct real roots are not guaranteed");
  }
  return report;
}

}  // namespace coopqed
