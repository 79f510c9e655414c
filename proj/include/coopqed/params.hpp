#pragma once

#include <string>
#include <vector>

namespace coopqed {

/// Physical parameters of the driven two-qubit cavity system.
///
/// Every field is an angular frequency in rad/s. Values quoted as f/2pi
/// (for example "5.1 GHz") go through angular() once at ingestion.
struct SystemParams {
  double omega_c = 0.0;    ///< cavity mode
  double omega_l = 0.0;    ///< left qubit energy parameter (eigenvalues of omega_l*sigma_z are +-omega_l)
  double omega_r = 0.0;    ///< right qubit energy parameter
  double eta_l = 0.0;      ///< left qubit-cavity coupling
  double eta_r = 0.0;      ///< right qubit-cavity coupling
  double epsilon_d = 0.0;  ///< drive Rabi strength, zero for the undriven system
  double omega_d = 0.0;    ///< drive frequency
};

enum class FrequencyUnit { Hz, kHz, MHz, GHz };

/// Converts a value quoted as f/2pi in the given unit to rad/s.
double angular(double value_over_2pi, FrequencyUnit unit) noexcept;

/// Inverse of angular(): rad/s back to f/2pi in the given unit.
double cyclic(double angular_value, FrequencyUnit unit) noexcept;

/// Reference symmetric parameter set: both qubits at
/// 5.1 GHz, couplings 300 MHz, cavity 5.32 GHz, drive 5.3 GHz at 200 kHz.
SystemParams reference_symmetric_params() noexcept;

/// Same as reference_symmetric_params() with the right qubit raised to 6.1 GHz.
SystemParams reference_asymmetric_params() noexcept;

struct Detunings {
  int n = 0;
  double delta = 0.0;    ///< omega_l - omega_r
  double delta_n = 0.0;  ///< (n+1) omega_c - omega_l - omega_r
};

/// Throws Error(InvalidArgument) for n < 0.
Detunings detunings(const SystemParams& params, int n);

/// Admissible coupling ratio eta_l / eta_r lies strictly inside
/// (kEtaRatioLow, kEtaRatioHigh).
inline constexpr double kEtaRatioLow = 0.1715728752538097;   // 3 - 2 sqrt(2)
inline constexpr double kEtaRatioHigh = 5.8284271247461900;  // 3 + 2 sqrt(2)

struct ValidationReport {
  std::vector<std::string> violations;
  /// Cubic discriminant q^2/4 + p^3/27 in the near-resonant limit delta_n = 0.
  double resonant_discriminant = 0.0;

  bool ratio_in_range = true;

  bool ok() const noexcept { return violations.empty(); }
  bool discriminant_negative() const noexcept { return resonant_discriminant < 0.0; }
};

/// Lists every violated invariant; never throws.
ValidationReport validate(const SystemParams& params);

}  // namespace coopqed
