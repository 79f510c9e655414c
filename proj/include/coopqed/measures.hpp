#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "coopqed/dynamics.hpp"

namespace coopqed {

enum class Subsystem { L, C, R };

/// Local dimension: qubits 2 (|g> = 0, |e> = 1), cavity 3 (Fock 0..2).
int subsystem_dim(Subsystem s) noexcept;

/// Density matrix on an ordered subset of L (x) C (x) R, row-major in the
/// listed order (first subsystem slowest).
struct DensityMatrix {
  std::vector<Subsystem> subsystems;
  Eigen::MatrixXcd data;

  int dim() const { return static_cast<int>(data.rows()); }
  cplx trace() const { return data.trace(); }
  double purity() const;
};

/// Rank-one projector on the 12-dimensional L (x) C (x) R space with the six
/// confined amplitudes embedded.
DensityMatrix full_density(const BareState& state);

/// Flat index of |l, c, r> in the full space.
int full_index(int l, int c, int r) noexcept;

/// Traces out everything not listed in keep. The result keeps the order of
/// rho.subsystems. Throws Error(BadSubsystem) if keep names a subsystem not
/// present in rho (or lists one twice).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Subsystem> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<Subsystem> keep);

/// sqrt(2 (1 - purity)), clamped at zero.
double concurrence_from_purity(double purity, std::size_t* clamps = nullptr);

/// Bipartite concurrence sqrt(2 (1 - tr rho_L^2)) from a qubit reduction.
double concurrence2(const DensityMatrix& rho_l, std::size_t* clamps = nullptr);

/// Purity combination 1 - tr rho_R^2 - tr rho_L^2 - tr rho_C^2 + tr rho_LR^2
/// + tr rho_CR^2 + tr rho_LC^2 - tr rho^2 under a square root. Vanishes on
/// every pure state because complementary reductions share their purity.
/// Radicands within rounding of zero (relative to the summed magnitudes of
/// their terms) evaluate to exactly zero and are not counted as clamps.
double concurrence3_literal(const BareState& state, std::size_t* clamps = nullptr);
/// Same combination on any density matrix over L (x) C (x) R, mixed or pure.
/// Throws Error(BadSubsystem) for other spaces.
double concurrence3_literal(const DensityMatrix& rho, std::size_t* clamps = nullptr);

/// Residual form sqrt(max(0, C_{L|CR}^2 - C_W(rho_LR)^2)) with
/// C_{L|CR} = sqrt(2 (1 - tr rho_L^2)) and C_W the Wootters concurrence.
double concurrence3_residual(const BareState& state, std::size_t* clamps = nullptr);

/// Wootters concurrence of a two-qubit (L, R) density matrix.
double wootters(const DensityMatrix& rho_lr);

/// |det(rho_L - rho_R)| of two qubit density matrices.
double asynchronicity(const DensityMatrix& rho_l, const DensityMatrix& rho_r);

struct MeasureSample {
  double c2 = 0.0;
  double c3_literal = 0.0;
  double c3_residual = 0.0;
  double async = 0.0;
};

MeasureSample evaluate_measures(const BareState& state, std::size_t* clamps = nullptr);

struct MeasureSeries {
  std::vector<double> times;
  std::vector<double> c2;
  std::vector<double> c3_literal;
  std::vector<double> c3_residual;
  std::vector<double> async;
  /// Negative radicands clamped to zero across the series.
  std::size_t clamp_count = 0;

  std::size_t size() const { return times.size(); }
};

MeasureSeries measure_series(const Trajectory& traj);

}  // namespace coopqed
