#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "coopqed/dressed.hpp"
#include "coopqed/params.hpp"

namespace coopqed {

using cplx = std::complex<double>;

/// Drive-induced couplings between the n = 0 and n = 1 clusters.
struct DriveCouplings {
  /// Weights of the L, C, R components in the truncated annihilation operator.
  std::array<double, 3> weights{1.0, 1.4142135623730951, 1.0};
  /// lambda(j, k) = sum_l w_l alpha_{l,j}^(0) alpha_{l,k}^(1).
  Eigen::Matrix3d lambda = Eigen::Matrix3d::Zero();
  /// zeta(k, j) = omega_d - offset - (E_k^(1) - E_j^(0)).
  Eigen::Matrix3d zeta = Eigen::Matrix3d::Zero();
  /// Energy added back to every n = 1 level; omega_c unless the literal
  /// (offset-free) detuning is requested.
  double cluster_offset = 0.0;

  double max_abs_zeta() const { return zeta.cwiseAbs().maxCoeff(); }
};

/// Throws Error(ClusterMismatch) unless the clusters are n = 0 and n = 1.
DriveCouplings drive_couplings(const DressedCluster& cluster0, const DressedCluster& cluster1,
                               const SystemParams& params, bool include_cavity_offset = true);

/// Both clusters and their couplings, built once and shared by every
/// consumer (describe, run, sweep) so derived values never diverge.
struct Model {
  SystemParams params;
  DressedCluster cluster0;
  DressedCluster cluster1;
  DriveCouplings couplings;
};

Model build_model(const SystemParams& params, bool include_cavity_offset = true);

/// Bare basis order shared by BareState::gamma:
/// |e,0,g>, |g,1,g>, |g,0,e>, |e,1,g>, |g,2,g>, |g,1,e>.
enum BareIndex : int { kGammaL0 = 0, kGammaC0, kGammaR0, kGammaL1, kGammaC1, kGammaR1 };

struct BareState {
  std::array<cplx, 6> gamma{};

  double norm_squared() const;

  /// 3|g,1,g>/sqrt(10) + |g,2,g>/sqrt(10).
  static BareState cavity_driven();
  /// sqrt(0.9)|g,1,g> + sqrt(0.1)|e,1,g>: the other reading of the initial
  /// amplitudes, kept constructible for comparison.
  static BareState cavity_left_excited();
};

enum class Frame { Lab, Rotating };

struct DressedAmplitudes {
  std::array<cplx, 3> c{};  ///< cluster 0
  std::array<cplx, 3> d{};  ///< cluster 1
  Frame frame = Frame::Lab;
  double t = 0.0;

  double norm_squared() const;
};

DressedAmplitudes bare_to_dressed(const BareState& state, const DressedCluster& cluster0,
                                  const DressedCluster& cluster1);

/// Throws Error(FrameError) for rotating-frame input.
BareState to_bare(const DressedAmplitudes& amps, const DressedCluster& cluster0, const DressedCluster& cluster1);

/// Rotating -> lab: c_j = c'_j exp(-i E_j^(0) t), d_k = d'_k exp(-i (E_k^(1) + offset) t).
/// Throws Error(FrameError) for lab-frame input.
DressedAmplitudes derotate(const DressedAmplitudes& amps, const DressedCluster& cluster0,
                           const DressedCluster& cluster1, double cluster_offset);

/// Lab -> rotating, inverse of derotate(). Throws Error(FrameError) for rotating input.
DressedAmplitudes rotate(const DressedAmplitudes& amps, const DressedCluster& cluster0,
                         const DressedCluster& cluster1, double cluster_offset);

struct Trajectory {
  std::vector<double> times;
  std::vector<BareState> states;         ///< lab frame
  std::vector<DressedAmplitudes> dressed;  ///< rotating frame, as integrated
};

struct EvolveOptions {
  double t_max = 0.0;  ///< seconds
  double dt = 0.0;     ///< output sample spacing, seconds
  /// Internal RK4 step. When unset it is derived from dt and step_factor;
  /// when set, step * max(|zeta|, epsilon_d) must not exceed
  /// max_step_factor.
  std::optional<double> step;
  double step_factor = 0.05;
  double max_step_factor = 0.1;
  bool include_cavity_offset = true;
  double norm_tolerance = 1e-8;
};

/// Rotating-frame RK4 integration of the six dressed amplitudes.
///
/// dc'_j/dt = -eps sum_k lambda_jk exp(+i zeta_kj t) d'_k
/// dd'_k/dt = +eps sum_j lambda_jk exp(-i zeta_kj t) c'_j
///
/// Phases are evaluated from t at every stage. Samples land on the uniform
/// dt grid from 0 to t_max inclusive; the integrator substeps in between.
class RotatingFrameIntegrator {
 public:
  RotatingFrameIntegrator(const DriveCouplings& couplings, double epsilon_d);

  /// One RK4 step of size h (negative h integrates backwards).
  void step(std::array<cplx, 6>& y, double t, double h) const;

  /// Advances y from t0 to t1 in n equal steps.
  void advance(std::array<cplx, 6>& y, double t0, double t1, long long steps) const;

  double fastest_rate() const;

 private:
  void rhs(const std::array<cplx, 6>& y, double t, std::array<cplx, 6>& out) const;

  Eigen::Matrix3d lambda_;
  Eigen::Matrix3d zeta_;
  double epsilon_;
};

/// Throws Error(InvalidArgument) for bad grids, Error(StepTooLarge) for an
/// explicit step that under-resolves the drive detunings, Error(NormDrift)
/// when normalisation drifts beyond norm_tolerance at any sample.
Trajectory evolve(const SystemParams& params, const BareState& initial, const EvolveOptions& options);

/// Same as above on a prebuilt model (its offset choice wins over options).
Trajectory evolve(const Model& model, const BareState& initial, const EvolveOptions& options);

/// Number of internal RK4 steps per output sample for the given model.
long long substeps_per_sample(const Model& model, const EvolveOptions& options);

}  // namespace coopqed
