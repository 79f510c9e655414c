#include "coopqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coopqed/error.hpp"

namespace coopqed {

DriveCouplings drive_couplings(const DressedCluster& cluster0, const DressedCluster& cluster1,
                               const SystemParams& params, bool include_cavity_offset) {
  if (cluster0.n != 0 || cluster1.n != 1) {
    std::ostringstream msg;
    msg << "drive couplings need clusters (0, 1), got (" << cluster0.n << ", " << cluster1.n << ")";
    throw Error(ErrorCode::ClusterMismatch, msg.str());
  }
  DriveCouplings out;
  out.cluster_offset = include_cavity_offset ? params.omega_c : 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      double sum = 0.0;
      for (int l = 0; l < 3; ++l) {
        sum += out.weights[l] * cluster0.coeffs(l, j) * cluster1.coeffs(l, k);
      }
      out.lambda(j, k) = sum;
      out.zeta(k, j) = params.omega_d - out.cluster_offset - (cluster1.energies[k] - cluster0.energies[j]);
    }
  }
  return out;
}

Model build_model(const SystemParams& params, bool include_cavity_offset) {
  Model m;
  m.params = params;
  m.cluster0 = solve_cluster(params, 0);
  m.cluster1 = solve_cluster(params, 1);
  m.couplings = drive_couplings(m.cluster0, m.cluster1, params, include_cavity_offset);
  return m;
}

double BareState::norm_squared() const {
  double s = 0.0;
  for (const auto& g : gamma) s += std::norm(g);
  return s;
}

BareState BareState::cavity_driven() {
  BareState s;
  s.gamma[kGammaC0] = std::sqrt(0.9);
  s.gamma[kGammaC1] = std::sqrt(0.1);
  return s;
}

BareState BareState::cavity_left_excited() {
  BareState s;
  s.gamma[kGammaC0] = std::sqrt(0.9);
  s.gamma[kGammaL1] = std::sqrt(0.1);
  return s;
}

double DressedAmplitudes::norm_squared() const {
  double s = 0.0;
  for (const auto& v : c) s += std::norm(v);
  for (const auto& v : d) s += std::norm(v);
  return s;
}

DressedAmplitudes bare_to_dressed(const BareState& state, const DressedCluster& cluster0,
                                  const DressedCluster& cluster1) {
  DressedAmplitudes out;
  out.frame = Frame::Lab;
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) {
      out.c[j] += cluster0.coeffs(l, j) * state.gamma[l];
      out.d[j] += cluster1.coeffs(l, j) * state.gamma[3 + l];
    }
  }
  return out;
}

BareState to_bare(const DressedAmplitudes& amps, const DressedCluster& cluster0, const DressedCluster& cluster1) {
  if (amps.frame != Frame::Lab) {
    throw Error(ErrorCode::FrameError, "to_bare needs lab-frame amplitudes; derotate first");
  }
  BareState out;
  for (int l = 0; l < 3; ++l) {
    for (int j = 0; j < 3; ++j) {
      out.gamma[l] += cluster0.coeffs(l, j) * amps.c[j];
      out.gamma[3 + l] += cluster1.coeffs(l, j) * amps.d[j];
    }
  }
  return out;
}

namespace {

DressedAmplitudes apply_phases(const DressedAmplitudes& amps, const DressedCluster& cluster0,
                               const DressedCluster& cluster1, double cluster_offset, double sign) {
  DressedAmplitudes out = amps;
  for (int j = 0; j < 3; ++j) {
    out.c[j] *= std::polar(1.0, sign * cluster0.energies[j] * amps.t);
    out.d[j] *= std::polar(1.0, sign * (cluster1.energies[j] + cluster_offset) * amps.t);
  }
  return out;
}

}  // namespace

DressedAmplitudes derotate(const DressedAmplitudes& amps, const DressedCluster& cluster0,
                           const DressedCluster& cluster1, double cluster_offset) {
  if (amps.frame != Frame::Rotating) {
    throw Error(ErrorCode::FrameError, "amplitudes are already in the lab frame");
  }
  DressedAmplitudes out = apply_phases(amps, cluster0, cluster1, cluster_offset, -1.0);
  out.frame = Frame::Lab;
  return out;
}

DressedAmplitudes rotate(const DressedAmplitudes& amps, const DressedCluster& cluster0,
                         const DressedCluster& cluster1, double cluster_offset) {
  if (amps.frame != Frame::Lab) {
    throw Error(ErrorCode::FrameError, "amplitudes are already in the rotating frame");
  }
  DressedAmplitudes out = apply_phases(amps, cluster0, cluster1, cluster_offset, +1.0);
  out.frame = Frame::Rotating;
  return out;
}

RotatingFrameIntegrator::RotatingFrameIntegrator(const DriveCouplings& couplings, double epsilon_d)
    : lambda_(couplings.lambda), zeta_(couplings.zeta), epsilon_(epsilon_d) {}

double RotatingFrameIntegrator::fastest_rate() const {
  return std::max(zeta_.cwiseAbs().maxCoeff(), std::abs(epsilon_));
}

void RotatingFrameIntegrator::rhs(const std::array<cplx, 6>& y, double t, std::array<cplx, 6>& out) const {
  // coupling(j, k) = eps * lambda_jk * exp(i zeta_kj t)
  cplx coupling[3][3];
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const double phase = zeta_(k, j) * t;
      coupling[j][k] = epsilon_ * lambda_(j, k) * cplx(std::cos(phase), std::sin(phase));
    }
  }
  for (int j = 0; j < 3; ++j) {
    out[j] = -(coupling[j][0] * y[3] + coupling[j][1] * y[4] + coupling[j][2] * y[5]);
  }
  for (int k = 0; k < 3; ++k) {
    out[3 + k] = std::conj(coupling[0][k]) * y[0] + std::conj(coupling[1][k]) * y[1] +
                 std::conj(coupling[2][k]) * y[2];
  }
}

void RotatingFrameIntegrator::step(std::array<cplx, 6>& y, double t, double h) const {
  std::array<cplx, 6> k1, k2, k3, k4, tmp;
  rhs(y, t, k1);
  for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  rhs(tmp, t + 0.5 * h, k2);
  for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  rhs(tmp, t + 0.5 * h, k3);
  for (int i = 0; i < 6; ++i) tmp[i] = y[i] + h * k3[i];
  rhs(tmp, t + h, k4);
  for (int i = 0; i < 6; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void RotatingFrameIntegrator::advance(std::array<cplx, 6>& y, double t0, double t1, long long steps) const {
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (long long s = 0; s < steps; ++s) {
    step(y, t0 + static_cast<double>(s) * h, h);
  }
}

namespace {

void check_grid(const EvolveOptions& options) {
  if (!(options.dt > 0.0) || !std::isfinite(options.dt)) {
    throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  }
  if (!(options.t_max >= 0.0) || !std::isfinite(options.t_max)) {
    throw Error(ErrorCode::InvalidArgument, "t_max must be non-negative");
  }
  if (options.step && !(*options.step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "integrator step must be positive");
  }
}

std::size_t sample_count(const EvolveOptions& options) {
  return static_cast<std::size_t>(std::floor(options.t_max / options.dt + 1e-9)) + 1;
}

}  // namespace

long long substeps_per_sample(const Model& model, const EvolveOptions& options) {
  check_grid(options);
  const double rate =
      std::max(model.couplings.max_abs_zeta(), std::abs(model.params.epsilon_d));
  if (options.step) {
    if (*options.step * rate > options.max_step_factor) {
      std::ostringstream msg;
      msg << "integrator step " << *options.step << " s gives step*max|zeta| = " << *options.step * rate
          << " > " << options.max_step_factor;
      throw Error(ErrorCode::StepTooLarge, msg.str());
    }
    return std::max(1LL, static_cast<long long>(std::ceil(options.dt / *options.step - 1e-9)));
  }
  if (rate == 0.0) return 1;
  return std::max(1LL, static_cast<long long>(std::ceil(options.dt * rate / options.step_factor)));
}

Trajectory evolve(const SystemParams& params, const BareState& initial, const EvolveOptions& options) {
  const ValidationReport report = validate(params);
  if (!report.ok()) {
    throw Error(ErrorCode::Validation, "invalid parameters: " + report.violations.front());
  }
  return evolve(build_model(params, options.include_cavity_offset), initial, options);
}

Trajectory evolve(const Model& model, const BareState& initial, const EvolveOptions& options) {
  check_grid(options);
  if (std::abs(initial.norm_squared() - 1.0) > options.norm_tolerance) {
    throw Error(ErrorCode::InvalidArgument, "initial state is not normalised");
  }
  const long long substeps = substeps_per_sample(model, options);
  const std::size_t samples = sample_count(options);
  const RotatingFrameIntegrator integrator(model.couplings, model.params.epsilon_d);
  const double offset = model.couplings.cluster_offset;

  Trajectory traj;
  traj.times.reserve(samples);
  traj.states.reserve(samples);
  traj.dressed.reserve(samples);

  // The frames coincide at t = 0.
  DressedAmplitudes amps = bare_to_dressed(initial, model.cluster0, model.cluster1);
  std::array<cplx, 6> y{amps.c[0], amps.c[1], amps.c[2], amps.d[0], amps.d[1], amps.d[2]};

  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) * options.dt;
    if (i > 0) {
      integrator.advance(y, static_cast<double>(i - 1) * options.dt, t, substeps);
    }
    DressedAmplitudes rot;
    rot.frame = Frame::Rotating;
    rot.t = t;
    for (int j = 0; j < 3; ++j) {
      rot.c[j] = y[j];
      rot.d[j] = y[3 + j];
    }
    const double drift = std::abs(rot.norm_squared() - 1.0);
    if (drift > options.norm_tolerance) {
      std::ostringstream msg;
      msg << "norm drift " << drift << " at t = " << t << " s exceeds " << options.norm_tolerance;
      throw Error(ErrorCode::NormDrift, msg.str());
    }
    traj.times.push_back(t);
    traj.states.push_back(to_bare(derotate(rot, model.cluster0, model.cluster1, offset), model.cluster0,
                                  model.cluster1));
    traj.dressed.push_back(rot);
  }
  return traj;
}

}  // namespace coopqed
