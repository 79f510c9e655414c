#include "coopqed/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "coopqed/error.hpp"

namespace coopqed {

int subsystem_dim(Subsystem s) noexcept { return s == Subsystem::C ? 3 : 2; }

int full_index(int l, int c, int r) noexcept { return (l * 3 + c) * 2 + r; }

double DensityMatrix::purity() const {
  // tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho
  return data.squaredNorm();
}

DensityMatrix full_density(const BareState& state) {
  constexpr int g = 0;
  constexpr int e = 1;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(12);
  psi(full_index(e, 0, g)) = state.gamma[kGammaL0];
  psi(full_index(g, 1, g)) = state.gamma[kGammaC0];
  psi(full_index(g, 0, e)) = state.gamma[kGammaR0];
  psi(full_index(e, 1, g)) = state.gamma[kGammaL1];
  psi(full_index(g, 2, g)) = state.gamma[kGammaC1];
  psi(full_index(g, 1, e)) = state.gamma[kGammaR1];
  DensityMatrix rho;
  rho.subsystems = {Subsystem::L, Subsystem::C, Subsystem::R};
  rho.data = psi * psi.adjoint();
  return rho;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Subsystem> keep) {
  const std::size_t count = rho.subsystems.size();
  std::vector<bool> kept(count, false);
  for (Subsystem s : keep) {
    const auto it = std::find(rho.subsystems.begin(), rho.subsystems.end(), s);
    if (it == rho.subsystems.end()) {
      throw Error(ErrorCode::BadSubsystem, "partial_trace: subsystem not present in density matrix");
    }
    const auto pos = static_cast<std::size_t>(it - rho.subsystems.begin());
    if (kept[pos]) throw Error(ErrorCode::BadSubsystem, "partial_trace: subsystem listed twice");
    kept[pos] = true;
  }

  std::vector<int> dims(count);
  for (std::size_t i = 0; i < count; ++i) dims[i] = subsystem_dim(rho.subsystems[i]);

  DensityMatrix out;
  int kept_dim = 1;
  int traced_dim = 1;
  for (std::size_t i = 0; i < count; ++i) {
    if (kept[i]) {
      out.subsystems.push_back(rho.subsystems[i]);
      kept_dim *= dims[i];
    } else {
      traced_dim *= dims[i];
    }
  }

  // Map (kept index, traced index) -> full index once.
  std::vector<int> full(static_cast<std::size_t>(kept_dim * traced_dim));
  const int total = kept_dim * traced_dim;
  std::vector<int> digits(count);
  for (int index = 0; index < total; ++index) {
    int rem = index;
    for (std::size_t i = count; i-- > 0;) {
      digits[i] = rem % dims[i];
      rem /= dims[i];
    }
    int k = 0;
    int t = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (kept[i]) {
        k = k * dims[i] + digits[i];
      } else {
        t = t * dims[i] + digits[i];
      }
    }
    full[static_cast<std::size_t>(k * traced_dim + t)] = index;
  }

  out.data = Eigen::MatrixXcd::Zero(kept_dim, kept_dim);
  for (int a = 0; a < kept_dim; ++a) {
    for (int b = 0; b < kept_dim; ++b) {
      cplx sum = 0.0;
      for (int t = 0; t < traced_dim; ++t) {
        sum += rho.data(full[static_cast<std::size_t>(a * traced_dim + t)],
                        full[static_cast<std::size_t>(b * traced_dim + t)]);
      }
      out.data(a, b) = sum;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<Subsystem> keep) {
  return partial_trace(rho, std::span<const Subsystem>(keep.begin(), keep.size()));
}

namespace {

// Radicands are differences of O(1) purities, so anything within a few ulps
// of the summed term magnitudes is rounding noise, not signal.
constexpr double kRoundingUlps = 64.0;

double clamped_sqrt(double radicand, double scale, std::size_t* clamps) {
  if (std::abs(radicand) <= kRoundingUlps * std::numeric_limits<double>::epsilon() * scale) return 0.0;
  if (radicand < 0.0) {
    if (clamps) ++*clamps;
    return 0.0;
  }
  return std::sqrt(radicand);
}

struct Reductions {
  DensityMatrix full, l, c, r, lr, cr, lc;
};

Reductions reduce(const DensityMatrix& full) {
  Reductions red;
  red.full = full;
  red.lr = partial_trace(red.full, {Subsystem::L, Subsystem::R});
  red.cr = partial_trace(red.full, {Subsystem::C, Subsystem::R});
  red.lc = partial_trace(red.full, {Subsystem::L, Subsystem::C});
  red.l = partial_trace(red.lr, {Subsystem::L});
  red.r = partial_trace(red.lr, {Subsystem::R});
  red.c = partial_trace(red.cr, {Subsystem::C});
  return red;
}

double literal_from(const Reductions& red, std::size_t* clamps) {
  const std::array<double, 8> terms = {1.0,
                                       -red.r.purity(),
                                       -red.l.purity(),
                                       -red.c.purity(),
                                       red.lr.purity(),
                                       red.cr.purity(),
                                       red.lc.purity(),
                                       -red.full.purity()};
  double radicand = 0.0;
  double scale = 0.0;
  for (double t : terms) {
    radicand += t;
    scale += std::abs(t);
  }
  return clamped_sqrt(radicand, scale, clamps);
}

double residual_from(const Reductions& red, std::size_t* clamps) {
  const double c_split = std::max(2.0 * (1.0 - red.l.purity()), 0.0);
  const double cw = wootters(red.lr);
  return clamped_sqrt(c_split - cw * cw, 2.0 + c_split + cw * cw, clamps);
}

void check_full(const DensityMatrix& rho) {
  const std::vector<Subsystem> order = {Subsystem::L, Subsystem::C, Subsystem::R};
  if (rho.subsystems != order || rho.dim() != 12) {
    throw Error(ErrorCode::BadSubsystem, "expected a density matrix on L (x) C (x) R");
  }
}

}  // namespace

double concurrence_from_purity(double purity, std::size_t* clamps) {
  return clamped_sqrt(2.0 * (1.0 - purity), 2.0 + 2.0 * std::abs(purity), clamps);
}

double concurrence2(const DensityMatrix& rho_l, std::size_t* clamps) {
  return concurrence_from_purity(rho_l.purity(), clamps);
}

double concurrence3_literal(const DensityMatrix& rho, std::size_t* clamps) {
  check_full(rho);
  return literal_from(reduce(rho), clamps);
}

double concurrence3_literal(const BareState& state, std::size_t* clamps) {
  return literal_from(reduce(full_density(state)), clamps);
}

double concurrence3_residual(const BareState& state, std::size_t* clamps) {
  return residual_from(reduce(full_density(state)), clamps);
}

double wootters(const DensityMatrix& rho_lr) {
  if (rho_lr.dim() != 4) {
    throw Error(ErrorCode::InvalidArgument, "wootters needs a 4x4 two-qubit density matrix");
  }
  // sigma_y (x) sigma_y in the |gg>, |ge>, |eg>, |ee> basis.
  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const Eigen::Matrix4cd rho = rho_lr.data;
  const Eigen::Matrix4cd tilde = flip * rho.conjugate() * flip;

  // Reduced states here are usually rank deficient; eigenvalues at rounding
  // level would otherwise enter as O(sqrt(eps)) after the square roots.
  const double noise = kRoundingUlps * std::numeric_limits<double>::epsilon() * std::max(1.0, rho.trace().real());
  auto snap = [noise](double v) { return v <= noise ? 0.0 : std::sqrt(v); };
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> rho_eig(rho);
  const Eigen::Vector4d evals = rho_eig.eigenvalues().unaryExpr(snap);
  const Eigen::Matrix4cd sqrt_rho = rho_eig.eigenvectors() * evals.asDiagonal() * rho_eig.eigenvectors().adjoint();
  const Eigen::Matrix4cd inner = sqrt_rho * tilde * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> inner_eig(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::Vector4d lambdas = inner_eig.eigenvalues().unaryExpr(snap);
  std::sort(lambdas.data(), lambdas.data() + 4, std::greater<>());
  return std::max(0.0, lambdas(0) - lambdas(1) - lambdas(2) - lambdas(3));
}

double asynchronicity(const DensityMatrix& rho_l, const DensityMatrix& rho_r) {
  if (rho_l.dim() != 2 || rho_r.dim() != 2) {
    throw Error(ErrorCode::InvalidArgument, "asynchronicity needs two 2x2 density matrices");
  }
  const Eigen::MatrixXcd diff = rho_l.data - rho_r.data;
  return std::abs(diff(0, 0) * diff(1, 1) - diff(0, 1) * diff(1, 0));
}

MeasureSample evaluate_measures(const BareState& state, std::size_t* clamps) {
  const Reductions red = reduce(full_density(state));
  MeasureSample s;
  s.c2 = concurrence2(red.l, clamps);
  s.c3_literal = literal_from(red, clamps);
  s.c3_residual = residual_from(red, clamps);
  s.async = asynchronicity(red.l, red.r);
  return s;
}

MeasureSeries measure_series(const Trajectory& traj) {
  MeasureSeries out;
  const std::size_t n = traj.times.size();
  out.times = traj.times;
  out.c2.reserve(n);
  out.c3_literal.reserve(n);
  out.c3_residual.reserve(n);
  out.async.reserve(n);
  for (const BareState& state : traj.states) {
    const MeasureSample s = evaluate_measures(state, &out.clamp_count);
    out.c2.push_back(s.c2);
    out.c3_literal.push_back(s.c3_literal);
    out.c3_residual.push_back(s.c3_residual);
    out.async.push_back(s.async);
  }
  return out;
}

}  // namespace coopqed
