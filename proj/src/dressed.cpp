#include "coopqed/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "coopqed/error.hpp"

namespace coopqed {

namespace {

struct BlockTerms {
  double delta;
  double delta_n;
  double eta_l2;
  double eta_r2;
};

BlockTerms terms(const Detunings& det, const SystemParams& params) {
  return {det.delta, det.delta_n, params.eta_l * params.eta_l, params.eta_r * params.eta_r};
}

// E^3 - delta_n E^2 - (Delta^2 + eta_l^2 + eta_r^2) E + delta_n Delta^2 - Delta (eta_l^2 - eta_r^2)
double characteristic(const BlockTerms& t, double e) {
  const double s = t.delta * t.delta + t.eta_l2 + t.eta_r2;
  const double r = t.delta_n * t.delta * t.delta - t.delta * (t.eta_l2 - t.eta_r2);
  return ((e - t.delta_n) * e - s) * e + r;
}

double characteristic_slope(const BlockTerms& t, double e) {
  const double s = t.delta * t.delta + t.eta_l2 + t.eta_r2;
  return (3.0 * e - 2.0 * t.delta_n) * e - s;
}

double polish(const BlockTerms& t, double e, int steps) {
  for (int i = 0; i < steps; ++i) {
    const double f = characteristic(t, e);
    const double df = characteristic_slope(t, e);
    if (f == 0.0 || df == 0.0) break;
    const double candidate = e - f / df;
    if (!(std::abs(characteristic(t, candidate)) < std::abs(f))) break;
    e = candidate;
  }
  return e;
}

// Null vector of a rank-2 symmetric 3x3 matrix: cross product of the best
// conditioned pair of rows.
Eigen::Vector3d null_vector(const Eigen::Matrix3d& m) {
  const Eigen::Vector3d r0 = m.row(0).transpose();
  const Eigen::Vector3d r1 = m.row(1).transpose();
  const Eigen::Vector3d r2 = m.row(2).transpose();
  Eigen::Vector3d best = r0.cross(r2);
  for (const Eigen::Vector3d& c : {r0.cross(r1), r1.cross(r2)}) {
    if (c.squaredNorm() > best.squaredNorm()) best = c;
  }
  return best.normalized();
}

void fix_sign(Eigen::Ref<Eigen::Vector3d> column) {
  const double largest = column.cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(column(i)) >= largest * (1.0 - 1e-12)) {
      if (column(i) < 0.0) column = -column;
      return;
    }
  }
}

// Eigenvalues of the tridiagonal block below x, from the signs of the LDL^T pivots.
int count_below(const Detunings& det, const SystemParams& params, double x) {
  const double diag[3] = {det.delta, det.delta_n, -det.delta};
  const double off[2] = {params.eta_l, params.eta_r};
  int count = 0;
  double pivot = diag[0] - x;
  for (int i = 0;; ++i) {
    if (pivot == 0.0) pivot = -std::numeric_limits<double>::min();
    if (pivot < 0.0) ++count;
    if (i == 2) break;
    pivot = diag[i + 1] - x - off[i] * off[i] / pivot;
  }
  return count;
}

// k-th smallest eigenvalue to full precision; the trigonometric roots lose
// half their digits when two of them nearly collide.
double bisect_root(const Detunings& det, const SystemParams& params, int k) {
  const double bound = std::abs(det.delta) + std::abs(det.delta_n) + 2.0 * (params.eta_l + params.eta_r);
  double lo = -bound;
  double hi = bound;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(det, params, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CubicForm cubic_form(const Detunings& det, const SystemParams& params) {
  const auto t = terms(det, params);
  const double dn = t.delta_n;
  const double d2 = t.delta * t.delta;
  CubicForm c;
  c.p = -(dn * dn / 3.0 + d2 + t.eta_l2 + t.eta_r2);
  c.q = -2.0 / 27.0 * dn * dn * dn - dn * (t.eta_l2 + t.eta_r2) / 3.0 + 2.0 / 3.0 * dn * d2 -
        t.delta * (t.eta_l2 - t.eta_r2);
  c.discriminant = c.q * c.q / 4.0 + c.p * c.p * c.p / 27.0;
  c.shift = dn / 3.0;
  return c;
}

Eigen::Matrix3d block_matrix(const Detunings& det, const SystemParams& params) {
  Eigen::Matrix3d m;
  m << det.delta, params.eta_l, 0.0,
       params.eta_l, det.delta_n, params.eta_r,
       0.0, params.eta_r, -det.delta;
  return m;
}

DressedCluster solve_cluster(const SystemParams& params, int n, const SolverTolerances& tol) {
  const ValidationReport report = validate(params);
  if (!report.ratio_in_range) {
    std::ostringstream msg;
    msg << "coupling ratio eta_l/eta_r = " << params.eta_l / params.eta_r << " outside (" << kEtaRatioLow << ", "
        << kEtaRatioHigh << ")";
    throw Error(ErrorCode::InvalidRange, msg.str());
  }

  const Detunings det = detunings(params, n);
  const CubicForm cubic = cubic_form(det, params);
  const auto t = terms(det, params);

  if (!(cubic.p < 0.0)) {
    throw Error(ErrorCode::DegenerateSpectrum, "cluster block is a multiple of the identity");
  }
  const double radius = 2.0 * std::sqrt(-cubic.p / 3.0);
  double argument = 3.0 * cubic.q / (2.0 * cubic.p) * std::sqrt(-3.0 / cubic.p);
  if (std::abs(argument) > 1.0 + tol.arccos_slack) {
    throw Error(ErrorCode::DegenerateSpectrum, "trigonometric root argument outside [-1, 1]");
  }
  argument = std::clamp(argument, -1.0, 1.0);
  const double theta = std::acos(argument) / 3.0;

  DressedCluster out;
  out.n = n;
  out.detunings = det;
  for (int k = 1; k <= 3; ++k) {
    const double root = radius * std::cos(theta + 2.0 * k * std::numbers::pi / 3.0) + cubic.shift;
    out.energies[k - 1] = polish(t, root, tol.newton_polish_steps);
  }

  const double spectral_scale = std::max({std::abs(out.energies[0]), std::abs(out.energies[2]), radius});
  for (int k = 0; k < 2; ++k) {
    if (std::abs(out.energies[k + 1] - out.energies[k]) < tol.close_root_relative * spectral_scale) {
      out.energies[k] = bisect_root(det, params, k);
      out.energies[k + 1] = bisect_root(det, params, k + 1);
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (std::abs(out.energies[a] - out.energies[b]) < tol.degenerate_relative * spectral_scale) {
        throw Error(ErrorCode::DegenerateSpectrum, "two dressed energies coincide within tolerance");
      }
    }
  }

  const Eigen::Matrix3d block = block_matrix(det, params);
  const double scale2 = t.delta_n * t.delta_n + t.delta * t.delta + t.eta_l2 + t.eta_r2;
  for (int k = 0; k < 3; ++k) {
    const double e = out.energies[k];
    Eigen::Vector3d column(-params.eta_l * (t.delta + e), t.delta * t.delta - e * e, params.eta_r * (t.delta - e));
    const double z = column.norm();
    out.norms[k] = z;
    if (z < tol.singular_norm_relative * scale2) {
      column = null_vector(block - e * Eigen::Matrix3d::Identity());
      out.null_space_fallback[k] = true;
    } else {
      column /= z;
    }
    fix_sign(column);
    out.coeffs.col(k) = column;
  }
  return out;
}

}  // namespace coopqed
