#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace oracle {

namespace {

// Number of eigenvalues strictly below x (LDL^T pivot signs).
int count_below(const Eigen::Matrix3d& m, double x) {
  int count = 0;
  double d = m(0, 0) - x;
  if (d < 0) ++count;
  for (int i = 1; i < 3; ++i) {
    const double off = m(i, i - 1);
    if (d == 0.0) d = 1e-300;
    d = (m(i, i) - x) - off * off / d;
    if (d < 0) ++count;
  }
  return count;
}

}  // namespace

std::array<double, 3> tridiagonal_eigenvalues(const Eigen::Matrix3d& m, double rel_tol) {
  double radius = 0.0;
  for (int i = 0; i < 3; ++i) radius = std::max(radius, std::abs(m(i, i)) + m.row(i).cwiseAbs().sum());
  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k) {
    double lo = -radius - 1.0;
    double hi = radius + 1.0;
    for (int it = 0; it < 400 && hi - lo > rel_tol * radius; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(m, mid) > k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out[static_cast<std::size_t>(k)] = 0.5 * (lo + hi);
  }
  return out;
}

Eigen::Matrix3d block(const coopqed::SystemParams& p, int n) {
  const double delta = p.omega_l - p.omega_r;
  const double delta_n = (n + 1) * p.omega_c - p.omega_l - p.omega_r;
  Eigen::Matrix3d b;
  b << delta, p.eta_l, 0.0, p.eta_l, delta_n, p.eta_r, 0.0, p.eta_r, -delta;
  return b;
}

Cubic depressed_cubic_by_expansion(const Eigen::Matrix3d& b) {
  // det(E - B) = E^3 + a2 E^2 + a1 E + a0; sample at E = 0, 1, -1 in units of the trace scale.
  const double s = std::max(1.0, b.cwiseAbs().maxCoeff());
  auto charpoly = [&](double e) { return (e * Eigen::Matrix3d::Identity() - b).determinant(); };
  const double f0 = charpoly(0.0);
  const double fp = charpoly(s);
  const double fm = charpoly(-s);
  const double a0 = f0;
  // fp + fm = 2 s^2 a2 + 2 a0 ; fp - fm = 2 s^3 + 2 s a1
  const double a2 = (fp + fm - 2.0 * a0) / (2.0 * s * s);
  const double a1 = (fp - fm - 2.0 * s * s * s) / (2.0 * s);
  // Substitute E = x - a2/3.
  const double p = a1 - a2 * a2 / 3.0;
  const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
  return {p, q};
}

ExactPropagator::ExactPropagator(const coopqed::SystemParams& p, bool include_cavity_offset)
    : omega_d_(p.omega_d) {
  const double offset = include_cavity_offset ? p.omega_c : 0.0;
  Eigen::Matrix<cplx, 6, 6> h = Eigen::Matrix<cplx, 6, 6>::Zero();
  h.topLeftCorner<3, 3>() = block(p, 0).cast<cplx>();
  h.bottomRightCorner<3, 3>() = block(p, 1).cast<cplx>();
  for (int i = 3; i < 6; ++i) h(i, i) += offset - p.omega_d;
  // i eps (a^dagger - a), with a taking |l, n=1> to |l, n=0> with weights 1, sqrt2, 1.
  const double w[3] = {1.0, std::sqrt(2.0), 1.0};
  const cplx ie(0.0, p.epsilon_d);
  for (int l = 0; l < 3; ++l) {
    h(3 + l, l) += ie * w[l];
    h(l, 3 + l) -= ie * w[l];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, 6, 6>> eig(h);
  evals_ = eig.eigenvalues();
  evecs_ = eig.eigenvectors();
}

std::array<cplx, 6> ExactPropagator::at(const std::array<cplx, 6>& psi0, double t) const {
  Eigen::Matrix<cplx, 6, 1> v;
  for (int i = 0; i < 6; ++i) v(i) = psi0[static_cast<std::size_t>(i)];
  Eigen::Matrix<cplx, 6, 1> coeff = evecs_.adjoint() * v;
  for (int i = 0; i < 6; ++i) coeff(i) *= std::polar(1.0, -evals_(i) * t);
  Eigen::Matrix<cplx, 6, 1> out = evecs_ * coeff;
  const cplx drive = std::polar(1.0, -omega_d_ * t);
  std::array<cplx, 6> psi{};
  for (int i = 0; i < 6; ++i) psi[static_cast<std::size_t>(i)] = i < 3 ? out(i) : out(i) * drive;
  return psi;
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, std::array<bool, 3> keep) {
  const int dims[3] = {2, 3, 2};
  int kd = 1;
  for (int i = 0; i < 3; ++i) kd *= keep[static_cast<std::size_t>(i)] ? dims[i] : 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kd, kd);
  auto flat = [&](int l, int c, int r) { return (l * 3 + c) * 2 + r; };
  auto reduced = [&](int l, int c, int r) {
    int k = 0;
    if (keep[0]) k = k * 2 + l;
    if (keep[1]) k = k * 3 + c;
    if (keep[2]) k = k * 2 + r;
    return k;
  };
  for (int l1 = 0; l1 < 2; ++l1)
    for (int c1 = 0; c1 < 3; ++c1)
      for (int r1 = 0; r1 < 2; ++r1)
        for (int l2 = 0; l2 < 2; ++l2)
          for (int c2 = 0; c2 < 3; ++c2)
            for (int r2 = 0; r2 < 2; ++r2) {
              if (!keep[0] && l1 != l2) continue;
              if (!keep[1] && c1 != c2) continue;
              if (!keep[2] && r1 != r2) continue;
              out(reduced(l1, c1, r1), reduced(l2, c2, r2)) += rho(flat(l1, c1, r1), flat(l2, c2, r2));
            }
  return out;
}

Eigen::VectorXcd embed(const coopqed::BareState& s) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(12);
  auto flat = [](int l, int c, int r) { return (l * 3 + c) * 2 + r; };
  psi(flat(1, 0, 0)) = s.gamma[0];
  psi(flat(0, 1, 0)) = s.gamma[1];
  psi(flat(0, 0, 1)) = s.gamma[2];
  psi(flat(1, 1, 0)) = s.gamma[3];
  psi(flat(0, 2, 0)) = s.gamma[4];
  psi(flat(0, 1, 1)) = s.gamma[5];
  return psi;
}

double wootters(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> eig(r, false);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) lam[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, eig.eigenvalues()(i).real()));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

coopqed::BareState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  coopqed::BareState s;
  double norm = 0.0;
  for (auto& g : s.gamma) {
    g = cplx(n01(rng), n01(rng));
    norm += std::norm(g);
  }
  for (auto& g : s.gamma) g /= std::sqrt(norm);
  return s;
}

Eigen::VectorXcd random_full_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::VectorXcd psi(12);
  for (int i = 0; i < 12; ++i) psi(i) = cplx(n01(rng), n01(rng));
  return psi / psi.norm();
}

double purity(const Eigen::VectorXcd& psi, std::array<bool, 3> keep) {
  const Eigen::MatrixXcd rho = partial_trace(psi * psi.adjoint(), keep);
  return (rho * rho).trace().real();
}

}  // namespace oracle
