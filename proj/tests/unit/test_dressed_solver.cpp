#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "coopqed/dressed.hpp"
#include "coopqed/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coopqed;

namespace {

SystemParams resonant(double eta) {
  SystemParams p;
  p.omega_l = angular(5.0, FrequencyUnit::GHz);
  p.omega_r = p.omega_l;
  p.omega_c = p.omega_l + p.omega_r;
  p.eta_l = p.eta_r = eta;
  p.epsilon_d = 0.0;
  p.omega_d = p.omega_c;
  return p;
}

SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> qubit(4.0, 7.0);
  std::uniform_real_distribution<double> cavity(4.0, 14.0);
  std::uniform_real_distribution<double> coupling(0.01, 1.5);
  std::uniform_real_distribution<double> ratio(std::log(kEtaRatioLow * 1.01), std::log(kEtaRatioHigh / 1.01));
  SystemParams p;
  p.omega_l = angular(qubit(rng), FrequencyUnit::GHz);
  p.omega_r = angular(qubit(rng), FrequencyUnit::GHz);
  p.omega_c = angular(cavity(rng), FrequencyUnit::GHz);
  p.eta_r = angular(coupling(rng), FrequencyUnit::GHz);
  p.eta_l = p.eta_r * std::exp(ratio(rng));
  p.epsilon_d = angular(1.0, FrequencyUnit::MHz);
  p.omega_d = p.omega_c;
  return p;
}

}  // namespace

TEST_CASE("block matrix layout") {
  SystemParams p = reference_asymmetric_params();
  p.eta_l = 1.0;
  p.eta_r = 2.0;
  const Detunings d = detunings(p, 1);
  const Eigen::Matrix3d b = block_matrix(d, p);
  CHECK(b(0, 0) == d.delta);
  CHECK(b(1, 1) == d.delta_n);
  CHECK(b(2, 2) == -d.delta);
  CHECK(b(0, 1) == 1.0);
  CHECK(b(1, 2) == 2.0);
  CHECK(b(0, 2) == 0.0);
  CHECK((b - b.transpose()).norm() == 0.0);

  p.eta_l = p.eta_r = 0.0;
  const Eigen::Matrix3d diag = block_matrix(d, p);
  CHECK(diag.isDiagonal());
}

TEST_CASE("cubic form at resonance") {
  const double eta = 3.0;
  const SystemParams p = resonant(eta);
  const CubicForm c = cubic_form(detunings(p, 0), p);
  CHECK(c.p == doctest::Approx(-2.0 * eta * eta));
  CHECK(c.q == doctest::Approx(0.0));
  CHECK(c.discriminant == doctest::Approx(-8.0 * std::pow(eta, 6) / 27.0));
  CHECK(c.shift == 0.0);

  SystemParams z = p;
  z.eta_l = z.eta_r = 0.0;
  const CubicForm u = cubic_form(detunings(z, 0), z);
  CHECK(u.p == 0.0);
  CHECK(u.q == 0.0);
}

TEST_CASE("cubic form matches polynomial expansion") {
  std::mt19937_64 rng(7);
  // Work in GHz-scale units so the finite-difference expansion stays well conditioned.
  for (int i = 0; i < 200; ++i) {
    SystemParams p = random_params(rng);
    for (double* f : {&p.omega_c, &p.omega_l, &p.omega_r, &p.eta_l, &p.eta_r}) *f /= 1e9;
    for (int n = 0; n < 2; ++n) {
      const Detunings d = detunings(p, n);
      const CubicForm c = cubic_form(d, p);
      const oracle::Cubic o = oracle::depressed_cubic_by_expansion(oracle::block(p, n));
      const double scale_p = d.delta_n * d.delta_n + d.delta * d.delta + p.eta_l * p.eta_l + p.eta_r * p.eta_r;
      CHECK(std::abs(c.p - o.p) < 1e-11 * scale_p);
      CHECK(std::abs(c.q - o.q) < 1e-11 * std::pow(scale_p, 1.5));
      CHECK(c.discriminant == doctest::Approx(c.q * c.q / 4.0 + std::pow(c.p, 3) / 27.0));
    }
  }
}

TEST_CASE("asymmetric q carries the coupling-imbalance term") {
  SystemParams p = reference_asymmetric_params();
  p.eta_l = angular(0.4, FrequencyUnit::GHz);
  const Detunings d = detunings(p, 0);
  SystemParams balanced = p;
  balanced.eta_l = balanced.eta_r = std::sqrt(0.5 * (p.eta_l * p.eta_l + p.eta_r * p.eta_r));
  const double diff = cubic_form(d, p).q - cubic_form(d, balanced).q;
  const double expected = -d.delta * (p.eta_l * p.eta_l - p.eta_r * p.eta_r);
  CHECK(diff == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("symmetric resonant cluster") {
  const double eta = angular(0.3, FrequencyUnit::GHz);
  const DressedCluster c = solve_cluster(resonant(eta), 0);
  const double r2 = std::sqrt(2.0);
  CHECK(std::abs(c.energies[0] + r2 * eta) < 1e-12 * r2 * eta);
  CHECK(std::abs(c.energies[1]) < 1e-12 * r2 * eta);
  CHECK(std::abs(c.energies[2] - r2 * eta) < 1e-12 * r2 * eta);

  // Top level: (1/2, 1/sqrt2, 1/2).
  CHECK(c.coeffs(0, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.coeffs(1, 2) == doctest::Approx(1.0 / r2).epsilon(1e-12));
  CHECK(c.coeffs(2, 2) == doctest::Approx(0.5).epsilon(1e-12));

  // Middle level: closed form is 0/0, null-space column (1/sqrt2, 0, -1/sqrt2).
  CHECK(c.null_space_fallback[1]);
  CHECK_FALSE(c.null_space_fallback[0]);
  CHECK_FALSE(c.null_space_fallback[2]);
  CHECK(std::abs(std::abs(c.coeffs(0, 1)) - 1.0 / r2) < 1e-12);
  CHECK(std::abs(c.coeffs(1, 1)) < 1e-12);
  CHECK(std::abs(c.coeffs(0, 1) + c.coeffs(2, 1)) < 1e-12);
}

TEST_CASE("sign convention: largest entry positive") {
  const DressedCluster c = solve_cluster(reference_asymmetric_params(), 1);
  for (int k = 0; k < 3; ++k) {
    Eigen::Index idx = 0;
    c.coeffs.col(k).cwiseAbs().maxCoeff(&idx);
    CHECK(c.coeffs(idx, k) > 0.0);
  }
}

TEST_CASE("invalid ratio raises InvalidRange") {
  SystemParams p = reference_symmetric_params();
  p.eta_l = 6.0 * p.eta_r;
  try {
    solve_cluster(p, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidRange);
  }
}

TEST_CASE("coincident roots raise DegenerateSpectrum") {
  // delta_0 = Delta with a coupling eleven orders below: two levels near Delta.
  SystemParams p;
  p.omega_l = 2e9;
  p.omega_r = 1e9;
  p.omega_c = 4e9;
  p.eta_l = p.eta_r = 1e-2;
  p.omega_d = p.omega_c;
  try {
    solve_cluster(p, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSpectrum);
  }
}

TEST_CASE("asymmetric setting matches a general eigensolver") {
  for (int n = 0; n < 2; ++n) {
    const SystemParams p = reference_asymmetric_params();
    const DressedCluster c = solve_cluster(p, n);
    const Eigen::Matrix3d b = oracle::block(p, n);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(b);
    const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d v = c.coeffs.col(k);
      CHECK((b * v - c.energies[static_cast<std::size_t>(k)] * v).norm() < 1e-10 * scale);
    }
  }
}

// 1000 random parameter draws against two independent oracles.
TEST_CASE("random parameter draws") {
  std::mt19937_64 rng(20240611);
  int fallback_columns = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const SystemParams p = random_params(rng);
    for (int n = 0; n < 2; ++n) {
      const DressedCluster c = solve_cluster(p, n);
      const Eigen::Matrix3d b = oracle::block(p, n);
      const auto bisect = oracle::tridiagonal_eigenvalues(b);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(b);
      const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();

      double sum = 0.0;
      double pairs = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double e = c.energies[static_cast<std::size_t>(k)];
        CHECK(std::abs(e - eig.eigenvalues()(k)) <= 1e-9 * scale);
        CHECK(std::abs(e - bisect[static_cast<std::size_t>(k)]) <= 1e-9 * scale);
        sum += e;
        pairs += e * c.energies[static_cast<std::size_t>((k + 1) % 3)];

        const Eigen::Vector3d v = c.coeffs.col(k);
        const Eigen::Vector3d o = eig.eigenvectors().col(k);
        const double sign = v.dot(o) < 0 ? -1.0 : 1.0;
        CHECK((v - sign * o).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(std::abs(v.norm() - 1.0) < 1e-12);
        CHECK((b * v - e * v).norm() < 1e-10 * scale);
        if (c.null_space_fallback[static_cast<std::size_t>(k)]) ++fallback_columns;
      }
      CHECK(std::abs(c.coeffs.col(0).dot(c.coeffs.col(1))) < 1e-10);
      CHECK(std::abs(c.coeffs.col(0).dot(c.coeffs.col(2))) < 1e-10);
      CHECK(std::abs(c.coeffs.col(1).dot(c.coeffs.col(2))) < 1e-10);

      const Detunings d = detunings(p, n);
      const double second = -(d.delta * d.delta + p.eta_l * p.eta_l + p.eta_r * p.eta_r);
      CHECK(std::abs(sum - d.delta_n) <= 1e-10 * scale);
      CHECK(std::abs(pairs - second) <= 1e-10 * scale * scale);
    }
  }
  CHECK(fallback_columns == 0);
}

TEST_CASE("roots without polishing still match") {
  std::mt19937_64 rng(3);
  SolverTolerances tol;
  tol.newton_polish_steps = 0;
  for (int draw = 0; draw < 100; ++draw) {
    const SystemParams p = random_params(rng);
    const DressedCluster c = solve_cluster(p, 0, tol);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(oracle::block(p, 0));
    const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
    for (int k = 0; k < 3; ++k) CHECK(std::abs(c.energies[static_cast<std::size_t>(k)] - eig.eigenvalues()(k)) <= 1e-9 * scale);
  }
}
