#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's numerical code paths.

#include <array>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "coopqed/dynamics.hpp"
#include "coopqed/params.hpp"

namespace oracle {

using cplx = std::complex<double>;

/// Eigenvalues of a symmetric tridiagonal 3x3 matrix by Sturm-count bisection,
/// ascending.
std::array<double, 3> tridiagonal_eigenvalues(const Eigen::Matrix3d& m, double rel_tol = 1e-15);

/// The block matrix written out directly from the parameters.
Eigen::Matrix3d block(const coopqed::SystemParams& p, int n);

/// Depressed-cubic coefficients by expanding det(x + s - B) numerically at
/// four points and fitting the monic cubic.
struct Cubic {
  double p, q;
};
Cubic depressed_cubic_by_expansion(const Eigen::Matrix3d& b);

/// Exact lab-frame propagation of the six-state confined system. The drive
/// is removed by the rotating transformation on the n = 1 cluster, which
/// leaves a constant Hermitian generator that is diagonalised once.
class ExactPropagator {
 public:
  ExactPropagator(const coopqed::SystemParams& p, bool include_cavity_offset = true);
  std::array<cplx, 6> at(const std::array<cplx, 6>& psi0, double t) const;

 private:
  Eigen::Matrix<double, 6, 1> evals_;
  Eigen::Matrix<cplx, 6, 6> evecs_;
  double omega_d_;
};

/// Generic partial trace by explicit index contraction over L (x) C (x) R with
/// dims (2, 3, 2). keep[i] tells whether subsystem i survives.
Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, std::array<bool, 3> keep);

/// Full 12-dimensional pure-state vector for the confined amplitudes.
Eigen::VectorXcd embed(const coopqed::BareState& s);

/// Wootters concurrence from the eigenvalues of rho * rho_tilde.
double wootters(const Eigen::Matrix4cd& rho);

/// Haar-like random normalized 6-amplitude state.
coopqed::BareState random_state(std::mt19937_64& rng);

/// Haar-like random pure state on the full 12-dimensional space.
Eigen::VectorXcd random_full_state(std::mt19937_64& rng);

/// Purity of a reduction of a full 12-dimensional pure state.
double purity(const Eigen::VectorXcd& psi, std::array<bool, 3> keep);

}  // namespace oracle
