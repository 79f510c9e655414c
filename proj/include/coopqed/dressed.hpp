#pragma once

#include <array>

#include <Eigen/Core>

#include "coopqed/params.hpp"

namespace coopqed {

/// Depressed form x^3 + p x + q = 0 of the cluster characteristic
/// polynomial, obtained with E = x + shift and shift = delta_n / 3.
struct CubicForm {
  double p = 0.0;
  double q = 0.0;
  double discriminant = 0.0;  ///< q^2/4 + p^3/27
  double shift = 0.0;
};

CubicForm cubic_form(const Detunings& det, const SystemParams& params);

/// Real symmetric 3x3 block of H0 + Hint on (|e,n,g>, |g,n+1,g>, |g,n,e>),
/// with the common offset n*omega_c removed from the diagonal.
Eigen::Matrix3d block_matrix(const Detunings& det, const SystemParams& params);

/// Component rows of DressedCluster::coeffs.
enum Component : int { kLeft = 0, kCavity = 1, kRight = 2 };

struct DressedCluster {
  int n = 0;
  /// energies[k-1] is E_k for k = 1, 2, 3 in the trigonometric labelling,
  /// which puts them in ascending order.
  std::array<double, 3> energies{};
  /// Column k holds (alpha_L, alpha_C, alpha_R) for dressed level k.
  Eigen::Matrix3d coeffs = Eigen::Matrix3d::Zero();
  /// Closed-form normalisation Z_k before the fallback decision.
  std::array<double, 3> norms{};
  /// True where the closed-form column was 0/0 and the null space was used.
  std::array<bool, 3> null_space_fallback{};
  Detunings detunings;
};

struct SolverTolerances {
  double degenerate_relative = 1e-9;
  double arccos_slack = 1e-12;
  double singular_norm_relative = 1e-12;
  /// Newton refinements of each trigonometric root on the cubic; 0 keeps
  /// the closed-form roots untouched.
  int newton_polish_steps = 2;
  /// Adjacent roots closer than this (relative to the spectral scale) are
  /// re-solved by Sturm-count bisection before the degeneracy check.
  double close_root_relative = 1e-6;
};

/// Diagonalises the n-th cluster in closed form.
///
/// Energies come from the trigonometric root formula. Eigenvector columns
/// use the closed-form coefficients normalised by Z_k; when Z_k is
/// numerically zero (the symmetric resonant E = 0 level is the usual case)
/// the column is taken from the null space of (block - E I) instead. Each
/// column is sign-fixed so that its largest-magnitude entry is positive.
///
/// Throws Error(InvalidRange) when the coupling ratio is outside the
/// admissible range, Error(DegenerateSpectrum) when two roots coincide.
DressedCluster solve_cluster(const SystemParams& params, int n, const SolverTolerances& tol = {});

}  // namespace coopqed
