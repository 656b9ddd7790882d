#pragma once

#include "core/optim.hpp"
#include "core/types.hpp"

#include <Eigen/Core>

namespace carlgq {

/// Orthogonal symplectic matrix implementing the mode-space unitary U on
/// quadratures: 2x2 block (j,k) = [[Re U_jk, -Im U_jk], [Im U_jk, Re U_jk]].
Eigen::MatrixXd passive_from_unitary(const Eigen::MatrixXcd& u);

/// 2x2 unitary from angles (theta, alpha1, alpha2, beta):
/// diag(e^{i a1}, e^{i a2}) * [[cos t, sin t], [-sin t, cos t]] * diag(e^{i b}, 1).
/// The chart covers all of U(2).
Eigen::Matrix2cd unitary2_from_angles(double theta, double alpha1,
                                      double alpha2, double beta);

/// Pure two-mode CM from the six Euler parameters
/// p = (r1, r2, theta, alpha1, alpha2, beta):
/// gamma = K diag(e^{2 r1}, e^{-2 r1}, e^{2 r2}, e^{-2 r2}) K^T with
/// K = passive_from_unitary(unitary2_from_angles(...)). det gamma = 1 by
/// construction.
Eigen::Matrix4d pure_two_mode_cm(const Eigen::VectorXd& params);

/// Inverse chart: Euler parameters of a symmetric positive definite
/// symplectic 4x4 matrix (i.e. a pure two-mode CM). Exact up to roundoff;
/// used to seed the convex-roof search from a Williamson factorization.
Eigen::VectorXd pure_two_mode_params(const Eigen::Matrix4d& gamma);

/// Single-mode symplectic R(phi1) diag(e^s, e^{-s}) R(phi2).
Eigen::Matrix2d single_mode_symplectic(double phi1, double s, double phi2);

/// Haar-like random unitary (QR of a complex Ginibre sample).
Eigen::MatrixXcd random_unitary(int n, Rng& rng);

/// Random pure N-mode CM with squeezings uniform in [-r_max, r_max].
CovarianceMatrix random_pure_cm(int n_modes, Rng& rng, double r_max);

/// Random symplectic K1 * diag squeeze * K2 with Haar-like passives.
Eigen::MatrixXd random_symplectic(int n_modes, Rng& rng, double r_max);

}  // namespace carlgq
