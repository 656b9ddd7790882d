#pragma once

// Independent reference implementations used to check the library: these
// deliberately avoid the code paths they validate.

#include "core/carl.hpp"
#include "core/correlations.hpp"
#include "core/nonlocality.hpp"
#include "core/optim.hpp"
#include "core/pure_gaussian.hpp"
#include "core/symplectic.hpp"
#include "core/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>

namespace oracles {

/// Two-mode squeezed vacuum CM with squeezing r (vacuum = identity).
inline carlgq::CovarianceMatrix tmsv(double r) {
  const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
  Eigen::Matrix4d m;
  m << c, 0, s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, -s, 0, c;
  return carlgq::CovarianceMatrix::from_matrix(m);
}

/// Classic fourth-order Runge-Kutta integration of
/// dsigma/dtau = A sigma + sigma A^T from sigma(0) = identity.
inline Eigen::MatrixXd rk4_propagate(const Eigen::MatrixXd& a, double tau,
                                     double step) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  auto deriv = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
    return a * x + x * a.transpose();
  };
  const int n_steps = static_cast<int>(std::ceil(tau / step));
  const double h = tau / n_steps;
  for (int i = 0; i < n_steps; ++i) {
    const Eigen::MatrixXd k1 = deriv(s);
    const Eigen::MatrixXd k2 = deriv(s + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = deriv(s + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = deriv(s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s;
}

/// Discord objective at one measurement seed, from first principles.
inline double discord_objective(const carlgq::CovarianceMatrix& sigma,
                                carlgq::DiscordDirection direction,
                                double lambda, double theta) {
  const int probed = (direction == carlgq::DiscordDirection::left) ? 2 : 1;
  const carlgq::MeasurementSeed seed{lambda, theta};
  const carlgq::CovarianceMatrix cond =
      carlgq::conditional_cm(sigma, probed, seed);
  const Eigen::Matrix2d probed_block =
      sigma.matrix().block<2, 2>(2 * (probed - 1), 2 * (probed - 1));
  return 0.5 * std::log(probed_block.determinant() *
                        cond.matrix().determinant() /
                        sigma.matrix().determinant());
}

/// Dense grid minimization of the discord objective over
/// (ln lambda, theta) in [-8, 8] x [0, pi).
inline double discord_grid_min(const carlgq::CovarianceMatrix& sigma,
                               carlgq::DiscordDirection direction,
                               int n_lambda = 200, int n_theta = 50) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_lambda; ++i) {
    const double u = -8.0 + 16.0 * i / (n_lambda - 1);
    for (int j = 0; j < n_theta; ++j) {
      const double theta = M_PI * j / n_theta;
      best = std::min(best,
                      discord_objective(sigma, direction, std::exp(u), theta));
    }
  }
  return best;
}

/// Svetlichny |S| by plain random search over settings.
inline double svetlichny_random_search(const carlgq::CovarianceMatrix& sigma,
                                       int samples, std::uint64_t seed) {
  carlgq::Rng rng(seed);
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    carlgq::SettingsVector s;
    const double scale = 0.2 + 1.0 * rng.uniform();
    for (double& v : s.values) v = scale * rng.gauss();
    if (i == 0) s = carlgq::SettingsVector::zero();
    best = std::max(best, std::abs(carlgq::svetlichny(sigma, s).s_value));
  }
  return best;
}

struct RoofGridResult {
  double best = std::numeric_limits<double>::infinity();
  long feasible_points = 0;
};

/// Coarse brute-force scan of the convex-roof objective over the Euler
/// parametrization of pure two-mode CMs; only points satisfying the exact
/// feasibility check gamma <= sigma contribute.
inline RoofGridResult roof_grid_scan(const Eigen::Matrix4d& sigma,
                                     double r_lo, double r_hi, int n_r,
                                     int n_angle) {
  RoofGridResult out;
  Eigen::VectorXd p(6);
  for (int i1 = 0; i1 < n_r; ++i1)
    for (int i2 = 0; i2 < n_r; ++i2)
      for (int it = 0; it < n_angle; ++it)
        for (int ia1 = 0; ia1 < n_angle; ++ia1)
          for (int ia2 = 0; ia2 < n_angle; ++ia2)
            for (int ib = 0; ib < n_angle; ++ib) {
              p << r_lo + (r_hi - r_lo) * i1 / (n_r - 1),
                  r_lo + (r_hi - r_lo) * i2 / (n_r - 1),
                  M_PI_2 * it / n_angle, M_PI * ia1 / n_angle,
                  M_PI * ia2 / n_angle, M_PI * ib / n_angle;
              const Eigen::Matrix4d gamma = carlgq::pure_two_mode_cm(p);
              Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(
                  sigma - gamma, Eigen::EigenvaluesOnly);
              if (es.eigenvalues().minCoeff() < -1e-9) continue;
              ++out.feasible_points;
              out.best = std::min(
                  out.best,
                  0.5 * std::log(gamma.topLeftCorner<2, 2>().determinant()));
            }
  return out;
}

/// Riemann-sum normalization of the Wigner function over [-box, box]^{2N}.
inline double wigner_box_integral(const carlgq::CovarianceMatrix& sigma,
                                  double box, int points_per_dim) {
  const int dim = sigma.dim();
  const double h = 2.0 * box / points_per_dim;
  std::vector<int> idx(dim, 0);
  Eigen::VectorXd xi(dim);
  double total = 0.0;
  while (true) {
    for (int d = 0; d < dim; ++d) xi(d) = -box + (idx[d] + 0.5) * h;
    total += carlgq::wigner(sigma, xi);
    int d = 0;
    for (; d < dim; ++d) {
      if (++idx[d] < points_per_dim) break;
      idx[d] = 0;
    }
    if (d == dim) break;
  }
  return total * std::pow(h, dim);
}

}  // namespace oracles
