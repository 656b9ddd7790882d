#include "core/correlations.hpp"

#include "core/pure_gaussian.hpp"
#include "core/symplectic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace carlgq {

namespace {

// Feasibility slack for gamma <= sigma: min eig(sigma - gamma) >= -slack,
// relative to the entry scale (eigenvalue noise grows with the norm).
constexpr double kFeasTol = 1e-9;
double feasibility_slack(const Eigen::Matrix4d& sigma) {
  return kFeasTol * std::max(1.0, sigma.cwiseAbs().maxCoeff());
}

}  // namespace

Eigen::Matrix2d MeasurementSeed::matrix() const {
  if (!(lambda > 0.0))
    fail(ErrorCode::invalid_argument, "measurement squeeze must be positive");
  Eigen::Matrix2d rot;
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return rot * Eigen::Vector2d(lambda, 1.0 / lambda).asDiagonal() *
         rot.transpose();
}

PptResult is_ppt(const CovarianceMatrix& sigma, const ModePartition& partition,
                 double tol) {
  partition.validate(sigma.modes());
  if (partition.tripartite_partition())
    fail(ErrorCode::invalid_argument, "PPT test needs a two-party partition");
  if (!partition.covers_all(sigma.modes()))
    fail(ErrorCode::invalid_argument,
         "PPT partition must cover all modes; reduce the state first");
  const CovarianceMatrix pt = partial_transpose(sigma, partition.party_b);
  const std::vector<double> nu = symplectic_eigenvalues(pt);
  return {nu.front() >= 1.0 - tol, nu.front()};
}

double pure_entanglement(const CovarianceMatrix& sigma,
                         const ModePartition& partition, double tol) {
  partition.validate(sigma.modes());
  if (partition.tripartite_partition())
    fail(ErrorCode::invalid_argument,
         "entanglement is computed across a two-party partition");
  if (!partition.covers_all(sigma.modes()))
    fail(ErrorCode::invalid_argument, "partition must cover all modes");
  const double det = sigma.matrix().determinant();
  if (std::abs(det - 1.0) > tol)
    fail(ErrorCode::invalid_argument,
         "state is mixed (det sigma = " + std::to_string(det) +
             "); use gaussian_entanglement for the convex roof");
  const CovarianceMatrix marginal = reduce(sigma, partition.party_a);
  return std::max(0.0, 0.5 * std::log(marginal.matrix().determinant()));
}

RoofResult gaussian_entanglement(const CovarianceMatrix& sigma,
                                 const ModePartition& partition,
                                 const OptimizerConfig& cfg) {
  partition.validate(sigma.modes());
  if (sigma.modes() != 2 || partition.tripartite_partition() ||
      partition.party_a.size() != 1 || partition.party_b.size() != 1)
    fail(ErrorCode::invalid_argument,
         "the convex roof is implemented for two-mode states, partition 1|1");
  const ValidityReport validity =
      validate_cm(sigma, gate_tolerance(sigma.matrix()));
  if (!validity.is_physical)
    fail(ErrorCode::unphysical, "input is not a bona fide covariance matrix");

  // Work with party A listed first.
  const int a = partition.party_a[0];
  const int b = partition.party_b[0];
  const std::vector<int> order{a, b};
  const Eigen::Matrix4d s4 = reduce(sigma, order).matrix();

  const OptimizerConfig opt = cfg.resolved(32, 2500, 1e-11, 1e4);

  // Always-feasible seed: sigma = S D S^T gives the pure gamma = S S^T with
  // sigma - gamma = S (D - 1) S^T >= 0.
  const WilliamsonDecomposition wil =
      williamson(CovarianceMatrix::from_matrix(s4));
  const Eigen::Matrix4d gamma0 = wil.S * wil.S.transpose();
  const Eigen::VectorXd p0 = pure_two_mode_params(gamma0);

  struct Incumbent {
    double value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd params;
  } incumbent;

  auto objective_parts = [&](const Eigen::VectorXd& p, double& obj,
                             double& violation) {
    const Eigen::Matrix4d gamma = pure_two_mode_cm(p);
    obj = 0.5 * std::log(gamma.topLeftCorner<2, 2>().determinant());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(s4 - gamma,
                                                      Eigen::EigenvaluesOnly);
    violation = std::max(0.0, -es.eigenvalues().minCoeff());
  };
  const double feas_slack = feasibility_slack(s4);
  auto penalized = [&](const Eigen::VectorXd& p) {
    if (p.head<2>().cwiseAbs().maxCoeff() > 20.0)
      return std::numeric_limits<double>::max();  // e^{40}-scale CMs: reject
    double obj = 0.0, violation = 0.0;
    objective_parts(p, obj, violation);
    if (violation <= feas_slack && obj < incumbent.value) {
      incumbent.value = obj;
      incumbent.params = p;
    }
    return obj + opt.penalty_weight * violation;
  };

  NelderMeadOptions nm;
  nm.max_iterations = opt.max_iterations;
  // The penalty term carries eigenvalue noise proportional to the entry
  // scale; the simplex f-spread cannot shrink below that floor.
  nm.f_tolerance =
      std::max(opt.tolerance, 4e-12 * s4.cwiseAbs().maxCoeff());
  nm.x_tolerance = 1e-7;
  nm.initial_step = 0.2;

  const double r_scale = std::max(1.0, p0.head<2>().cwiseAbs().maxCoeff());
  auto make_start = [&](int restart, Rng& rng) -> Eigen::VectorXd {
    if (restart == 0) return p0;
    Eigen::VectorXd p(6);
    if (restart % 2 == 1) {
      // Perturbation of the feasible seed.
      p = p0;
      for (int i = 0; i < 6; ++i) p(i) += 0.35 * rng.gauss();
    } else {
      p << r_scale * rng.gauss(), r_scale * rng.gauss(),
          rng.uniform(0.0, M_PI_2), rng.uniform(0.0, M_PI),
          rng.uniform(0.0, M_PI), rng.uniform(0.0, M_PI);
    }
    return p;
  };

  const MultistartResult ms = multistart_minimize(
      penalized, make_start, opt.restarts, opt.seed, nm);

  RoofResult out;
  out.converged = ms.converged && std::isfinite(incumbent.value);
  if (!std::isfinite(incumbent.value)) {
    // No feasible point was ever evaluated; fall back to the seed.
    incumbent.value = 0.5 * std::log(gamma0.topLeftCorner<2, 2>().determinant());
    incumbent.params = p0;
    out.converged = false;
  }
  out.value = std::max(0.0, incumbent.value);
  out.gamma_params = incumbent.params;
  out.gamma = pure_two_mode_cm(incumbent.params);
  return out;
}

CovarianceMatrix conditional_cm(const CovarianceMatrix& sigma,
                                int measured_mode,
                                const MeasurementSeed& seed) {
  const int n = sigma.modes();
  if (measured_mode < 1 || measured_mode > n)
    fail(ErrorCode::invalid_argument, "measured mode out of range");
  if (n < 2)
    fail(ErrorCode::invalid_argument,
         "conditional state needs at least one unmeasured mode");
  std::vector<int> kept;
  for (int m = 1; m <= n; ++m)
    if (m != measured_mode) kept.push_back(m);

  const Eigen::MatrixXd& s = sigma.matrix();
  const int bi = 2 * (measured_mode - 1);
  Eigen::MatrixXd sa(2 * n - 2, 2 * n - 2);
  Eigen::MatrixXd c(2 * n - 2, 2);
  for (int i = 0; i < n - 1; ++i) {
    const int ri = 2 * (kept[i] - 1);
    c.block<2, 2>(2 * i, 0) = s.block<2, 2>(ri, bi);
    for (int j = 0; j < n - 1; ++j)
      sa.block<2, 2>(2 * i, 2 * j) =
          s.block<2, 2>(ri, 2 * (kept[j] - 1));
  }
  const Eigen::Matrix2d sb = s.block<2, 2>(bi, bi);

  const Eigen::Matrix2d m = sb + seed.matrix();
  const double det = m.determinant();
  if (!(std::abs(det) > 1e-300))
    fail(ErrorCode::numerical, "singular measured block");
  Eigen::Matrix2d minv;
  minv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  minv /= det;
  const Eigen::MatrixXd cond = sa - c * minv * c.transpose();
  return CovarianceMatrix::from_matrix(0.5 * (cond + cond.transpose()));
}

DiscordResult discord(const CovarianceMatrix& sigma,
                      DiscordDirection direction, const OptimizerConfig& cfg) {
  if (sigma.modes() != 2)
    fail(ErrorCode::invalid_argument, "discord is implemented for two modes");
  const ValidityReport validity =
      validate_cm(sigma, gate_tolerance(sigma.matrix()));
  if (!validity.is_physical)
    fail(ErrorCode::unphysical, "input is not a bona fide covariance matrix");

  const int probed = (direction == DiscordDirection::left) ? 2 : 1;
  const double det_ab = sigma.matrix().determinant();
  const double det_probed =
      sigma.matrix().block<2, 2>(2 * (probed - 1), 2 * (probed - 1))
          .determinant();

  auto objective = [&](const Eigen::VectorXd& p) {
    const double u = p(0);
    if (std::abs(u) > 8.0) {
      // Soft wall at the lambda in [e^-8, e^8] search box.
      return 1e3 * (std::abs(u) - 8.0) + 10.0;
    }
    const MeasurementSeed seed{std::exp(u), p(1)};
    const CovarianceMatrix cond = conditional_cm(sigma, probed, seed);
    return 0.5 * std::log(det_probed * cond.matrix().determinant() / det_ab);
  };

  const OptimizerConfig opt = cfg.resolved(16, 1200, 1e-12, 1e4);
  NelderMeadOptions nm;
  nm.max_iterations = opt.max_iterations;
  nm.f_tolerance = opt.tolerance;
  nm.x_tolerance = 1e-9;
  nm.initial_step = 0.3;

  auto make_start = [&](int restart, Rng& rng) -> Eigen::VectorXd {
    Eigen::VectorXd p(2);
    if (restart == 0)
      p << 0.0, 0.0;  // heterodyne
    else
      p << rng.uniform(-5.0, 5.0), rng.uniform(0.0, M_PI);
    return p;
  };

  const MultistartResult ms =
      multistart_minimize(objective, make_start, opt.restarts, opt.seed, nm);
  DiscordResult out;
  out.value = std::max(0.0, ms.value);
  out.seed = MeasurementSeed{std::exp(ms.x(0)),
                             std::remainder(ms.x(1), M_PI)};
  out.converged = ms.converged;
  return out;
}

ResidualResult residual_tripartite(const CovarianceMatrix& sigma,
                                   const OptimizerConfig& cfg,
                                   double purity_tol) {
  if (sigma.modes() != 3)
    fail(ErrorCode::invalid_argument,
         "residual tripartite entanglement needs a three-mode state");
  const double det = sigma.matrix().determinant();
  if (std::abs(det - 1.0) > purity_tol)
    fail(ErrorCode::invalid_argument,
         "residual tripartite entanglement is defined here for pure states "
         "only (det sigma = " + std::to_string(det) + ")");

  // One-vs-rest terms, pure-state formula.
  std::array<double, 3> one_vs_rest{};
  for (int j = 0; j < 3; ++j) {
    const Eigen::Matrix2d marginal =
        sigma.matrix().block<2, 2>(2 * j, 2 * j);
    one_vs_rest[j] = std::max(0.0, 0.5 * std::log(marginal.determinant()));
  }

  ResidualResult out;
  out.converged = true;
  const std::array<std::pair<int, int>, 3> pairs{
      std::make_pair(1, 2), std::make_pair(1, 3), std::make_pair(2, 3)};
  for (int k = 0; k < 3; ++k) {
    const std::vector<int> modes{pairs[k].first, pairs[k].second};
    OptimizerConfig sub = cfg;
    sub.seed = mix_seed(cfg.seed, 0xE12 + static_cast<std::uint64_t>(k));
    const RoofResult roof = gaussian_entanglement(
        reduce(sigma, modes), ModePartition::bipartite({1}, {2}), sub);
    out.pairwise[k] = roof.value;
    out.converged = out.converged && roof.converged;
  }
  const double e12 = out.pairwise[0], e13 = out.pairwise[1],
               e23 = out.pairwise[2];
  out.decompositions[0] = one_vs_rest[0] - e12 - e13;
  out.decompositions[1] = one_vs_rest[1] - e12 - e23;
  out.decompositions[2] = one_vs_rest[2] - e13 - e23;

  // Lowest probe index wins ties within 1e-6.
  int probe = 0;
  for (int j = 1; j < 3; ++j)
    if (out.decompositions[j] < out.decompositions[probe] - 1e-6) probe = j;
  out.probe_mode = probe + 1;
  out.value = out.decompositions[probe];
  return out;
}

}  // namespace carlgq
