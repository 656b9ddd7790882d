#include "core/nonlocality.hpp"

#include "core/symplectic.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace carlgq {

namespace {

constexpr double kViolationTol = 1e-9;
// Soft radius bound per two-component setting; Wigner decay makes larger
// displacements useless.
constexpr double kSettingRadius = 10.0;

void require_three_modes(const CovarianceMatrix& sigma) {
  if (sigma.modes() != 3)
    fail(ErrorCode::dimension,
         "Svetlichny analysis is defined for three-mode states");
}

}  // namespace

Eigen::Vector2d SettingsVector::setting(int party, bool primed) const {
  const int base = 4 * party + (primed ? 2 : 0);
  return {values[base], values[base + 1]};
}

ParityEvaluator::ParityEvaluator(const CovarianceMatrix& sigma) {
  require_three_modes(sigma);
  const Eigen::Matrix<double, 6, 6> half = 0.5 * sigma.matrix();
  Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(half);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    fail(ErrorCode::numerical, "sigma/2 is singular or indefinite");
  inv_half_ = ldlt.solve(Eigen::Matrix<double, 6, 6>::Identity());
  const double det = sigma.matrix().determinant();
  if (!(det > 0.0)) fail(ErrorCode::numerical, "non-positive determinant");
  norm_ = 1.0 / std::sqrt(det);
}

double ParityEvaluator::operator()(const Eigen::Matrix<double, 6, 1>& xi) const {
  return norm_ * std::exp(-xi.dot(inv_half_ * xi));
}

double parity_correlation(const CovarianceMatrix& sigma,
                          const Eigen::VectorXd& xi) {
  require_three_modes(sigma);
  if (xi.size() != 6)
    fail(ErrorCode::dimension, "settings vector must have six components");
  const ParityEvaluator parity(sigma);
  return parity(xi);
}

namespace {

// Parity values over the eight primed/unprimed mixtures; bit j of the mask
// selects the primed setting of party j (a, b, c).
std::array<double, 8> parity_table(const ParityEvaluator& parity,
                                   const SettingsVector& settings) {
  std::array<double, 8> pi{};
  Eigen::Matrix<double, 6, 1> xi;
  for (int mask = 0; mask < 8; ++mask) {
    for (int party = 0; party < 3; ++party)
      xi.segment<2>(2 * party) = settings.setting(party, mask & (1 << party));
    pi[mask] = parity(xi);
  }
  return pi;
}

std::pair<double, double> mermin_klyshko_from_table(
    const std::array<double, 8>& pi) {
  const double m = pi[0b001] + pi[0b010] + pi[0b100] - pi[0b111];
  const double m_prime = pi[0b110] + pi[0b101] + pi[0b011] - pi[0b000];
  return {m, m_prime};
}

}  // namespace

std::pair<double, double> mermin_klyshko(const CovarianceMatrix& sigma,
                                         const SettingsVector& settings) {
  const ParityEvaluator parity(sigma);
  return mermin_klyshko_from_table(parity_table(parity, settings));
}

SvetlichnyResult svetlichny(const CovarianceMatrix& sigma,
                            const SettingsVector& settings) {
  const ParityEvaluator parity(sigma);
  const auto [m, m_prime] =
      mermin_klyshko_from_table(parity_table(parity, settings));
  SvetlichnyResult result;
  result.m = m;
  result.m_prime = m_prime;
  result.s_value = m + m_prime;
  result.optimal_settings = settings;
  result.violated = std::abs(result.s_value) > 4.0 + kViolationTol;
  return result;
}

SvetlichnyResult optimize_svetlichny(const CovarianceMatrix& sigma,
                                     const OptimizerConfig& cfg) {
  require_three_modes(sigma);
  const ParityEvaluator parity(sigma);
  const OptimizerConfig opt = cfg.resolved(64, 3000, 1e-12, 1e3);

  auto objective = [&](const Eigen::VectorXd& x) {
    SettingsVector s;
    for (int i = 0; i < 12; ++i) s.values[i] = x(i);
    double penalty = 0.0;
    for (int pair = 0; pair < 6; ++pair) {
      const double r = x.segment<2>(2 * pair).norm();
      if (r > kSettingRadius)
        penalty += opt.penalty_weight * (r - kSettingRadius) * (r - kSettingRadius);
    }
    const auto [m, mp] = mermin_klyshko_from_table(parity_table(parity, s));
    return -std::abs(m + mp) + penalty;
  };

  NelderMeadOptions nm;
  nm.max_iterations = opt.max_iterations;
  nm.f_tolerance = opt.tolerance;
  nm.x_tolerance = 1e-9;
  nm.initial_step = 0.3;

  auto make_start = [&](int restart, Rng& rng) -> Eigen::VectorXd {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(12);
    if (restart == 0) return x;
    const double scale = (restart % 3 == 0) ? 0.25 : (restart % 3 == 1 ? 0.6 : 1.0);
    if (restart % 4 == 3) {
      // q-axis pattern: genuine Gaussian optima tend to sit on a line.
      for (int pair = 0; pair < 6; ++pair)
        x(2 * pair) = scale * rng.gauss();
    } else {
      for (int i = 0; i < 12; ++i) x(i) = scale * rng.gauss();
    }
    return x;
  };

  const MultistartResult ms =
      multistart_minimize(objective, make_start, opt.restarts, opt.seed, nm);

  SettingsVector best;
  for (int i = 0; i < 12; ++i) best.values[i] = ms.x(i);
  SvetlichnyResult result = svetlichny(sigma, best);
  result.converged = ms.converged;
  return result;
}

}  // namespace carlgq
