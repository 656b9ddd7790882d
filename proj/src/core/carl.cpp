#include "core/carl.hpp"

#include "core/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace carlgq {

void CarlParams::validate() const {
  if (!(rho > 0.0))
    fail(ErrorCode::invalid_argument, "recoil parameter rho must be positive");
  if (!std::isfinite(delta_plus()) || !std::isfinite(delta_minus()))
    fail(ErrorCode::invalid_argument, "detuning parameters must be finite");
}

double recoil_parameter(const RecoilInputs& in) {
  if (in.pump_detuning == 0.0)
    fail(ErrorCode::invalid_argument, "pump-atom detuning must be nonzero");
  for (double v : {in.rabi_frequency, in.light_frequency, in.dipole_moment,
                   in.atom_number, in.mode_volume, in.recoil_frequency,
                   in.epsilon0}) {
    if (!(v > 0.0))
      fail(ErrorCode::invalid_argument,
           "recoil inputs other than the detuning must be positive");
  }
  constexpr double hbar = 1.054571817e-34;  // [J s]
  const double drive = in.rabi_frequency / (2.0 * in.pump_detuning);
  const double collective =
      in.light_frequency * in.dipole_moment * in.dipole_moment *
      in.atom_number /
      (in.mode_volume * hbar * in.epsilon0 * in.recoil_frequency *
       in.recoil_frequency);
  return std::cbrt(drive * drive) * std::cbrt(collective);
}

Matrix6d hamiltonian_matrix(const CarlParams& params) {
  params.validate();
  const double g = std::sqrt(params.rho / 2.0);
  const double dp = params.delta_plus();
  const double dm = params.delta_minus();
  Matrix6d G = Matrix6d::Zero();
  G(0, 0) = G(1, 1) = -dm;  // -delta_- (q1^2 + p1^2)/2
  G(2, 2) = G(3, 3) = dp;   // +delta_+ (q2^2 + p2^2)/2
  // Two-mode squeezing 1-3: g (q1 p3 + p1 q3).
  G(0, 5) = G(5, 0) = g;
  G(1, 4) = G(4, 1) = g;
  // Beamsplitter 2-3: g (q2 p3 - p2 q3).
  G(2, 5) = G(5, 2) = g;
  G(3, 4) = G(4, 3) = -g;
  return G;
}

Matrix6d drift_matrix(const Matrix6d& g) {
  return symplectic_form(3) * g;
}

namespace {

Matrix6d propagator(const CarlParams& params, double tau) {
  const Matrix6d a = drift_matrix(hamiltonian_matrix(params));
  return (a * tau).exp();
}

}  // namespace

CovarianceMatrix evolve_cm(const CarlParams& params, double tau,
                           double tau_cap) {
  params.validate();
  if (tau < 0.0)
    fail(ErrorCode::invalid_argument, "evolution time tau must be nonnegative");
  if (tau > tau_cap)
    fail(ErrorCode::invalid_argument,
         "tau = " + std::to_string(tau) + " exceeds the cap " +
             std::to_string(tau_cap));
  if (tau == 0.0) return CovarianceMatrix::vacuum(3);
  const Matrix6d e = propagator(params, tau);
  if (!e.allFinite())
    fail(ErrorCode::numerical, "matrix exponential overflowed");
  const Matrix6d product = e * e.transpose();
  return CovarianceMatrix::from_matrix(0.5 * (product + product.transpose()));
}

CarlStateReport carl_state_report(const CarlParams& params, double tau,
                                  double tau_cap) {
  CarlStateReport report{evolve_cm(params, tau, tau_cap)};
  const Eigen::MatrixXd& s = report.cm.matrix();
  double constraint = 1.0;
  for (int j = 0; j < 3; ++j) {
    report.populations[j] = 0.25 * s.block<2, 2>(2 * j, 2 * j).trace() - 0.5;
    report.marginal_determinants[j] =
        s.block<2, 2>(2 * j, 2 * j).determinant();
    constraint += (j == 0 ? 1.0 : -1.0) *
                  std::sqrt(report.marginal_determinants[j]);
    report.thermal_marginal_residual = std::max(
        report.thermal_marginal_residual,
        std::abs(report.marginal_determinants[j] -
                 std::pow(2.0 * report.populations[j] + 1.0, 2)));
  }
  report.constraint_residual = constraint;
  report.purity_residual = std::abs(s.determinant() - 1.0);
  report.conservation_residual = std::abs(
      report.populations[0] - report.populations[1] - report.populations[2]);
  report.max_abs_entry = s.cwiseAbs().maxCoeff();
  report.conditioning_warning = report.max_abs_entry > kConditioningLimit;
  return report;
}

}  // namespace carlgq
