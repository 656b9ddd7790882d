#pragma once

#include "core/types.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>

namespace carlgq {

using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Dimensionless parameters of the three-mode collective-recoil system.
/// Modes 1 and 2 are the lower/upper atomic momentum side modes, mode 3 the
/// back-scattered cavity field. The effective detuning is
/// delta = Delta + 2 n0 / rho; when `detuning` is unset it defaults to the
/// resonant choice delta = 1/rho.
struct CarlParams {
  double rho = 1.0;
  std::optional<double> detuning;  // Delta, the raw pump-cavity detuning
  int n0 = 0;

  double delta() const {
    return detuning ? *detuning + 2.0 * n0 / rho : 1.0 / rho;
  }
  double delta_plus() const { return delta() + 1.0 / rho; }
  double delta_minus() const { return delta() - 1.0 / rho; }
  void validate() const;
};

/// SI inputs of the collective recoil parameter, Eq. for rho.
struct RecoilInputs {
  double rabi_frequency = 0.0;    // Omega_0 [rad/s]
  double pump_detuning = 0.0;     // Delta_0 = omega - omega_0 [rad/s], signed
  double light_frequency = 0.0;   // omega [rad/s]
  double dipole_moment = 0.0;     // mu [C m]
  double atom_number = 0.0;       // N
  double mode_volume = 0.0;       // V [m^3]
  double recoil_frequency = 0.0;  // omega_r [rad/s]
  double epsilon0 = 8.8541878128e-12;  // [F/m]
};

/// rho = (Omega_0 / 2 Delta_0)^{2/3} (omega mu^2 N / (V hbar eps0 omega_r^2))^{1/3}.
double recoil_parameter(const RecoilInputs& inputs);

/// Quadratic form G of the CARL Hamiltonian, H = (1/2) R^T G R + const in
/// the ordering (q1, p1, q2, p2, q3, p3). The 1-3 coupling is of two-mode
/// squeezing type, the 2-3 coupling of beamsplitter type.
Matrix6d hamiltonian_matrix(const CarlParams& params);

/// Drift matrix A = Omega G of the Heisenberg equations dR/dtau = A R;
/// the CM obeys dsigma/dtau = A sigma + sigma A^T.
Matrix6d drift_matrix(const Matrix6d& g);

/// Hard cap on tau; the instability grows entries exponentially.
inline constexpr double kDefaultTauCap = 8.0;
/// Largest CM entry above which results are flagged as ill-conditioned.
inline constexpr double kConditioningLimit = 1e12;

/// Exact propagation of the vacuum CM: sigma(tau) = E E^T with E = exp(A tau).
CovarianceMatrix evolve_cm(const CarlParams& params, double tau,
                           double tau_cap = kDefaultTauCap);

/// State plus the invariants the dynamics must preserve.
struct CarlStateReport {
  CovarianceMatrix cm;
  std::array<double, 3> populations{};
  std::array<double, 3> marginal_determinants{};
  // sqrt(det s1) - sqrt(det s2) - sqrt(det s3) + 1
  double constraint_residual = 0.0;
  double purity_residual = 0.0;       // |det sigma - 1|
  double conservation_residual = 0.0; // |n1 - n2 - n3|
  // max_j |det sigma_j - (2 n_j + 1)^2|
  double thermal_marginal_residual = 0.0;
  double max_abs_entry = 0.0;
  bool conditioning_warning = false;
};

CarlStateReport carl_state_report(const CarlParams& params, double tau,
                                  double tau_cap = kDefaultTauCap);

}  // namespace carlgq
