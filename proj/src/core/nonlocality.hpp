#pragma once

#include "core/optim.hpp"
#include "core/types.hpp"

#include <Eigen/Core>

#include <array>

namespace carlgq {

/// Six phase-space displacement settings for the Svetlichny test, one
/// unprimed and one primed (q, p) pair per mode: (a, a', b, b', c, c').
struct SettingsVector {
  std::array<double, 12> values{};

  static SettingsVector zero() { return {}; }
  static SettingsVector from_array(const std::array<double, 12>& v) {
    return {v};
  }
  // Party index 0..2, primed flag; returns the (q, p) pair.
  Eigen::Vector2d setting(int party, bool primed) const;
};

/// Displaced-parity correlation (pi^3/8) W_sigma(xi) of a three-mode state;
/// equals det(sigma)^{-1/2} exp[-xi^T (sigma/2)^{-1} xi], in (0, 1].
double parity_correlation(const CovarianceMatrix& sigma,
                          const Eigen::VectorXd& xi);

/// Cached quadratic form for repeated parity evaluations of one state.
class ParityEvaluator {
public:
  explicit ParityEvaluator(const CovarianceMatrix& sigma);
  double operator()(const Eigen::Matrix<double, 6, 1>& xi) const;

private:
  Eigen::Matrix<double, 6, 6> inv_half_;
  double norm_;
};

/// Mermin-Klyshko pair (M, M'): the four-term displaced-parity combinations
/// over the eight primed/unprimed mixtures of the settings.
std::pair<double, double> mermin_klyshko(const CovarianceMatrix& sigma,
                                         const SettingsVector& settings);

struct SvetlichnyResult {
  double s_value = 0.0;
  double m = 0.0;
  double m_prime = 0.0;
  SettingsVector optimal_settings;
  bool violated = false;  // |S| > 4 + 1e-9
  bool converged = true;
};

/// Svetlichny parameter S = M + M' at fixed settings.
SvetlichnyResult svetlichny(const CovarianceMatrix& sigma,
                            const SettingsVector& settings);

/// Multistart maximization of |S| over the twelve settings parameters. The
/// all-zero settings point is always among the starts, so the result is
/// never below the value there (S = 4 for every pure state).
SvetlichnyResult optimize_svetlichny(const CovarianceMatrix& sigma,
                                     const OptimizerConfig& cfg = {});

}  // namespace carlgq
