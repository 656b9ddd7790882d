#pragma once

#include "core/optim.hpp"
#include "core/types.hpp"

#include <Eigen/Core>

#include <array>

namespace carlgq {

/// Seed CM of a pure single-mode Gaussian measurement:
/// Gamma = R(theta) diag(lambda, 1/lambda) R(theta)^T, det Gamma = 1.
struct MeasurementSeed {
  double lambda = 1.0;
  double theta = 0.0;
  Eigen::Matrix2d matrix() const;
};

struct PptResult {
  bool ppt = false;
  double min_pt_symplectic_eigenvalue = 0.0;
};

/// Partial-transposition criterion across a two-party partition covering all
/// modes. For 1-vs-M Gaussian bipartitions PPT is equivalent to separability.
PptResult is_ppt(const CovarianceMatrix& sigma, const ModePartition& partition,
                 double tol = kDefaultTol);

/// Renyi-2 entropy of entanglement of a pure state across the partition:
/// (1/2) ln det sigma_A. Rejects mixed inputs (use gaussian_entanglement).
double pure_entanglement(const CovarianceMatrix& sigma,
                         const ModePartition& partition,
                         double tol = 1e-6);

struct RoofResult {
  double value = 0.0;
  Eigen::VectorXd gamma_params;  // Euler parameters of the minimizer
  Eigen::MatrixXd gamma;         // the minimizing pure CM
  bool converged = false;
};

/// Gaussian convex roof of the pure-state Renyi-2 entanglement:
/// inf over pure gamma <= sigma of (1/2) ln det gamma_A, by multistart
/// penalized Nelder-Mead over the six Euler parameters of pure two-mode CMs.
/// The search is seeded from the Williamson factorization sigma = S D S^T
/// (gamma = S S^T is always feasible), so the incumbent is feasible from the
/// start; for pure inputs that seed is already the exact minimizer.
/// Restricted to two-mode states with the 1|2 partition.
RoofResult gaussian_entanglement(const CovarianceMatrix& sigma,
                                 const ModePartition& partition,
                                 const OptimizerConfig& cfg = {});

/// Conditional CM of the unmeasured modes after a pure Gaussian measurement
/// with the given seed on a single mode (1-based index):
/// sigma_A - C (sigma_B + Gamma)^{-1} C^T in the block decomposition with
/// B the measured mode.
CovarianceMatrix conditional_cm(const CovarianceMatrix& sigma,
                                int measured_mode,
                                const MeasurementSeed& seed);

enum class DiscordDirection {
  left,   // probe party B (mode 2): D^{<-}_{A|B}
  right,  // probe party A (mode 1): D^{->}_{A|B}
};

struct DiscordResult {
  double value = 0.0;
  MeasurementSeed seed;
  bool converged = false;
};

/// Gaussian Renyi-2 discord of a two-mode state, minimized over pure
/// Gaussian measurement seeds on the probed mode:
/// D = inf (1/2) ln[ det sigma_B det(cond sigma_A) / det sigma_AB ]
/// (left direction; right swaps the roles of A and B).
DiscordResult discord(const CovarianceMatrix& sigma, DiscordDirection direction,
                      const OptimizerConfig& cfg = {});

struct ResidualResult {
  double value = 0.0;
  int probe_mode = 0;  // 1-based; ties resolved to the lowest index
  // Decomposition value for probe mode 1, 2, 3 respectively.
  std::array<double, 3> decompositions{};
  // Pairwise convex-roof entanglements E(sigma_12), E(sigma_13), E(sigma_23).
  std::array<double, 3> pairwise{};
  bool converged = false;
};

/// Residual genuine tripartite entanglement of a pure three-mode state:
/// minimum over probe modes j of E_{j|rest} - sum of the two reduced
/// entanglements involving j. The one-vs-rest terms use the pure-state
/// formula; the two-mode terms use the Gaussian convex roof.
ResidualResult residual_tripartite(const CovarianceMatrix& sigma,
                                   const OptimizerConfig& cfg = {},
                                   double purity_tol = 1e-6);

}  // namespace carlgq
