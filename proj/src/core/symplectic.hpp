#pragma once

#include "core/types.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace carlgq {

/// N-mode symplectic form: direct sum of N copies of [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(int n_modes);

struct ValidityReport {
  bool is_symmetric = false;
  bool is_physical = false;
  bool is_pure = false;
  // Smallest Williamson eigenvalue; NaN when sigma is not positive definite.
  double min_symplectic_eigenvalue = 0.0;
  double determinant = 0.0;
};

/// Checks the bona fide conditions on a raw square matrix: symmetry,
/// sigma + i Omega >= 0 (all symplectic eigenvalues >= 1 - tol) and purity
/// (|det sigma - 1| <= tol). Throws on odd dimension.
ValidityReport validate_cm(const Eigen::MatrixXd& sigma,
                           double tol = kDefaultTol);
ValidityReport validate_cm(const CovarianceMatrix& sigma,
                           double tol = kDefaultTol);

/// Williamson spectrum: moduli of the (purely imaginary) eigenvalues of
/// i*Omega*sigma, deduplicated to N values, ascending. Requires sigma
/// positive definite; pairs are matched within 1e-8 relative tolerance.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& sigma);

/// Principal submatrix on the selected modes (1-based, distinct). Kept modes
/// retain their relative order.
CovarianceMatrix reduce(const CovarianceMatrix& sigma,
                        std::span<const int> modes);

/// P sigma P where P flips the sign of p_k for every listed mode (1-based).
/// The result need not be physical; that is the content of the PPT criterion.
CovarianceMatrix partial_transpose(const CovarianceMatrix& sigma,
                                   std::span<const int> modes);

/// Gaussian Wigner distribution at phase-space point xi (length 2N):
/// W(xi) = pi^-N det(sigma/2)^{-1/2} exp[-xi^T (sigma/2)^{-1} xi].
double wigner(const CovarianceMatrix& sigma, const Eigen::VectorXd& xi);

/// Renyi-2 entropy, (1/2) ln det sigma. Zero exactly on pure states.
/// Throws when det sigma < 1 beyond tolerance (unphysical input).
double renyi2_entropy(const CovarianceMatrix& sigma, double tol = kDefaultTol);

/// Mean occupation of each mode, <n_j> = tr(sigma_j)/4 - 1/2.
std::vector<double> mode_populations(const CovarianceMatrix& sigma);

/// Williamson normal form sigma = S D S^T with S symplectic and
/// D = diag(nu_1, nu_1, ..., nu_N, nu_N).
struct WilliamsonDecomposition {
  Eigen::MatrixXd S;
  std::vector<double> nu;
};
WilliamsonDecomposition williamson(const CovarianceMatrix& sigma);

/// True iff the symmetric matrix is positive definite (smallest eigenvalue
/// above tol * scale).
bool is_positive_definite(const Eigen::MatrixXd& m, double tol = 0.0);

/// Physicality tolerance for internal gates, widened with the magnitude of
/// the entries: eigenvalue noise scales with the matrix norm, so an absolute
/// 1e-9 would misclassify strongly amplified (but exactly symplectic) states.
inline double gate_tolerance(const Eigen::MatrixXd& m) {
  return std::max(kDefaultTol, 1e-12 * m.cwiseAbs().maxCoeff());
}

}  // namespace carlgq
