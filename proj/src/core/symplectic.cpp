#include "core/symplectic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace carlgq {

namespace {

// Relative tolerance used to match the +i nu / -i nu eigenvalue pairs.
constexpr double kPairingTol = 1e-8;

std::vector<int> checked_mode_list(std::span<const int> modes, int n_modes,
                                   bool require_distinct) {
  std::vector<int> out(modes.begin(), modes.end());
  for (int m : out) {
    if (m < 1 || m > n_modes)
      fail(ErrorCode::invalid_argument,
           "mode index " + std::to_string(m) + " out of range 1.." +
               std::to_string(n_modes));
  }
  if (require_distinct) {
    std::vector<int> sorted = out;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorCode::invalid_argument, "mode indices must be distinct");
  }
  return out;
}

}  // namespace

Eigen::MatrixXd symplectic_form(int n_modes) {
  if (n_modes < 1) fail(ErrorCode::invalid_argument, "mode count must be >= 1");
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

bool is_positive_definite(const Eigen::MatrixXd& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return false;
  return es.eigenvalues().minCoeff() > tol;
}

namespace {

// Core of symplectic_eigenvalues, on a raw symmetric matrix. Returns the
// ascending deduplicated moduli of the spectrum of i Omega sigma.
std::vector<double> symplectic_spectrum(const Eigen::MatrixXd& sigma) {
  const int n = static_cast<int>(sigma.rows()) / 2;
  if (!is_positive_definite(sigma))
    fail(ErrorCode::numerical,
         "symplectic spectrum requires a positive definite matrix");
  const Eigen::MatrixXd omega_sigma = symplectic_form(n) * sigma;
  Eigen::EigenSolver<Eigen::MatrixXd> es(omega_sigma, false);
  std::vector<double> moduli(2 * n);
  if (es.info() == Eigen::Success) {
    for (int i = 0; i < 2 * n; ++i) moduli[i] = std::abs(es.eigenvalues()(i));
  } else {
    // The QR iteration can stall on the purely imaginary spectrum. Fall back
    // to the equivalent symmetric problem: the eigenvalues of
    // sigma^{1/2} Omega^T sigma Omega sigma^{1/2} are nu_k^2, twice each.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> root(sigma);
    const Eigen::MatrixXd half = root.eigenvectors() *
                                 root.eigenvalues().cwiseSqrt().asDiagonal() *
                                 root.eigenvectors().transpose();
    const Eigen::MatrixXd omega = symplectic_form(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sq(
        half * omega.transpose() * sigma * omega * half,
        Eigen::EigenvaluesOnly);
    if (sq.info() != Eigen::Success)
      fail(ErrorCode::numerical, "eigenvalue iteration failed");
    for (int i = 0; i < 2 * n; ++i)
      moduli[i] = std::sqrt(std::max(0.0, sq.eigenvalues()(i)));
  }
  std::sort(moduli.begin(), moduli.end());
  std::vector<double> nu(n);
  for (int k = 0; k < n; ++k) {
    const double lo = moduli[2 * k];
    const double hi = moduli[2 * k + 1];
    if (hi - lo > kPairingTol * std::max(1.0, hi))
      fail(ErrorCode::numerical,
           "symplectic eigenvalue pairing failed: " + std::to_string(lo) +
               " vs " + std::to_string(hi));
    nu[k] = 0.5 * (lo + hi);
  }
  return nu;
}

}  // namespace

ValidityReport validate_cm(const Eigen::MatrixXd& sigma, double tol) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0 ||
      sigma.rows() % 2 != 0)
    fail(ErrorCode::dimension,
         "covariance matrix must be square with even dimension");
  ValidityReport report;
  report.is_symmetric =
      (sigma - sigma.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTol;
  report.determinant = sigma.determinant();
  report.is_pure = std::abs(report.determinant - 1.0) <= tol;
  const Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
  if (!is_positive_definite(sym)) {
    report.is_physical = false;
    report.is_pure = false;
    report.min_symplectic_eigenvalue =
        std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  const std::vector<double> nu = symplectic_spectrum(sym);
  report.min_symplectic_eigenvalue = nu.front();
  report.is_physical = nu.front() >= 1.0 - tol;
  if (!report.is_physical) report.is_pure = false;
  return report;
}

ValidityReport validate_cm(const CovarianceMatrix& sigma, double tol) {
  return validate_cm(sigma.matrix(), tol);
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& sigma) {
  return symplectic_spectrum(sigma.matrix());
}

CovarianceMatrix reduce(const CovarianceMatrix& sigma,
                        std::span<const int> modes) {
  const std::vector<int> keep = checked_mode_list(modes, sigma.modes(), true);
  if (keep.empty()) fail(ErrorCode::invalid_argument, "empty mode selection");
  const int m = static_cast<int>(keep.size());
  Eigen::MatrixXd out(2 * m, 2 * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out.block<2, 2>(2 * i, 2 * j) =
          sigma.matrix().block<2, 2>(2 * (keep[i] - 1), 2 * (keep[j] - 1));
  return CovarianceMatrix::from_matrix(out);
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& sigma,
                                   std::span<const int> modes) {
  const std::vector<int> flip = checked_mode_list(modes, sigma.modes(), false);
  Eigen::VectorXd signs = Eigen::VectorXd::Ones(sigma.dim());
  for (int m : flip) signs(2 * (m - 1) + 1) = -1.0;
  Eigen::MatrixXd out =
      signs.asDiagonal() * sigma.matrix() * signs.asDiagonal();
  return CovarianceMatrix::from_matrix(out);
}

double wigner(const CovarianceMatrix& sigma, const Eigen::VectorXd& xi) {
  if (xi.size() != sigma.dim())
    fail(ErrorCode::dimension, "phase-space vector length must be 2N");
  if (!xi.allFinite())
    fail(ErrorCode::invalid_argument, "phase-space vector must be finite");
  const Eigen::MatrixXd half = 0.5 * sigma.matrix();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(half);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    fail(ErrorCode::numerical, "sigma/2 is singular or indefinite");
  const double det_half = ldlt.vectorD().prod();
  if (!(det_half > 0.0))
    fail(ErrorCode::numerical, "sigma/2 is numerically singular");
  const double quad = xi.dot(ldlt.solve(xi));
  const double norm =
      std::pow(std::numbers::pi, -sigma.modes()) / std::sqrt(det_half);
  return norm * std::exp(-quad);
}

double renyi2_entropy(const CovarianceMatrix& sigma, double tol) {
  const double det = sigma.matrix().determinant();
  if (det < 1.0 - tol)
    fail(ErrorCode::unphysical,
         "det sigma = " + std::to_string(det) + " < 1: not a physical state");
  return 0.5 * std::log(std::max(det, 1.0));
}

std::vector<double> mode_populations(const CovarianceMatrix& sigma) {
  std::vector<double> n(sigma.modes());
  for (int j = 0; j < sigma.modes(); ++j)
    n[j] = 0.25 * sigma.matrix().block<2, 2>(2 * j, 2 * j).trace() - 0.5;
  return n;
}

WilliamsonDecomposition williamson(const CovarianceMatrix& sigma) {
  const int n = sigma.modes();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma.matrix());
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    fail(ErrorCode::numerical,
         "Williamson decomposition requires a positive definite matrix");
  const Eigen::VectorXd evals = es.eigenvalues();
  const Eigen::MatrixXd root_half =
      es.eigenvectors() * evals.cwiseSqrt().asDiagonal() *
      es.eigenvectors().transpose();
  const Eigen::MatrixXd root_inv =
      es.eigenvectors() * evals.cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();

  // B = sigma^{-1/2} Omega sigma^{-1/2} is antisymmetric with eigenvalue
  // pairs +-i/nu_k. Its block normal form O^T B O = oplus (1/nu_k) omega is
  // built from the eigenspaces of the symmetric matrix K = B^T B (eigenvalue
  // 1/nu_k^2, twice each): for a unit vector x in such an eigenspace the
  // pair (x, -B x / mu) spans an invariant plane on which B rotates by
  // mu = 1/nu. Only symmetric eigenproblems are involved; the nonsymmetric
  // QR iteration stalls on this purely imaginary spectrum.
  Eigen::MatrixXd b = root_inv * symplectic_form(n) * root_inv;
  b = 0.5 * (b - b.transpose().eval());
  const Eigen::MatrixXd k_sym = b.transpose() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ek(k_sym);
  if (ek.info() != Eigen::Success)
    fail(ErrorCode::numerical, "eigenvalue iteration failed");

  Eigen::MatrixXd q(2 * n, 2 * n);
  WilliamsonDecomposition w;
  w.nu.resize(n);
  Eigen::VectorXd dinv_sqrt(2 * n);
  int pairs = 0;
  for (int i = 0; i < 2 * n && pairs < n; ++i) {
    Eigen::VectorXd x = ek.eigenvectors().col(i);
    for (int j = 0; j < 2 * pairs; ++j) x -= q.col(j).dot(x) * q.col(j);
    const double norm = x.norm();
    if (norm < 0.5) continue;  // partner of an already-chosen vector
    x /= norm;
    const double mu = std::sqrt(std::max(0.0, x.dot(k_sym * x)));
    if (!(mu > 0.0))
      fail(ErrorCode::numerical, "singular block in Williamson form");
    q.col(2 * pairs) = x;
    q.col(2 * pairs + 1) = -(b * x) / mu;
    w.nu[pairs] = 1.0 / mu;
    dinv_sqrt(2 * pairs) = dinv_sqrt(2 * pairs + 1) =
        1.0 / std::sqrt(w.nu[pairs]);
    ++pairs;
  }
  if (pairs < n)
    fail(ErrorCode::numerical, "could not complete the Williamson basis");
  w.S = root_half * q * dinv_sqrt.asDiagonal();
  return w;
}

}  // namespace carlgq
