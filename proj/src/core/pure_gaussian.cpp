#include "core/pure_gaussian.hpp"

#include "core/symplectic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

namespace carlgq {

Eigen::MatrixXd passive_from_unitary(const Eigen::MatrixXcd& u) {
  const int n = static_cast<int>(u.rows());
  Eigen::MatrixXd k(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      const double re = u(j, l).real(), im = u(j, l).imag();
      k(2 * j, 2 * l) = re;
      k(2 * j, 2 * l + 1) = -im;
      k(2 * j + 1, 2 * l) = im;
      k(2 * j + 1, 2 * l + 1) = re;
    }
  return k;
}

Eigen::Matrix2cd unitary2_from_angles(double theta, double alpha1,
                                      double alpha2, double beta) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd rot;
  rot << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  Eigen::Matrix2cd d1 = Eigen::Matrix2cd::Zero();
  d1(0, 0) = std::exp(1i * alpha1);
  d1(1, 1) = std::exp(1i * alpha2);
  Eigen::Matrix2cd d2 = Eigen::Matrix2cd::Identity();
  d2(0, 0) = std::exp(1i * beta);
  return d1 * rot * d2;
}

Eigen::Matrix4d pure_two_mode_cm(const Eigen::VectorXd& params) {
  if (params.size() != 6)
    fail(ErrorCode::invalid_argument, "pure two-mode CM takes 6 parameters");
  const Eigen::MatrixXd k = passive_from_unitary(unitary2_from_angles(
      params(2), params(3), params(4), params(5)));
  Eigen::Vector4d z(std::exp(2.0 * params(0)), std::exp(-2.0 * params(0)),
                    std::exp(2.0 * params(1)), std::exp(-2.0 * params(1)));
  return k * z.asDiagonal() * k.transpose();
}

namespace {

// Orthogonal symplectic K diagonalizing ln(gamma): columns are paired as
// (v, -Omega v) over the positive eigenvectors of X = ln(gamma), completed
// from the null space when a mode is unsqueezed.
void euler_factors(const Eigen::Matrix4d& gamma, Eigen::Matrix4d& k_out,
                   double& r1, double& r2) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(gamma);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    fail(ErrorCode::numerical, "pure CM must be positive definite");
  const Eigen::Matrix4d x = es.eigenvectors() *
                            es.eigenvalues().array().log().matrix().asDiagonal() *
                            es.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> ex(x);
  const Eigen::Matrix4d omega = symplectic_form(2);

  constexpr double kZero = 1e-12;
  std::array<double, 2> lambda{0.0, 0.0};
  std::array<Eigen::Vector4d, 2> v;
  int found = 0;
  for (int i = 3; i >= 0 && found < 2; --i) {
    if (ex.eigenvalues()(i) > kZero) {
      lambda[found] = ex.eigenvalues()(i);
      v[found] = ex.eigenvectors().col(i);
      ++found;
    }
  }
  // Complete with vectors from the (Omega-invariant) zero eigenspace.
  for (int cand = 0; cand < 4 && found < 2; ++cand) {
    Eigen::Vector4d w = Eigen::Vector4d::Unit(cand);
    for (int j = 0; j < found; ++j) {
      w -= v[j].dot(w) * v[j];
      const Eigen::Vector4d ov = -omega * v[j];
      w -= ov.dot(w) * ov;
    }
    if (w.norm() < 0.5) continue;
    v[found] = w.normalized();
    lambda[found] = 0.0;
    ++found;
  }
  if (found < 2)
    fail(ErrorCode::numerical, "could not build Euler basis for pure CM");

  k_out.col(0) = v[0];
  k_out.col(1) = -omega * v[0];
  k_out.col(2) = v[1];
  k_out.col(3) = -omega * v[1];
  r1 = 0.5 * lambda[0];
  r2 = 0.5 * lambda[1];
}

}  // namespace

Eigen::VectorXd pure_two_mode_params(const Eigen::Matrix4d& gamma) {
  Eigen::Matrix4d k;
  double r1 = 0.0, r2 = 0.0;
  euler_factors(gamma, k, r1, r2);

  // Read the mode-space unitary back off the passive blocks.
  Eigen::Matrix2cd u;
  for (int j = 0; j < 2; ++j)
    for (int l = 0; l < 2; ++l)
      u(j, l) = std::complex<double>(k(2 * j, 2 * l), k(2 * j + 1, 2 * l));

  // Entries of the chart: u00 = e^{i(a1+b)} cos t, u01 = e^{i a1} sin t,
  // u10 = -e^{i(a2+b)} sin t, u11 = e^{i a2} cos t, with t in [0, pi/2].
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(0, 1));
  const double theta = std::atan2(s, c);
  double alpha1 = 0.0, alpha2 = 0.0, beta = 0.0;
  constexpr double kTiny = 1e-12;
  if (c >= kTiny && s >= kTiny) {
    alpha1 = std::arg(u(0, 1));
    alpha2 = std::arg(u(1, 1));
    beta = std::arg(u(0, 0)) - alpha1;
  } else if (s < kTiny) {
    alpha2 = std::arg(u(1, 1));
    beta = std::arg(u(0, 0));
  } else {
    alpha1 = std::arg(u(0, 1));
    alpha2 = std::arg(-u(1, 0));
  }
  Eigen::VectorXd p(6);
  p << r1, r2, theta, alpha1, alpha2, beta;
  return p;
}

Eigen::Matrix2d single_mode_symplectic(double phi1, double s, double phi2) {
  auto rot = [](double a) {
    Eigen::Matrix2d r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
  };
  Eigen::Matrix2d z = Eigen::Vector2d(std::exp(s), std::exp(-s)).asDiagonal();
  return rot(phi1) * z * rot(phi2);
}

Eigen::MatrixXcd random_unitary(int n, Rng& rng) {
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = std::complex<double>(rng.gauss(), rng.gauss());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : 1.0;
  }
  return q;
}

Eigen::MatrixXd random_symplectic(int n_modes, Rng& rng, double r_max) {
  const Eigen::MatrixXd k1 =
      passive_from_unitary(random_unitary(n_modes, rng));
  const Eigen::MatrixXd k2 =
      passive_from_unitary(random_unitary(n_modes, rng));
  Eigen::VectorXd z(2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    const double r = rng.uniform(-r_max, r_max);
    z(2 * j) = std::exp(r);
    z(2 * j + 1) = std::exp(-r);
  }
  return k1 * z.asDiagonal() * k2;
}

CovarianceMatrix random_pure_cm(int n_modes, Rng& rng, double r_max) {
  const Eigen::MatrixXd k = passive_from_unitary(random_unitary(n_modes, rng));
  Eigen::VectorXd z(2 * n_modes);
  for (int j = 0; j < n_modes; ++j) {
    const double r = rng.uniform(-r_max, r_max);
    z(2 * j) = std::exp(2.0 * r);
    z(2 * j + 1) = std::exp(-2.0 * r);
  }
  return CovarianceMatrix::from_matrix(k * z.asDiagonal() * k.transpose());
}

}  // namespace carlgq
