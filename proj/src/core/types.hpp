#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace carlgq {

/// Error categories; mirrored one-to-one by the C API status codes.
enum class ErrorCode {
  invalid_argument,
  dimension,
  unphysical,
  numerical,
  parse,
  io,
  no_convergence,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

// Default tolerances. Absolute, on min(nu)-1 and |det sigma - 1|.
inline constexpr double kDefaultTol = 1e-9;
// Largest tolerated asymmetry max|sigma - sigma^T|, relative to the
// largest entry magnitude (floored at 1), on ingestion.
inline constexpr double kSymmetryTol = 1e-10;

/// Covariance matrix of an N-mode Gaussian state, second moments in the
/// anticommutator convention: sigma_jk = tr[rho {R_j, R_k}], so the vacuum
/// CM is the identity. Quadrature ordering is (q1, p1, ..., qN, pN).
/// First moments are taken to be zero throughout; a Gaussian state is
/// therefore fully described by this object.
///
/// Construction symmetrizes exactly as (sigma + sigma^T)/2 when the input
/// asymmetry is below kSymmetryTol and rejects it otherwise. Physicality
/// (sigma + i Omega >= 0) is *not* enforced here: partial transposes of
/// entangled states are legitimate CovarianceMatrix values. Operations that
/// require a bona fide state check it themselves.
class CovarianceMatrix {
public:
  static CovarianceMatrix vacuum(int n_modes);
  static CovarianceMatrix from_matrix(const Eigen::MatrixXd& m);

  int modes() const noexcept { return n_modes_; }
  int dim() const noexcept { return 2 * n_modes_; }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

private:
  CovarianceMatrix(Eigen::MatrixXd m, int n_modes)
      : m_(std::move(m)), n_modes_(n_modes) {}

  Eigen::MatrixXd m_;
  int n_modes_;
};

/// Assignment of 1-based mode indices to parties A, B and optionally C.
/// Parties must be disjoint and in range; ops state their own coverage
/// requirements (e.g. PPT needs A and B to cover all modes).
struct ModePartition {
  std::vector<int> party_a;
  std::vector<int> party_b;
  std::vector<int> party_c;  // empty for bipartite partitions

  static ModePartition bipartite(std::vector<int> a, std::vector<int> b);
  static ModePartition tripartite(std::vector<int> a, std::vector<int> b,
                                  std::vector<int> c);

  bool tripartite_partition() const noexcept { return !party_c.empty(); }
  // Throws on duplicate or out-of-range indices.
  void validate(int n_modes) const;
  // True iff the parties cover {1..n_modes} exactly.
  bool covers_all(int n_modes) const;
};

}  // namespace carlgq
