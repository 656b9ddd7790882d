#include "core/types.hpp"

#include <algorithm>
#include <set>

namespace carlgq {

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

CovarianceMatrix CovarianceMatrix::vacuum(int n_modes) {
  if (n_modes < 1) fail(ErrorCode::invalid_argument, "mode count must be >= 1");
  return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes),
                          n_modes);
}

CovarianceMatrix CovarianceMatrix::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    fail(ErrorCode::dimension, "covariance matrix must be square");
  if (m.rows() == 0 || m.rows() % 2 != 0)
    fail(ErrorCode::dimension,
         "covariance matrix dimension must be even and positive, got " +
             std::to_string(m.rows()));
  if (!m.allFinite())
    fail(ErrorCode::invalid_argument, "covariance matrix has non-finite entries");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (asym > kSymmetryTol * scale)
    fail(ErrorCode::invalid_argument,
         "covariance matrix asymmetry " + std::to_string(asym) +
             " exceeds tolerance");
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  return CovarianceMatrix(std::move(sym), static_cast<int>(m.rows()) / 2);
}

ModePartition ModePartition::bipartite(std::vector<int> a, std::vector<int> b) {
  ModePartition p;
  p.party_a = std::move(a);
  p.party_b = std::move(b);
  return p;
}

ModePartition ModePartition::tripartite(std::vector<int> a, std::vector<int> b,
                                        std::vector<int> c) {
  ModePartition p;
  p.party_a = std::move(a);
  p.party_b = std::move(b);
  p.party_c = std::move(c);
  return p;
}

void ModePartition::validate(int n_modes) const {
  if (party_a.empty() || party_b.empty())
    fail(ErrorCode::invalid_argument, "parties A and B must be non-empty");
  std::set<int> seen;
  for (const auto* party : {&party_a, &party_b, &party_c}) {
    for (int idx : *party) {
      if (idx < 1 || idx > n_modes)
        fail(ErrorCode::invalid_argument,
             "mode index " + std::to_string(idx) + " out of range 1.." +
                 std::to_string(n_modes));
      if (!seen.insert(idx).second)
        fail(ErrorCode::invalid_argument,
             "mode index " + std::to_string(idx) + " assigned to two parties");
    }
  }
}

bool ModePartition::covers_all(int n_modes) const {
  return static_cast<int>(party_a.size() + party_b.size() + party_c.size()) ==
         n_modes;
}

}  // namespace carlgq
