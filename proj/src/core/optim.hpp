#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <vector>

namespace carlgq {

/// Shared knobs for the multistart derivative-free searches. Zero-valued
/// fields fall back to per-operation defaults.
struct OptimizerConfig {
  int restarts = 0;
  int max_iterations = 0;
  double tolerance = 0.0;
  double penalty_weight = 0.0;
  std::uint64_t seed = 0;

  OptimizerConfig resolved(int default_restarts, int default_max_iterations,
                           double default_tolerance,
                           double default_penalty) const;
};

std::uint64_t splitmix64(std::uint64_t& state);
/// Stable combination of a seed with salts (restart index, cell index, ...).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt_a,
                       std::uint64_t salt_b = 0);

/// Deterministic generator with portable output: uniforms come straight from
/// splitmix64 bits, normals from Box-Muller. Identical seeds give identical
/// streams on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double gauss();                        // standard normal

private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

struct NelderMeadOptions {
  int max_iterations = 2000;
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-9;
  double initial_step = 0.25;
};

struct LocalSearchResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
  int evaluations = 0;
};

/// Classic Nelder-Mead simplex minimization of f over R^n.
LocalSearchResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& start,
                              const NelderMeadOptions& options);

struct MultistartResult {
  Eigen::VectorXd x;
  double value = 0.0;
  // True when the winning restart met the simplex tolerances, or when at
  // least two independent restarts agreed on the minimum within 1e-5
  // relative.
  bool converged = false;
  int winning_restart = -1;
  int agreeing_restarts = 0;
};

/// Runs one Nelder-Mead search per start point plus a tightened refinement
/// pass from each local optimum, and keeps the minimum. Ties are broken by
/// restart index so concurrent execution could never change the outcome.
MultistartResult multistart_minimize(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const std::function<Eigen::VectorXd(int restart, Rng& rng)>& make_start,
    int restarts, std::uint64_t seed, const NelderMeadOptions& options);

}  // namespace carlgq
