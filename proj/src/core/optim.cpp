#include "core/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace carlgq {

OptimizerConfig OptimizerConfig::resolved(int default_restarts,
                                          int default_max_iterations,
                                          double default_tolerance,
                                          double default_penalty) const {
  OptimizerConfig r = *this;
  if (r.restarts <= 0) r.restarts = default_restarts;
  if (r.max_iterations <= 0) r.max_iterations = default_max_iterations;
  if (r.tolerance <= 0.0) r.tolerance = default_tolerance;
  if (r.penalty_weight <= 0.0) r.penalty_weight = default_penalty;
  return r;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt_a,
                       std::uint64_t salt_b) {
  std::uint64_t s = seed;
  (void)splitmix64(s);
  s ^= 0x517cc1b727220a95ULL * (salt_a + 1);
  (void)splitmix64(s);
  s ^= 0x2545f4914f6cdd1dULL * (salt_b + 1);
  return splitmix64(s);
}

double Rng::uniform() {
  return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gauss() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

LocalSearchResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& start, const NelderMeadOptions& options) {
  const int n = static_cast<int>(start.size());
  const double alpha = 1.0, gamma = 2.0, beta = 0.5, delta = 0.5;

  std::vector<Eigen::VectorXd> x(n + 1, start);
  std::vector<double> fx(n + 1);
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& p) {
    ++evals;
    const double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  for (int i = 1; i <= n; ++i) x[i](i - 1) += options.initial_step;
  for (int i = 0; i <= n; ++i) fx[i] = eval(x[i]);

  std::vector<int> order(n + 1);
  std::iota(order.begin(), order.end(), 0);
  bool converged = false;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];

    double diameter = 0.0;
    for (int i = 1; i <= n; ++i)
      diameter = std::max(diameter, (x[order[i]] - x[best]).cwiseAbs().maxCoeff());
    if (fx[worst] - fx[best] <= options.f_tolerance &&
        diameter <= options.x_tolerance) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += x[order[i]];
    centroid /= n;

    const Eigen::VectorXd xr = centroid + alpha * (centroid - x[worst]);
    const double fr = eval(xr);
    if (fr < fx[best]) {
      const Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
    } else if (fr < fx[second]) {
      x[worst] = xr;
      fx[worst] = fr;
    } else {
      const bool outside = fr < fx[worst];
      Eigen::VectorXd xc;
      if (outside)
        xc = centroid + beta * (xr - centroid);
      else
        xc = centroid - beta * (centroid - x[worst]);
      const double fc = eval(xc);
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = xc;
        fx[worst] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          x[order[i]] = x[best] + delta * (x[order[i]] - x[best]);
          fx[order[i]] = eval(x[order[i]]);
        }
      }
    }
  }

  const int best = *std::min_element(
      order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
  return {x[best], fx[best], converged, evals};
}

MultistartResult multistart_minimize(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const std::function<Eigen::VectorXd(int restart, Rng& rng)>& make_start,
    int restarts, std::uint64_t seed, const NelderMeadOptions& options) {
  MultistartResult best;
  best.value = std::numeric_limits<double>::infinity();
  NelderMeadOptions refine = options;
  refine.initial_step = options.initial_step / 8.0;
  std::vector<double> finals(restarts);
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    LocalSearchResult local = nelder_mead(f, make_start(r, rng), options);
    const LocalSearchResult polished = nelder_mead(f, local.x, refine);
    if (polished.value < local.value) local = polished;
    finals[r] = local.value;
    if (local.value < best.value) {
      best.value = local.value;
      best.x = local.x;
      best.converged = local.converged;
      best.winning_restart = r;
    }
  }
  const double agree_tol = 1e-5 * std::max(1.0, std::abs(best.value));
  for (double v : finals)
    if (v <= best.value + agree_tol) ++best.agreeing_restarts;
  if (best.agreeing_restarts >= 2) best.converged = true;
  return best;
}

}  // namespace carlgq
