// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each check runs at its stated tolerance against the grid
// rho in {0.1, 0.5, 1, 2, 10} x tau in {0.5, 1, 2, 3} unless noted.

#include "core/carl.hpp"
#include "core/correlations.hpp"
#include "core/io.hpp"
#include "core/nonlocality.hpp"
#include "core/pure_gaussian.hpp"
#include "core/symplectic.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace carlgq;

namespace {

const std::vector<double> kRhoGrid{0.1, 0.5, 1.0, 2.0, 10.0};
const std::vector<double> kTauGrid{0.5, 1.0, 2.0, 3.0};
const ModePartition kOneTwo = ModePartition::bipartite({1}, {2});

struct Outcome {
  int number;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

std::vector<Outcome> g_outcomes;

class Criterion {
 public:
  Criterion(int number, std::string name)
      : number_(number), name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {}

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed_ = false;
      if (!detail_.empty()) detail_ += "; ";
      detail_ += what;
    }
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  ~Criterion() {
    const double secs = elapsed();
    g_outcomes.push_back({number_, name_, passed_, detail_, secs});
    std::printf("[%s] criterion %d (%s): %s(%.1f s)\n",
                passed_ ? "PASS" : "FAIL", number_, name_.c_str(),
                detail_.empty() ? "" : (detail_ + " ").c_str(), secs);
    std::fflush(stdout);
  }

 private:
  int number_;
  std::string name_;
  bool passed_ = true;
  std::string detail_;
  std::chrono::steady_clock::time_point start_;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

CovarianceMatrix carl_state(double rho, double tau) {
  CarlParams p;
  p.rho = rho;
  return evolve_cm(p, tau);
}

double roof_of_pair(const CovarianceMatrix& cm, int first, int second,
                    uint64_t seed) {
  OptimizerConfig cfg;
  cfg.seed = seed;
  const std::vector<int> modes{first, second};
  return gaussian_entanglement(reduce(cm, modes), kOneTwo, cfg).value;
}

void criterion_1() {
  Criterion c(1, "vacuum baseline");
  for (double rho : {0.1, 1.0, 10.0}) {
    const Eigen::MatrixXd sigma = carl_state(rho, 0.0).matrix();
    c.require((sigma.array() == Eigen::MatrixXd::Identity(6, 6).array()).all(),
              "sigma(rho,0) != identity at rho=" + num(rho));
  }
  const CovarianceMatrix vac3 = CovarianceMatrix::vacuum(3);
  const double s0 = svetlichny(vac3, SettingsVector::zero()).s_value;
  c.require(std::abs(s0 - 4.0) <= 1e-9,
            "S(0)=" + num(s0) + " not 4 within 1e-9");

  OptimizerConfig cfg;
  cfg.seed = 1;
  const CovarianceMatrix vac2 = CovarianceMatrix::vacuum(2);
  c.require(gaussian_entanglement(vac2, kOneTwo, cfg).value <= 1e-9,
            "vacuum roof entanglement nonzero");
  c.require(discord(vac2, DiscordDirection::left, cfg).value <= 1e-9,
            "vacuum left discord nonzero");
  c.require(discord(vac2, DiscordDirection::right, cfg).value <= 1e-9,
            "vacuum right discord nonzero");
  c.require(residual_tripartite(vac3, cfg).value <= 1e-9,
            "vacuum residual tripartite nonzero");
  c.require(pure_entanglement(vac3, ModePartition::bipartite({1}, {2, 3})) <=
                1e-9,
            "vacuum pure entanglement nonzero");
  c.require(c.elapsed() < 1.0, "runtime exceeded 1 s");
}

void criterion_2() {
  Criterion c(2, "dynamics invariants");
  for (double rho : kRhoGrid)
    for (double tau : kTauGrid) {
      CarlParams p;
      p.rho = rho;
      const CarlStateReport rep = carl_state_report(p, tau);
      const std::string at = " at (" + num(rho) + "," + num(tau) + ")";
      c.require(rep.purity_residual <= 1e-6,
                "|det sigma - 1| = " + num(rep.purity_residual) + at);
      c.require(rep.conservation_residual <= 1e-6,
                "|n1-n2-n3| = " + num(rep.conservation_residual) + at);
      c.require(std::abs(rep.constraint_residual) <= 1e-6,
                "constraint residual = " + num(rep.constraint_residual) + at);
      c.require(rep.thermal_marginal_residual <= 1e-5,
                "marginal determinant residual = " +
                    num(rep.thermal_marginal_residual) + at);
    }
  c.require(c.elapsed() < 10.0, "runtime exceeded 10 s");
}

void criterion_3() {
  Criterion c(3, "separability structure");
  const std::vector<int> pair23{2, 3};
  for (double rho : kRhoGrid)
    for (double tau : kTauGrid) {
      const CovarianceMatrix cm = carl_state(rho, tau);
      const std::string at = " at (" + num(rho) + "," + num(tau) + ")";
      c.require(is_ppt(reduce(cm, pair23), kOneTwo).ppt,
                "sigma_23 not PPT" + at);
      const PptResult one = is_ppt(cm, ModePartition::bipartite({1}, {2, 3}));
      const PptResult two = is_ppt(cm, ModePartition::bipartite({2}, {1, 3}));
      const PptResult three =
          is_ppt(cm, ModePartition::bipartite({3}, {1, 2}));
      c.require(one.min_pt_symplectic_eigenvalue < 1.0 - 1e-6,
                "1|(23) not NPT" + at);
      c.require(two.min_pt_symplectic_eigenvalue < 1.0 - 1e-6,
                "2|(13) not NPT" + at);
      c.require(three.min_pt_symplectic_eigenvalue < 1.0 - 1e-6,
                "3|(12) not NPT" + at);
    }
}

void criterion_4() {
  Criterion c(4, "regime contrast");
  const CovarianceMatrix quantum = carl_state(0.1, 2.0);
  const CovarianceMatrix semiclassical = carl_state(10.0, 2.0);
  const double e13_quantum = roof_of_pair(quantum, 1, 3, 41);
  const double e13_semi = roof_of_pair(semiclassical, 1, 3, 42);
  const double e12_quantum = roof_of_pair(quantum, 1, 2, 43);
  const double e12_semi = roof_of_pair(semiclassical, 1, 2, 44);
  c.require(e13_quantum - e13_semi > 1e-2,
            "E13(rho=0.1)=" + num(e13_quantum) + " does not exceed E13(rho=10)=" +
                num(e13_semi) + " by 1e-2");
  c.require(e12_semi - e12_quantum > 1e-2,
            "E12(rho=10)=" + num(e12_semi) + " does not exceed E12(rho=0.1)=" +
                num(e12_quantum) + " by 1e-2");
}

void criterion_5() {
  Criterion c(5, "discord ceiling and limit");
  const double ln2 = std::log(2.0);
  OptimizerConfig cfg;
  cfg.seed = 5;
  const std::vector<int> pair23{2, 3};

  const double d_right = discord(reduce(carl_state(0.1, 3.0), pair23),
                                 DiscordDirection::right, cfg)
                             .value;
  c.require(d_right >= 0.9 * ln2 && d_right <= ln2 + 1e-3,
            "Dright23(0.1,3)=" + num(d_right) + " outside [0.9 ln2, ln2+1e-3]");
  const double d_left = discord(reduce(carl_state(10.0, 3.0), pair23),
                                DiscordDirection::left, cfg)
                            .value;
  c.require(d_left >= 0.9 * ln2 && d_left <= ln2 + 1e-3,
            "Dleft23(10,3)=" + num(d_left) + " outside [0.9 ln2, ln2+1e-3]");

  for (double rho : kRhoGrid)
    for (double tau : kTauGrid) {
      const CovarianceMatrix s23 = reduce(carl_state(rho, tau), pair23);
      if (!is_ppt(s23, kOneTwo).ppt) continue;
      const std::string at = " at (" + num(rho) + "," + num(tau) + ")";
      const double dl = discord(s23, DiscordDirection::left, cfg).value;
      const double dr = discord(s23, DiscordDirection::right, cfg).value;
      c.require(dl <= ln2 + 1e-3, "separable Dleft=" + num(dl) + at);
      c.require(dr <= ln2 + 1e-3, "separable Dright=" + num(dr) + at);
    }
}

void criterion_6() {
  Criterion c(6, "pure-state consistency");
  Rng rng(606);
  OptimizerConfig cfg;
  cfg.seed = 6;
  int worst_reported = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const CovarianceMatrix cm = random_pure_cm(2, rng, 1.2);
    const double e = pure_entanglement(cm, kOneTwo, 1e-6);
    const double dl = discord(cm, DiscordDirection::left, cfg).value;
    const double dr = discord(cm, DiscordDirection::right, cfg).value;
    const double roof = gaussian_entanglement(cm, kOneTwo, cfg).value;
    if (std::abs(dl - e) > 1e-3 || std::abs(dr - e) > 1e-3 ||
        std::abs(roof - e) > 1e-3) {
      if (++worst_reported <= 3)
        c.require(false, "trial " + std::to_string(trial) + ": E=" + num(e) +
                             " Dl=" + num(dl) + " Dr=" + num(dr) +
                             " roof=" + num(roof));
      else
        c.require(false, "further mismatches suppressed");
    }
  }
}

void criterion_7() {
  Criterion c(7, "residual tripartite entanglement");
  OptimizerConfig cfg;
  cfg.seed = 7;
  for (double rho : kRhoGrid) {
    double previous = -1.0;
    for (double tau : kTauGrid) {
      const ResidualResult res = residual_tripartite(carl_state(rho, tau), cfg);
      const std::string at = " at (" + num(rho) + "," + num(tau) + ")";
      for (double d : res.decompositions)
        c.require(d >= -1e-4, "monogamy violated: " + num(d) + at);
      c.require(res.probe_mode == 1,
                "probe mode " + std::to_string(res.probe_mode) + at);
      c.require(res.value >= previous - 1e-6,
                "E123 decreased along tau" + at);
      previous = res.value;
    }
  }
  const CovarianceMatrix cm = carl_state(1.0, 3.0);
  const ResidualResult res = residual_tripartite(cm, cfg);
  c.require(res.value > res.pairwise[0] && res.value > res.pairwise[1] &&
                res.value > res.pairwise[2],
            "E123=" + num(res.value) + " not above pairwise (" +
                num(res.pairwise[0]) + "," + num(res.pairwise[1]) + "," +
                num(res.pairwise[2]) + ") at (1,3)");
}

void criterion_8() {
  Criterion c(8, "svetlichny behavior");
  OptimizerConfig cfg;
  cfg.seed = 8;
  const double quantum_ceiling = 4.0 * std::sqrt(2.0);
  const double limit = 16.0 / std::pow(3.0, 9.0 / 8.0);

  const double corner =
      std::abs(optimize_svetlichny(carl_state(0.05, 0.05), cfg).s_value);
  c.require(std::abs(corner - 4.0) <= 1e-4,
            "corner |S|=" + num(corner) + " not 4 within 1e-4");

  // tau sweep at rho = 10: nondecreasing and saturating at 16/3^{9/8}.
  double previous = 0.0, last = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double tau = 3.0 * i / 19.0;
    OptimizerConfig cell = cfg;
    cell.seed = mix_seed(cfg.seed, 100 + i);
    last = std::abs(optimize_svetlichny(carl_state(10.0, tau), cell).s_value);
    c.require(last >= previous - 1e-6,
              "|S| decreased at tau=" + num(tau) + " (" + num(last) + " < " +
                  num(previous) + ")");
    previous = last;
  }
  c.require(std::abs(last - limit) <= 0.02 * limit,
            "end-of-sweep |S|=" + num(last) + " not within 2% of " +
                num(limit));

  // Full 20x20 grid at default restarts: quantum ceiling and runtime.
  double grid_max = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double rho = 0.05 * std::pow(20.0 / 0.05, i / 19.0);
    for (int j = 0; j < 20; ++j) {
      const double tau = 3.0 * j / 19.0;
      OptimizerConfig cell = cfg;
      cell.seed = mix_seed(cfg.seed, 1000 + 20 * i + j);
      const double s =
          std::abs(optimize_svetlichny(carl_state(rho, tau), cell).s_value);
      grid_max = std::max(grid_max, s);
      c.require(s <= quantum_ceiling + 1e-6,
                "|S|=" + num(s) + " above 4 sqrt 2 at (" + num(rho) + "," +
                    num(tau) + ")");
    }
  }
  c.require(grid_max <= quantum_ceiling + 1e-6, "grid max above ceiling");
  c.require(c.elapsed() < 300.0, "runtime exceeded 5 minutes");
}

void criterion_9() {
  Criterion c(9, "oracle equivalence");
  OptimizerConfig cfg;
  cfg.seed = 9;
  Rng rng(909);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd s = random_symplectic(2, rng, 0.8);
    Eigen::Vector4d d;
    const double nu1 = 1.0 + rng.uniform(), nu2 = 1.0 + rng.uniform();
    d << nu1, nu1, nu2, nu2;
    const CovarianceMatrix cm =
        CovarianceMatrix::from_matrix(s * d.asDiagonal() * s.transpose());
    const auto dir = (trial % 2 == 0) ? DiscordDirection::left
                                      : DiscordDirection::right;
    const double opt = discord(cm, dir, cfg).value;
    const double grid = oracles::discord_grid_min(cm, dir);
    c.require(opt <= grid + 1e-6 && grid - opt <= 1e-3,
              "discord trial " + std::to_string(trial) + ": opt=" + num(opt) +
                  " grid=" + num(grid));
  }

  int state_index = 0;
  for (double rho : {0.3, 1.0, 10.0}) {
    for (double tau : {1.0, 2.0, 3.0}) {
      const CovarianceMatrix cm = carl_state(rho, tau);
      const double opt = std::abs(optimize_svetlichny(cm, cfg).s_value);
      const double search = oracles::svetlichny_random_search(
          cm, 100000, mix_seed(99, state_index));
      c.require(opt >= search - 1e-3,
                "svetlichny opt=" + num(opt) + " below random search " +
                    num(search) + " at (" + num(rho) + "," + num(tau) + ")");
      ++state_index;
    }
  }
  {
    const CovarianceMatrix cm = carl_state(5.0, 2.5);
    const double opt = std::abs(optimize_svetlichny(cm, cfg).s_value);
    const double search =
        oracles::svetlichny_random_search(cm, 100000, mix_seed(99, 9));
    c.require(opt >= search - 1e-3, "svetlichny opt below search at (5,2.5)");
  }

  for (double rho : {0.2, 1.0, 10.0}) {
    CarlParams p;
    p.rho = rho;
    const Eigen::MatrixXd a =
        drift_matrix(hamiltonian_matrix(p));
    const Eigen::MatrixXd reference = oracles::rk4_propagate(a, 3.0, 1e-3);
    const Eigen::MatrixXd direct = evolve_cm(p, 3.0).matrix();
    const double rel = (direct - reference).norm() / reference.norm();
    c.require(rel <= 1e-5,
              "propagation mismatch " + num(rel) + " at rho=" + num(rho));
  }
}

void criterion_10(const std::string& cli_path) {
  Criterion c(10, "sweep determinism");
  const std::string flags =
      " sweep --grid-rho 0.2:5:3:log --grid-tau 0.5:2.5:3:lin"
      " --measures E12,E13,Dleft23,Smax,constraints --seed 77"
      " --out acceptance_det.csv > acceptance_det.log 2>&1";
  auto read_file = [](const std::string& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  c.require(std::system((cli_path + flags).c_str()) == 0, "first run failed");
  const std::string csv1 = read_file("acceptance_det.csv");
  const std::string man1 = read_file("acceptance_det.csv.manifest");
  c.require(std::system((cli_path + flags).c_str()) == 0, "second run failed");
  c.require(read_file("acceptance_det.csv") == csv1, "CSV bytes differ");
  c.require(read_file("acceptance_det.csv.manifest") == man1,
            "manifest bytes differ");
  c.require(!csv1.empty(), "empty CSV");
  std::remove("acceptance_det.csv");
  std::remove("acceptance_det.csv.manifest");
  std::remove("acceptance_det.log");
}

}  // namespace

int main(int argc, char** argv) {
  std::printf("carlgq acceptance suite\n");
  const std::string cli_path = argc > 1 ? argv[1] :
#ifdef CARLGQ_CLI_PATH
      CARLGQ_CLI_PATH
#else
      "carlgq"
#endif
      ;

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(cli_path);

  int failed = 0;
  for (const auto& outcome : g_outcomes)
    if (!outcome.passed) ++failed;
  std::printf("%d/%d criteria passed\n",
              static_cast<int>(g_outcomes.size()) - failed,
              static_cast<int>(g_outcomes.size()));
  return failed == 0 ? 0 : 1;
}
