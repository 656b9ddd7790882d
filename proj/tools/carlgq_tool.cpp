// carlgq command-line front end. Links the C API only; all orchestration
// (grids, CSV, manifests, threading) lives here.

#include "carlgq.h"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

int exit_code_for(cgq_status status) {
  switch (status) {
    case CGQ_OK:
      return kExitOk;
    case CGQ_ERR_INVALID_ARGUMENT:
    case CGQ_ERR_DIMENSION:
    case CGQ_ERR_PARSE:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

[[noreturn]] void die(cgq_status status, const std::string& context) {
  std::fprintf(stderr, "carlgq: %s: %s (%s)\n", context.c_str(),
               cgq_status_message(status), cgq_last_error());
  std::exit(exit_code_for(status));
}

void check(cgq_status status, const std::string& context) {
  if (status != CGQ_OK) die(status, context);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Owning wrapper for cgq_cm handles.
struct Cm {
  cgq_cm* handle = nullptr;
  Cm() = default;
  explicit Cm(cgq_cm* h) : handle(h) {}
  Cm(Cm&& other) noexcept : handle(other.handle) { other.handle = nullptr; }
  Cm& operator=(Cm&& other) noexcept {
    if (this != &other) {
      cgq_cm_free(handle);
      handle = other.handle;
      other.handle = nullptr;
    }
    return *this;
  }
  Cm(const Cm&) = delete;
  Cm& operator=(const Cm&) = delete;
  ~Cm() { cgq_cm_free(handle); }
  cgq_cm** out() { return &handle; }
  operator cgq_cm*() const { return handle; }
};

// The CLI derives per-cell, per-measure seeds itself so that sweep output is
// independent of scheduling; same mixing as splitmix64.
uint64_t mix(uint64_t seed, uint64_t salt) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  bool log_spaced = false;

  std::vector<double> points() const {
    std::vector<double> p(count);
    if (count == 1) {
      p[0] = min;
      return p;
    }
    for (int i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / (count - 1);
      p[i] = log_spaced ? min * std::pow(max / min, t)
                        : min + (max - min) * t;
    }
    return p;
  }

  std::string text() const {
    return fmt(min) + ":" + fmt(max) + ":" + std::to_string(count) + ":" +
           (log_spaced ? "log" : "lin");
  }
};

GridSpec parse_grid(const std::string& text, bool positive_only) {
  GridSpec g;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4)
    throw CLI::ValidationError("grid", "expected min:max:count:lin|log, got '" +
                                           text + "'");
  try {
    g.min = std::stod(parts[0]);
    g.max = std::stod(parts[1]);
    g.count = std::stoi(parts[2]);
  } catch (...) {
    throw CLI::ValidationError("grid", "cannot parse numbers in '" + text + "'");
  }
  if (parts[3] == "log")
    g.log_spaced = true;
  else if (parts[3] != "lin")
    throw CLI::ValidationError("grid", "spacing must be lin or log");
  if (g.count < 1 || g.min > g.max)
    throw CLI::ValidationError("grid", "need count >= 1 and min <= max");
  if (g.log_spaced && g.min <= 0.0)
    throw CLI::ValidationError("grid", "log spacing needs min > 0");
  if (positive_only && g.min <= 0.0)
    throw CLI::ValidationError("grid", "rho grid must be positive");
  return g;
}

struct CarlFlags {
  double rho = 1.0;
  std::optional<double> delta;
  int n0 = 0;

  cgq_carl_params params(double rho_value) const {
    cgq_carl_params p;
    p.rho = rho_value;
    p.detuning = delta.value_or(0.0);
    p.has_detuning = delta.has_value() ? 1 : 0;
    p.n0 = n0;
    return p;
  }
  cgq_carl_params params() const { return params(rho); }
};

void add_carl_flags(CLI::App* cmd, CarlFlags& flags, bool with_rho = true) {
  if (with_rho)
    cmd->add_option("--rho", flags.rho, "collective recoil parameter")
        ->required();
  cmd->add_option("--delta", flags.delta,
                  "pump-cavity detuning Delta; the effective detuning is "
                  "Delta + 2 n0 / rho (default: 1/rho)");
  cmd->add_option("--n0", flags.n0, "equilibrium momentum level index")
      ->default_val(0);
}

// ---------------------------------------------------------------- evolve

struct EvolveArgs {
  CarlFlags carl;
  double tau = 0.0;
  double tol = 1e-6;
  std::string out_path;
};

int run_evolve(const EvolveArgs& args) {
  cgq_carl_params params = args.carl.params();
  cgq_carl_report report;
  Cm cm;
  check(cgq_carl_state_report(&params, args.tau, 0.0, &report, cm.out()),
        "evolve");
  check(cgq_cm_write(cm, args.out_path.c_str()), "write " + args.out_path);

  std::printf("rho=%s\n", fmt(params.rho).c_str());
  std::printf("tau=%s\n", fmt(args.tau).c_str());
  std::printf("n1=%s\nn2=%s\nn3=%s\n", fmt(report.populations[0]).c_str(),
              fmt(report.populations[1]).c_str(),
              fmt(report.populations[2]).c_str());
  std::printf("purity_residual=%s\n", fmt(report.purity_residual).c_str());
  std::printf("conservation_residual=%s\n",
              fmt(report.conservation_residual).c_str());
  std::printf("constraint_residual=%s\n",
              fmt(report.constraint_residual).c_str());
  std::printf("thermal_marginal_residual=%s\n",
              fmt(report.thermal_marginal_residual).c_str());
  std::printf("cm_file=%s\n", args.out_path.c_str());
  if (report.conditioning_warning)
    std::fprintf(stderr,
                 "carlgq: warning: CM entries reach %g; results may be "
                 "ill-conditioned\n",
                 report.max_abs_entry);

  const double worst = std::max({report.purity_residual,
                                 report.conservation_residual,
                                 std::abs(report.constraint_residual)});
  if (worst > args.tol) {
    std::fprintf(stderr,
                 "carlgq: invariant violation: residual %g exceeds "
                 "tolerance %g\n",
                 worst, args.tol);
    return kExitNumerical;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- analyze

struct Partition {
  std::vector<int> a, b;
  std::string label() const {
    std::string s;
    for (size_t i = 0; i < a.size(); ++i) s += std::to_string(a[i]);
    s += "_";
    for (size_t i = 0; i < b.size(); ++i) s += std::to_string(b[i]);
    return s;
  }
};

Partition parse_partition(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("partition",
                               "expected A:B, e.g. 1:23 or 1,2:3");
  auto parse_side = [](const std::string& side) {
    std::vector<int> modes;
    if (side.find(',') != std::string::npos) {
      std::stringstream ss(side);
      std::string item;
      while (std::getline(ss, item, ','))
        modes.push_back(std::stoi(item));
    } else {
      for (char c : side) {
        if (c < '1' || c > '9')
          throw CLI::ValidationError("partition",
                                     "mode indices must be digits 1-9; use "
                                     "commas for multi-digit indices");
        modes.push_back(c - '0');
      }
    }
    if (modes.empty())
      throw CLI::ValidationError("partition", "empty party");
    return modes;
  };
  return {parse_side(text.substr(0, colon)), parse_side(text.substr(colon + 1))};
}

struct AnalyzeArgs {
  std::string cm_path;
  std::vector<std::string> partition_texts;
  int restarts = 0;
  uint64_t seed = 0;
  double tol = 0.0;
};

int run_analyze(const AnalyzeArgs& args) {
  Cm cm;
  check(cgq_cm_read(args.cm_path.c_str(), cm.out()), "read " + args.cm_path);
  const int n = cgq_cm_modes(cm);

  cgq_validity validity;
  check(cgq_validate(cm, args.tol, &validity), "validate");
  std::printf("n_modes=%d\n", n);
  std::printf("physical=%s\n", validity.is_physical ? "true" : "false");
  std::printf("pure=%s\n", validity.is_pure ? "true" : "false");
  std::printf("determinant=%s\n", fmt(validity.determinant).c_str());
  if (!validity.is_physical) {
    std::fprintf(stderr,
                 "carlgq: validation error: not a bona fide covariance "
                 "matrix (min symplectic eigenvalue %g)\n",
                 validity.min_symplectic_eigenvalue);
    return kExitNumerical;
  }
  std::printf("min_symplectic_eigenvalue=%s\n",
              fmt(validity.min_symplectic_eigenvalue).c_str());

  double entropy = 0.0;
  check(cgq_renyi2_entropy(cm, &entropy), "entropy");
  std::printf("renyi2_entropy=%s\n", fmt(entropy).c_str());
  std::vector<double> populations(n);
  check(cgq_mode_populations(cm, populations.data()), "populations");
  for (int j = 0; j < n; ++j)
    std::printf("n%d=%s\n", j + 1, fmt(populations[j]).c_str());

  cgq_opt_config cfg = cgq_opt_defaults(args.seed);
  cfg.restarts = args.restarts;

  // Bipartitions of the full state: flags, or the canonical one-vs-rest set.
  std::vector<Partition> partitions;
  for (const auto& text : args.partition_texts)
    partitions.push_back(parse_partition(text));
  if (partitions.empty()) {
    if (n == 2) partitions.push_back({{1}, {2}});
    if (n == 3)
      partitions = {{{1}, {2, 3}}, {{2}, {1, 3}}, {{3}, {1, 2}}};
  }
  for (const auto& partition : partitions) {
    int ppt = 0;
    double min_nu = 0.0;
    check(cgq_is_ppt(cm, partition.a.data(),
                     static_cast<int>(partition.a.size()), partition.b.data(),
                     static_cast<int>(partition.b.size()), args.tol, &ppt,
                     &min_nu),
          "ppt " + partition.label());
    std::printf("ppt_%s=%s\n", partition.label().c_str(),
                ppt ? "true" : "false");
    std::printf("min_pt_nu_%s=%s\n", partition.label().c_str(),
                fmt(min_nu).c_str());
    if (validity.is_pure) {
      double e = 0.0;
      check(cgq_pure_entanglement(cm, partition.a.data(),
                                  static_cast<int>(partition.a.size()),
                                  partition.b.data(),
                                  static_cast<int>(partition.b.size()), &e),
            "pure entanglement " + partition.label());
      std::printf("E_%s=%s\n", partition.label().c_str(), fmt(e).c_str());
    }
  }

  auto pair_measures = [&](const Cm& pair, const std::string& suffix) {
    double e = 0.0, dl = 0.0, dr = 0.0;
    int conv_e = 0, conv_l = 0, conv_r = 0;
    check(cgq_gaussian_entanglement(pair, &cfg, &e, &conv_e), "E" + suffix);
    check(cgq_discord(pair, CGQ_DISCORD_LEFT, &cfg, &dl, nullptr, nullptr,
                      &conv_l),
          "Dleft" + suffix);
    check(cgq_discord(pair, CGQ_DISCORD_RIGHT, &cfg, &dr, nullptr, nullptr,
                      &conv_r),
          "Dright" + suffix);
    std::printf("E%s=%s\n", suffix.c_str(), fmt(e).c_str());
    std::printf("Dleft%s=%s\n", suffix.c_str(), fmt(dl).c_str());
    std::printf("Dright%s=%s\n", suffix.c_str(), fmt(dr).c_str());
    return conv_e && conv_l && conv_r;
  };

  bool all_converged = true;
  if (n == 2) {
    all_converged = pair_measures(cm, "12");
  } else if (n == 3) {
    const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
    for (const auto& pair_modes : pairs) {
      Cm pair;
      check(cgq_reduce(cm, pair_modes, 2, pair.out()), "reduce");
      all_converged =
          pair_measures(pair, std::to_string(pair_modes[0]) +
                                  std::to_string(pair_modes[1])) &&
          all_converged;
    }
    if (validity.is_pure) {
      double residual = 0.0;
      int probe = 0, conv = 0;
      check(cgq_residual_tripartite(cm, &cfg, &residual, &probe, nullptr,
                                    &conv),
            "E123");
      std::printf("E123=%s\n", fmt(residual).c_str());
      std::printf("E123_probe_mode=%d\n", probe);
      all_converged = all_converged && conv;
    }
  }
  if (!all_converged) {
    std::fprintf(stderr, "carlgq: optimizer failed to converge\n");
    return kExitNumerical;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

const std::vector<std::string> kAllMeasures = {
    "E12", "E13", "E23", "Dleft23", "Dright23",
    "E123", "Smax", "populations", "constraints"};

std::vector<std::string> columns_for(const std::vector<std::string>& measures) {
  std::vector<std::string> cols;
  for (const auto& m : measures) {
    if (m == "populations") {
      cols.insert(cols.end(), {"n1", "n2", "n3"});
    } else if (m == "constraints") {
      cols.insert(cols.end(), {"purity_residual", "conservation_residual",
                               "constraint_residual"});
    } else {
      cols.push_back(m);
    }
  }
  return cols;
}

struct SweepArgs {
  GridSpec rho_grid;
  GridSpec tau_grid;
  std::vector<std::string> measures;
  CarlFlags carl;
  int restarts = 0;
  uint64_t seed = 0;
  double tol = 0.0;
  int jobs = 0;
  std::string out_path;
};

struct CellResult {
  std::vector<double> values;
  std::vector<std::string> flags;
};

// Measure ids for seed salting; stable across reordering of the request.
int measure_id(const std::string& m) {
  const auto it = std::find(kAllMeasures.begin(), kAllMeasures.end(), m);
  return static_cast<int>(it - kAllMeasures.begin());
}

CellResult compute_cell(const SweepArgs& args, double rho, double tau,
                        uint64_t cell_seed) {
  CellResult result;
  cgq_carl_params params = args.carl.params(rho);
  cgq_carl_report report;
  Cm cm;
  const cgq_status evolved =
      cgq_carl_state_report(&params, tau, 0.0, &report, cm.out());
  if (evolved != CGQ_OK) {
    // Record the failure for the whole row; fill with NaNs.
    result.values.assign(columns_for(args.measures).size(),
                         std::nan(""));
    result.flags.push_back(std::string("evolve_") +
                           cgq_status_message(evolved));
    return result;
  }
  if (report.conditioning_warning) result.flags.push_back("ill_conditioned");

  Cm pair12, pair13, pair23;
  auto reduced = [&](int first, int second, Cm& slot) -> cgq_cm* {
    if (!slot.handle) {
      const int modes[2] = {first, second};
      check(cgq_reduce(cm, modes, 2, slot.out()), "reduce");
    }
    return slot.handle;
  };

  for (const auto& measure : args.measures) {
    cgq_opt_config cfg = cgq_opt_defaults(mix(cell_seed, measure_id(measure)));
    cfg.restarts = args.restarts;
    int converged = 1;
    if (measure == "E12" || measure == "E13" || measure == "E23") {
      cgq_cm* pair = measure == "E12"   ? reduced(1, 2, pair12)
                     : measure == "E13" ? reduced(1, 3, pair13)
                                        : reduced(2, 3, pair23);
      double value = 0.0;
      const cgq_status s =
          cgq_gaussian_entanglement(pair, &cfg, &value, &converged);
      if (s != CGQ_OK) die(s, measure);
      result.values.push_back(value);
    } else if (measure == "Dleft23" || measure == "Dright23") {
      double value = 0.0;
      const cgq_status s = cgq_discord(
          reduced(2, 3, pair23),
          measure == "Dleft23" ? CGQ_DISCORD_LEFT : CGQ_DISCORD_RIGHT, &cfg,
          &value, nullptr, nullptr, &converged);
      if (s != CGQ_OK) die(s, measure);
      result.values.push_back(value);
    } else if (measure == "E123") {
      double value = 0.0;
      int probe = 0;
      const cgq_status s = cgq_residual_tripartite(cm, &cfg, &value, &probe,
                                                   nullptr, &converged);
      if (s != CGQ_OK) die(s, measure);
      result.values.push_back(value);
    } else if (measure == "Smax") {
      cgq_svetlichny_result r;
      const cgq_status s = cgq_optimize_svetlichny(cm, &cfg, &r);
      if (s != CGQ_OK) die(s, measure);
      result.values.push_back(std::abs(r.s_value));
      converged = r.converged;
    } else if (measure == "populations") {
      result.values.insert(result.values.end(), report.populations,
                           report.populations + 3);
    } else if (measure == "constraints") {
      result.values.push_back(report.purity_residual);
      result.values.push_back(report.conservation_residual);
      result.values.push_back(report.constraint_residual);
    }
    if (!converged) result.flags.push_back(measure + "_noconv");
  }
  return result;
}

int run_sweep(const SweepArgs& args) {
  const std::vector<double> rhos = args.rho_grid.points();
  const std::vector<double> taus = args.tau_grid.points();
  const int n_cells = static_cast<int>(rhos.size() * taus.size());
  const std::vector<std::string> cols = columns_for(args.measures);

  std::vector<CellResult> cells(n_cells);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int idx = next.fetch_add(1); idx < n_cells;
         idx = next.fetch_add(1)) {
      const double rho = rhos[idx / taus.size()];
      const double tau = taus[idx % taus.size()];
      cells[idx] = compute_cell(args, rho, tau, mix(args.seed, idx));
    }
  };
  int jobs = args.jobs > 0
                 ? args.jobs
                 : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, n_cells));
  {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  std::ofstream csv(args.out_path);
  if (!csv) {
    std::fprintf(stderr, "carlgq: cannot open '%s' for writing\n",
                 args.out_path.c_str());
    return kExitNumerical;
  }
  csv << "rho,tau";
  for (const auto& c : cols) csv << ',' << c;
  csv << ",flags\n";
  int flagged = 0;
  for (int idx = 0; idx < n_cells; ++idx) {
    const double rho = rhos[idx / taus.size()];
    const double tau = taus[idx % taus.size()];
    csv << fmt(rho) << ',' << fmt(tau);
    for (double v : cells[idx].values) csv << ',' << fmt(v);
    if (cells[idx].flags.empty()) {
      csv << ",ok\n";
    } else {
      ++flagged;
      csv << ',';
      for (size_t i = 0; i < cells[idx].flags.size(); ++i)
        csv << (i ? ";" : "") << cells[idx].flags[i];
      csv << '\n';
    }
  }
  csv.flush();
  if (!csv) {
    std::fprintf(stderr, "carlgq: write to '%s' failed\n",
                 args.out_path.c_str());
    return kExitNumerical;
  }

  const std::string manifest_path = args.out_path + ".manifest";
  std::ofstream manifest(manifest_path);
  manifest << "tool = carlgq " << cgq_version() << "\n";
  manifest << "command = sweep\n";
  manifest << "grid_rho = " << args.rho_grid.text() << "\n";
  manifest << "grid_tau = " << args.tau_grid.text() << "\n";
  manifest << "measures = ";
  for (size_t i = 0; i < args.measures.size(); ++i)
    manifest << (i ? "," : "") << args.measures[i];
  manifest << "\n";
  manifest << "columns = rho,tau";
  for (const auto& c : cols) manifest << ',' << c;
  manifest << ",flags\n";
  manifest << "restarts = "
           << (args.restarts > 0 ? std::to_string(args.restarts)
                                 : std::string("default"))
           << "\n";
  manifest << "seed = " << args.seed << "\n";
  manifest << "tol = "
           << (args.tol > 0.0 ? fmt(args.tol) : std::string("default"))
           << "\n";
  manifest << "delta = "
           << (args.carl.delta ? fmt(*args.carl.delta)
                               : std::string("default(1/rho)"))
           << "\n";
  manifest << "n0 = " << args.carl.n0 << "\n";
  manifest << "jobs = " << jobs << "\n";
  manifest << "csv = " << args.out_path << "\n";
  manifest << "cells = " << n_cells << "\n";
  manifest << "flagged_cells = " << flagged << "\n";
  manifest.flush();
  if (!manifest) {
    std::fprintf(stderr, "carlgq: write to '%s' failed\n",
                 manifest_path.c_str());
    return kExitNumerical;
  }

  std::printf("cells=%d\nflagged_cells=%d\ncsv=%s\nmanifest=%s\n", n_cells,
              flagged, args.out_path.c_str(), manifest_path.c_str());
  return flagged == 0 ? kExitOk : kExitNumerical;
}

// ------------------------------------------------------------ svetlichny

struct SvetlichnyArgs {
  std::optional<std::string> cm_path;
  CarlFlags carl;
  std::optional<double> tau;
  int restarts = 0;
  uint64_t seed = 0;
};

int run_svetlichny(const SvetlichnyArgs& args) {
  Cm cm;
  if (args.cm_path) {
    check(cgq_cm_read(args.cm_path->c_str(), cm.out()),
          "read " + *args.cm_path);
  } else {
    if (!args.tau) {
      std::fprintf(stderr, "carlgq: svetlichny needs --cm or --rho/--tau\n");
      return kExitUsage;
    }
    cgq_carl_params params = args.carl.params();
    check(cgq_carl_evolve(&params, *args.tau, 0.0, cm.out()), "evolve");
  }

  cgq_opt_config cfg = cgq_opt_defaults(args.seed);
  cfg.restarts = args.restarts;
  cgq_svetlichny_result r;
  check(cgq_optimize_svetlichny(cm, &cfg, &r), "svetlichny optimization");
  std::printf("S=%s\n", fmt(r.s_value).c_str());
  std::printf("M=%s\n", fmt(r.m).c_str());
  std::printf("M_prime=%s\n", fmt(r.m_prime).c_str());
  std::printf("violated=%s\n", r.violated ? "true" : "false");
  static const char* names[6] = {"a", "a_prime", "b", "b_prime", "c",
                                 "c_prime"};
  for (int i = 0; i < 6; ++i)
    std::printf("%s=%s %s\n", names[i], fmt(r.settings[2 * i]).c_str(),
                fmt(r.settings[2 * i + 1]).c_str());
  if (!r.converged) {
    std::fprintf(stderr, "carlgq: optimizer failed to converge\n");
    return kExitNumerical;
  }
  return kExitOk;
}

// ------------------------------------------------------------ plotscript

struct PlotArgs {
  std::string csv_path;
  std::string figure;
  std::string out_path;
};

int run_plotscript(const PlotArgs& args) {
  std::ifstream csv(args.csv_path);
  if (!csv) {
    std::fprintf(stderr, "carlgq: cannot open '%s'\n", args.csv_path.c_str());
    return kExitNumerical;
  }
  std::string header;
  if (!std::getline(csv, header)) {
    std::fprintf(stderr, "carlgq: '%s' is empty\n", args.csv_path.c_str());
    return kExitUsage;
  }
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string item;
    while (std::getline(ss, item, ',')) cols.push_back(item);
  }
  const auto it = std::find(cols.begin(), cols.end(), args.figure);
  if (it == cols.end() || args.figure == "rho" || args.figure == "tau" ||
      args.figure == "flags") {
    std::string valid;
    for (const auto& c : cols)
      if (c != "rho" && c != "tau" && c != "flags")
        valid += (valid.empty() ? "" : ", ") + c;
    std::fprintf(stderr,
                 "carlgq: unknown figure id '%s'; valid ids in this CSV: %s\n",
                 args.figure.c_str(), valid.c_str());
    return kExitUsage;
  }
  const int column = static_cast<int>(it - cols.begin()) + 1;  // gnuplot 1-based

  // Grid shape and rho spacing, for dgrid3d and axis scaling.
  std::set<double> rho_values, tau_values;
  std::string line;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string rho_text, tau_text;
    if (std::getline(ss, rho_text, ',') && std::getline(ss, tau_text, ',')) {
      rho_values.insert(std::stod(rho_text));
      tau_values.insert(std::stod(tau_text));
    }
  }
  if (rho_values.empty() || tau_values.empty()) {
    std::fprintf(stderr, "carlgq: no data rows in '%s'\n",
                 args.csv_path.c_str());
    return kExitUsage;
  }
  bool log_rho = false;
  if (rho_values.size() >= 3) {
    std::vector<double> r(rho_values.begin(), rho_values.end());
    const double lin_gap = std::abs((r[1] - r[0]) - (r[2] - r[1]));
    const double log_gap = std::abs(r[1] / r[0] - r[2] / r[1]);
    log_rho = log_gap < lin_gap;
  }

  std::ofstream out(args.out_path);
  if (!out) {
    std::fprintf(stderr, "carlgq: cannot open '%s' for writing\n",
                 args.out_path.c_str());
    return kExitNumerical;
  }
  out << "# gnuplot script generated by carlgq plotscript\n";
  out << "# render with: gnuplot " << args.out_path << "\n";
  out << "set datafile separator ','\n";
  out << "set term pngcairo size 900,700\n";
  out << "set output '" << args.figure << ".png'\n";
  out << "set xlabel 'rho'\nset ylabel 'tau'\n";
  out << "set title '" << args.figure << "'\n";
  if (log_rho) out << "set logscale x\n";
  out << "set dgrid3d " << tau_values.size() << "," << rho_values.size()
      << "\n";
  out << "set hidden3d\n";
  out << "set style data lines\n";
  if (args.figure == "Smax") {
    out << "# classical Svetlichny bound\n";
    out << "splot '" << args.csv_path << "' skip 1 using 1:2:" << column
        << " title '" << args.figure << "', 4.0 title 'S = 4'\n";
  } else {
    out << "splot '" << args.csv_path << "' skip 1 using 1:2:" << column
        << " title '" << args.figure << "'\n";
  }
  out.flush();
  if (!out) {
    std::fprintf(stderr, "carlgq: write failed\n");
    return kExitNumerical;
  }
  std::printf("script=%s\n", args.out_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Renyi-2 Gaussian correlations toolbox for the three-mode "
      "collective-recoil instability"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("carlgq ") + cgq_version());

  EvolveArgs evolve_args;
  auto* evolve = app.add_subcommand(
      "evolve", "propagate the vacuum CM to dimensionless time tau");
  add_carl_flags(evolve, evolve_args.carl);
  evolve->add_option("--tau", evolve_args.tau, "dimensionless time")
      ->required();
  evolve->add_option("--tol", evolve_args.tol, "invariant tolerance")
      ->default_val(1e-6);
  evolve->add_option("--out", evolve_args.out_path, "output CM file")
      ->required();

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand(
      "analyze", "correlation measures of a covariance matrix file");
  analyze->add_option("--cm", analyze_args.cm_path, "CM file")->required();
  analyze->add_option("--partition", analyze_args.partition_texts,
                      "bipartition A:B of the full state (e.g. 1:23); "
                      "repeatable");
  analyze->add_option("--restarts", analyze_args.restarts,
                      "optimizer restarts (0 = defaults)");
  analyze->add_option("--seed", analyze_args.seed, "optimizer seed")
      ->default_val(0);
  analyze->add_option("--tol", analyze_args.tol,
                      "validity tolerance (0 = default 1e-9)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand(
      "sweep", "parameter sweep over (rho, tau), CSV + manifest output");
  std::string grid_rho_text = "0.05:20:40:log";
  std::string grid_tau_text = "0:3:40:lin";
  std::vector<std::string> measure_texts;
  sweep->add_option("--grid-rho", grid_rho_text,
                    "rho grid as min:max:count:lin|log")
      ->capture_default_str();
  sweep->add_option("--grid-tau", grid_tau_text,
                    "tau grid as min:max:count:lin|log")
      ->capture_default_str();
  sweep->add_option("--measures", measure_texts,
                    "comma-separated subset of E12,E13,E23,Dleft23,Dright23,"
                    "E123,Smax,populations,constraints (default: all)")
      ->delimiter(',');
  add_carl_flags(sweep, sweep_args.carl, false);
  sweep->add_option("--restarts", sweep_args.restarts,
                    "optimizer restarts (0 = defaults)");
  sweep->add_option("--seed", sweep_args.seed, "base RNG seed")
      ->default_val(0);
  sweep->add_option("--tol", sweep_args.tol, "tolerance override");
  sweep->add_option("--jobs", sweep_args.jobs,
                    "worker threads (0 = hardware concurrency)");
  sweep->add_option("--out", sweep_args.out_path, "output CSV path")
      ->required();

  SvetlichnyArgs svet_args;
  auto* svet = app.add_subcommand(
      "svetlichny", "maximize |S| over displaced-parity settings");
  svet->add_option("--cm", svet_args.cm_path, "three-mode CM file");
  svet->add_option("--rho", svet_args.carl.rho, "recoil parameter");
  svet->add_option("--tau", svet_args.tau, "dimensionless time");
  svet->add_option("--delta", svet_args.carl.delta, "pump-cavity detuning");
  svet->add_option("--n0", svet_args.carl.n0, "momentum level index")
      ->default_val(0);
  svet->add_option("--restarts", svet_args.restarts,
                   "optimizer restarts (0 = default 64)");
  svet->add_option("--seed", svet_args.seed, "RNG seed")->default_val(0);

  PlotArgs plot_args;
  auto* plot = app.add_subcommand(
      "plotscript", "emit a gnuplot script for a sweep CSV column");
  plot->add_option("--csv", plot_args.csv_path, "sweep CSV file")->required();
  plot->add_option("--figure", plot_args.figure,
                   "figure id (a CSV measure column)")
      ->required();
  plot->add_option("--out", plot_args.out_path, "script output path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*evolve) return run_evolve(evolve_args);
    if (*analyze) return run_analyze(analyze_args);
    if (*sweep) {
      sweep_args.rho_grid = parse_grid(grid_rho_text, true);
      sweep_args.tau_grid = parse_grid(grid_tau_text, false);
      sweep_args.measures =
          measure_texts.empty() ? kAllMeasures : measure_texts;
      for (const auto& m : sweep_args.measures)
        if (std::find(kAllMeasures.begin(), kAllMeasures.end(), m) ==
            kAllMeasures.end()) {
          std::string valid;
          for (const auto& k : kAllMeasures)
            valid += (valid.empty() ? "" : ",") + k;
          std::fprintf(stderr,
                       "carlgq: unknown measure '%s'; valid measures: %s\n",
                       m.c_str(), valid.c_str());
          return kExitUsage;
        }
      return run_sweep(sweep_args);
    }
    if (*svet) return run_svetlichny(svet_args);
    if (*plot) return run_plotscript(plot_args);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "carlgq: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "carlgq: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
