#include "carlgq.h"

#include "core/carl.hpp"
#include "core/correlations.hpp"
#include "core/io.hpp"
#include "core/nonlocality.hpp"
#include "core/symplectic.hpp"
#include "core/types.hpp"

#include <cstring>
#include <string>

namespace {

thread_local std::string g_last_error;

struct CmHandle {
  carlgq::CovarianceMatrix cm;
};

cgq_status map_code(carlgq::ErrorCode code) {
  using carlgq::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return CGQ_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension: return CGQ_ERR_DIMENSION;
    case ErrorCode::unphysical: return CGQ_ERR_UNPHYSICAL;
    case ErrorCode::numerical: return CGQ_ERR_NUMERICAL;
    case ErrorCode::parse: return CGQ_ERR_PARSE;
    case ErrorCode::io: return CGQ_ERR_IO;
    case ErrorCode::no_convergence: return CGQ_ERR_NO_CONVERGENCE;
  }
  return CGQ_ERR_INTERNAL;
}

cgq_status set_error(cgq_status status, const char* what) {
  g_last_error = what ? what : "";
  return status;
}

// Runs a callable, translating exceptions into status codes.
template <typename Fn>
cgq_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const carlgq::Error& e) {
    return set_error(map_code(e.code()), e.what());
  } catch (const std::exception& e) {
    return set_error(CGQ_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(CGQ_ERR_INTERNAL, "unknown failure");
  }
}

cgq_status require(bool ok, const char* what) {
  return ok ? CGQ_OK : set_error(CGQ_ERR_INVALID_ARGUMENT, what);
}

carlgq::OptimizerConfig to_config(const cgq_opt_config* cfg) {
  carlgq::OptimizerConfig out;
  if (cfg) {
    out.restarts = cfg->restarts;
    out.max_iterations = cfg->max_iterations;
    out.tolerance = cfg->tolerance;
    out.penalty_weight = cfg->penalty_weight;
    out.seed = cfg->seed;
  }
  return out;
}

carlgq::CarlParams to_params(const cgq_carl_params* p) {
  carlgq::CarlParams out;
  out.rho = p->rho;
  if (p->has_detuning) out.detuning = p->detuning;
  out.n0 = p->n0;
  return out;
}

carlgq::ModePartition to_partition(const int* a, int n_a, const int* b,
                                   int n_b) {
  return carlgq::ModePartition::bipartite(std::vector<int>(a, a + n_a),
                                          std::vector<int>(b, b + n_b));
}

cgq_status out_cm(carlgq::CovarianceMatrix value, cgq_cm** out) {
  *out = reinterpret_cast<cgq_cm*>(new CmHandle{std::move(value)});
  return CGQ_OK;
}

const carlgq::CovarianceMatrix& unwrap(const cgq_cm* cm) {
  return reinterpret_cast<const CmHandle*>(cm)->cm;
}

void fill_svetlichny(const carlgq::SvetlichnyResult& r,
                     cgq_svetlichny_result* out) {
  out->s_value = r.s_value;
  out->m = r.m;
  out->m_prime = r.m_prime;
  for (int i = 0; i < 12; ++i) out->settings[i] = r.optimal_settings.values[i];
  out->violated = r.violated ? 1 : 0;
  out->converged = r.converged ? 1 : 0;
}

}  // namespace

extern "C" {

const char* cgq_version(void) { return "1.0.0"; }

const char* cgq_status_message(cgq_status status) {
  switch (status) {
    case CGQ_OK: return "ok";
    case CGQ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CGQ_ERR_DIMENSION: return "dimension mismatch";
    case CGQ_ERR_UNPHYSICAL: return "not a physical state";
    case CGQ_ERR_NUMERICAL: return "numerical failure";
    case CGQ_ERR_PARSE: return "parse error";
    case CGQ_ERR_IO: return "i/o error";
    case CGQ_ERR_NO_CONVERGENCE: return "optimizer did not converge";
    case CGQ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cgq_last_error(void) { return g_last_error.c_str(); }

cgq_status cgq_cm_create(int n_modes, const double* entries, cgq_cm** out) {
  if (cgq_status s = require(entries && out, "null pointer argument"))
    return s;
  return guarded([&] {
    if (n_modes < 1)
      return set_error(CGQ_ERR_INVALID_ARGUMENT, "mode count must be >= 1");
    const int dim = 2 * n_modes;
    Eigen::MatrixXd m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = entries[r * dim + c];
    return out_cm(carlgq::CovarianceMatrix::from_matrix(m), out);
  });
}

cgq_status cgq_cm_vacuum(int n_modes, cgq_cm** out) {
  if (cgq_status s = require(out != nullptr, "null pointer argument"))
    return s;
  return guarded(
      [&] { return out_cm(carlgq::CovarianceMatrix::vacuum(n_modes), out); });
}

cgq_status cgq_cm_clone(const cgq_cm* cm, cgq_cm** out) {
  if (cgq_status s = require(cm && out, "null pointer argument")) return s;
  return guarded([&] { return out_cm(unwrap(cm), out); });
}

void cgq_cm_free(cgq_cm* cm) {
  delete reinterpret_cast<CmHandle*>(cm);
}

int cgq_cm_modes(const cgq_cm* cm) { return cm ? unwrap(cm).modes() : 0; }

cgq_status cgq_cm_entries(const cgq_cm* cm, double* out) {
  if (cgq_status s = require(cm && out, "null pointer argument")) return s;
  const Eigen::MatrixXd& m = unwrap(cm).matrix();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = m(r, c);
  return CGQ_OK;
}

cgq_status cgq_cm_read(const char* path, cgq_cm** out) {
  if (cgq_status s = require(path && out, "null pointer argument")) return s;
  return guarded([&] { return out_cm(carlgq::read_cm_file(path), out); });
}

cgq_status cgq_cm_write(const cgq_cm* cm, const char* path) {
  if (cgq_status s = require(cm && path, "null pointer argument")) return s;
  return guarded([&] {
    carlgq::write_cm_file(path, unwrap(cm));
    return CGQ_OK;
  });
}

cgq_status cgq_validate(const cgq_cm* cm, double tol, cgq_validity* out) {
  if (cgq_status s = require(cm && out, "null pointer argument")) return s;
  return guarded([&] {
    const auto report = carlgq::validate_cm(
        unwrap(cm), tol > 0.0 ? tol : carlgq::kDefaultTol);
    out->is_symmetric = report.is_symmetric ? 1 : 0;
    out->is_physical = report.is_physical ? 1 : 0;
    out->is_pure = report.is_pure ? 1 : 0;
    out->min_symplectic_eigenvalue = report.min_symplectic_eigenvalue;
    out->determinant = report.determinant;
    return CGQ_OK;
  });
}

cgq_status cgq_symplectic_eigenvalues(const cgq_cm* cm, double* out) {
  if (cgq_status s = require(cm && out, "null pointer argument")) return s;
  return guarded([&] {
    const auto nu = carlgq::symplectic_eigenvalues(unwrap(cm));
    std::memcpy(out, nu.data(), nu.size() * sizeof(double));
    return CGQ_OK;
  });
}

cgq_status cgq_reduce(const cgq_cm* cm, const int* modes, int n_selected,
                      cgq_cm** out) {
  if (cgq_status s = require(cm && modes && out && n_selected > 0,
                             "null pointer or empty selection"))
    return s;
  return guarded([&] {
    return out_cm(
        carlgq::reduce(unwrap(cm), std::span<const int>(modes, n_selected)),
        out);
  });
}

cgq_status cgq_partial_transpose(const cgq_cm* cm, const int* modes,
                                 int n_transposed, cgq_cm** out) {
  if (cgq_status s = require(cm && modes && out && n_transposed > 0,
                             "null pointer or empty selection"))
    return s;
  return guarded([&] {
    return out_cm(carlgq::partial_transpose(
                      unwrap(cm), std::span<const int>(modes, n_transposed)),
                  out);
  });
}

cgq_status cgq_wigner(const cgq_cm* cm, const double* xi, double* out) {
  if (cgq_status s = require(cm && xi && out, "null pointer argument"))
    return s;
  return guarded([&] {
    Eigen::VectorXd v =
        Eigen::Map<const Eigen::VectorXd>(xi, unwrap(cm).dim());
    *out = carlgq::wigner(unwrap(cm), v);
    return CGQ_OK;
  });
}

cgq_status cgq_renyi2_entropy(const cgq_cm* cm, double* out) {
  if (cgq_status s = require(cm && out, "null pointer argument")) return s;
  return guarded([&] {
    *out = carlgq::renyi2_entropy(unwrap(cm));
    return CGQ_OK;
  });
}

cgq_status cgq_mode_populations(const cgq_cm* cm, double* out) {
  if (cgq_status s = require(cm && out, "null pointer argument")) return s;
  return guarded([&] {
    const auto n = carlgq::mode_populations(unwrap(cm));
    std::memcpy(out, n.data(), n.size() * sizeof(double));
    return CGQ_OK;
  });
}

cgq_opt_config cgq_opt_defaults(uint64_t seed) {
  cgq_opt_config cfg;
  cfg.restarts = 0;
  cfg.max_iterations = 0;
  cfg.tolerance = 0.0;
  cfg.penalty_weight = 0.0;
  cfg.seed = seed;
  return cfg;
}

cgq_status cgq_is_ppt(const cgq_cm* cm, const int* party_a, int n_a,
                      const int* party_b, int n_b, double tol, int* ppt,
                      double* min_pt_eigenvalue) {
  if (cgq_status s = require(cm && party_a && party_b && n_a > 0 && n_b > 0,
                             "null pointer or empty party"))
    return s;
  return guarded([&] {
    const auto result =
        carlgq::is_ppt(unwrap(cm), to_partition(party_a, n_a, party_b, n_b),
                       tol > 0.0 ? tol : carlgq::kDefaultTol);
    if (ppt) *ppt = result.ppt ? 1 : 0;
    if (min_pt_eigenvalue)
      *min_pt_eigenvalue = result.min_pt_symplectic_eigenvalue;
    return CGQ_OK;
  });
}

cgq_status cgq_pure_entanglement(const cgq_cm* cm, const int* party_a, int n_a,
                                 const int* party_b, int n_b, double* out) {
  if (cgq_status s = require(
          cm && party_a && party_b && out && n_a > 0 && n_b > 0,
          "null pointer or empty party"))
    return s;
  return guarded([&] {
    *out = carlgq::pure_entanglement(
        unwrap(cm), to_partition(party_a, n_a, party_b, n_b));
    return CGQ_OK;
  });
}

cgq_status cgq_gaussian_entanglement(const cgq_cm* cm,
                                     const cgq_opt_config* cfg, double* value,
                                     int* converged) {
  if (cgq_status s = require(cm && value, "null pointer argument")) return s;
  return guarded([&] {
    const auto roof = carlgq::gaussian_entanglement(
        unwrap(cm), carlgq::ModePartition::bipartite({1}, {2}),
        to_config(cfg));
    *value = roof.value;
    if (converged) *converged = roof.converged ? 1 : 0;
    return CGQ_OK;
  });
}

cgq_status cgq_conditional_cm(const cgq_cm* cm, int measured_mode,
                              double lambda, double theta, cgq_cm** out) {
  if (cgq_status s = require(cm && out, "null pointer argument")) return s;
  return guarded([&] {
    return out_cm(
        carlgq::conditional_cm(unwrap(cm), measured_mode,
                               carlgq::MeasurementSeed{lambda, theta}),
        out);
  });
}

cgq_status cgq_discord(const cgq_cm* cm, int direction,
                       const cgq_opt_config* cfg, double* value,
                       double* seed_lambda, double* seed_theta,
                       int* converged) {
  if (cgq_status s = require(cm && value, "null pointer argument")) return s;
  if (direction != CGQ_DISCORD_LEFT && direction != CGQ_DISCORD_RIGHT)
    return set_error(
        CGQ_ERR_INVALID_ARGUMENT,
        "direction must be CGQ_DISCORD_LEFT or CGQ_DISCORD_RIGHT");
  return guarded([&] {
    const auto result = carlgq::discord(
        unwrap(cm),
        direction == CGQ_DISCORD_LEFT ? carlgq::DiscordDirection::left
                                      : carlgq::DiscordDirection::right,
        to_config(cfg));
    *value = result.value;
    if (seed_lambda) *seed_lambda = result.seed.lambda;
    if (seed_theta) *seed_theta = result.seed.theta;
    if (converged) *converged = result.converged ? 1 : 0;
    return CGQ_OK;
  });
}

cgq_status cgq_residual_tripartite(const cgq_cm* cm, const cgq_opt_config* cfg,
                                   double* value, int* probe_mode,
                                   double* decompositions, int* converged) {
  if (cgq_status s = require(cm && value, "null pointer argument")) return s;
  return guarded([&] {
    const auto result =
        carlgq::residual_tripartite(unwrap(cm), to_config(cfg));
    *value = result.value;
    if (probe_mode) *probe_mode = result.probe_mode;
    if (decompositions)
      for (int i = 0; i < 3; ++i) decompositions[i] = result.decompositions[i];
    if (converged) *converged = result.converged ? 1 : 0;
    return CGQ_OK;
  });
}

cgq_status cgq_parity_correlation(const cgq_cm* cm, const double* xi,
                                  double* out) {
  if (cgq_status s = require(cm && xi && out, "null pointer argument"))
    return s;
  return guarded([&] {
    *out = carlgq::parity_correlation(
        unwrap(cm), Eigen::Map<const Eigen::VectorXd>(xi, 6));
    return CGQ_OK;
  });
}

cgq_status cgq_mermin_klyshko(const cgq_cm* cm, const double* settings,
                              double* m, double* m_prime) {
  if (cgq_status s =
          require(cm && settings && m && m_prime, "null pointer argument"))
    return s;
  return guarded([&] {
    carlgq::SettingsVector s;
    std::memcpy(s.values.data(), settings, 12 * sizeof(double));
    const auto [mm, mp] = carlgq::mermin_klyshko(unwrap(cm), s);
    *m = mm;
    *m_prime = mp;
    return CGQ_OK;
  });
}

cgq_status cgq_svetlichny(const cgq_cm* cm, const double* settings,
                          cgq_svetlichny_result* out) {
  if (cgq_status s = require(cm && settings && out, "null pointer argument"))
    return s;
  return guarded([&] {
    carlgq::SettingsVector s;
    std::memcpy(s.values.data(), settings, 12 * sizeof(double));
    fill_svetlichny(carlgq::svetlichny(unwrap(cm), s), out);
    return CGQ_OK;
  });
}

cgq_status cgq_optimize_svetlichny(const cgq_cm* cm, const cgq_opt_config* cfg,
                                   cgq_svetlichny_result* out) {
  if (cgq_status s = require(cm && out, "null pointer argument")) return s;
  return guarded([&] {
    fill_svetlichny(carlgq::optimize_svetlichny(unwrap(cm), to_config(cfg)),
                    out);
    return CGQ_OK;
  });
}

cgq_status cgq_recoil_parameter(const cgq_recoil_inputs* inputs, double* rho) {
  if (cgq_status s = require(inputs && rho, "null pointer argument")) return s;
  return guarded([&] {
    carlgq::RecoilInputs in;
    in.rabi_frequency = inputs->rabi_frequency;
    in.pump_detuning = inputs->pump_detuning;
    in.light_frequency = inputs->light_frequency;
    in.dipole_moment = inputs->dipole_moment;
    in.atom_number = inputs->atom_number;
    in.mode_volume = inputs->mode_volume;
    in.recoil_frequency = inputs->recoil_frequency;
    in.epsilon0 = inputs->epsilon0;
    *rho = carlgq::recoil_parameter(in);
    return CGQ_OK;
  });
}

cgq_status cgq_carl_hamiltonian(const cgq_carl_params* params, double* g) {
  if (cgq_status s = require(params && g, "null pointer argument")) return s;
  return guarded([&] {
    const carlgq::Matrix6d m = carlgq::hamiltonian_matrix(to_params(params));
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) g[6 * r + c] = m(r, c);
    return CGQ_OK;
  });
}

cgq_status cgq_carl_drift(const double* g, double* a) {
  if (cgq_status s = require(g && a, "null pointer argument")) return s;
  return guarded([&] {
    carlgq::Matrix6d m;
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) m(r, c) = g[6 * r + c];
    const carlgq::Matrix6d drift = carlgq::drift_matrix(m);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) a[6 * r + c] = drift(r, c);
    return CGQ_OK;
  });
}

cgq_status cgq_carl_evolve(const cgq_carl_params* params, double tau,
                           double tau_cap, cgq_cm** out) {
  if (cgq_status s = require(params && out, "null pointer argument")) return s;
  return guarded([&] {
    return out_cm(
        carlgq::evolve_cm(to_params(params), tau,
                          tau_cap > 0.0 ? tau_cap : carlgq::kDefaultTauCap),
        out);
  });
}

cgq_status cgq_carl_state_report(const cgq_carl_params* params, double tau,
                                 double tau_cap, cgq_carl_report* report,
                                 cgq_cm** out_cm_handle) {
  if (cgq_status s = require(params && report, "null pointer argument"))
    return s;
  return guarded([&] {
    auto result = carlgq::carl_state_report(
        to_params(params), tau,
        tau_cap > 0.0 ? tau_cap : carlgq::kDefaultTauCap);
    for (int i = 0; i < 3; ++i) {
      report->populations[i] = result.populations[i];
      report->marginal_determinants[i] = result.marginal_determinants[i];
    }
    report->constraint_residual = result.constraint_residual;
    report->purity_residual = result.purity_residual;
    report->conservation_residual = result.conservation_residual;
    report->thermal_marginal_residual = result.thermal_marginal_residual;
    report->max_abs_entry = result.max_abs_entry;
    report->conditioning_warning = result.conditioning_warning ? 1 : 0;
    if (out_cm_handle) return out_cm(std::move(result.cm), out_cm_handle);
    return CGQ_OK;
  });
}

}  // extern "C"
