/*
 * carlgq — Renyi-2 Gaussian correlations toolbox with collective-recoil
 * three-mode dynamics, exposed as a C shared-library interface.
 *
 * Conventions
 *   - Covariance matrices are real symmetric 2N x 2N arrays in the
 *     anticommutator convention sigma_jk = tr[rho {R_j, R_k}], quadrature
 *     ordering (q1, p1, ..., qN, pN); the vacuum CM is the identity.
 *   - Matrix buffers are row major, length (2N)^2.
 *   - Mode indices are 1-based everywhere, matching the CLI and file formats.
 *   - Every function returns CGQ_OK on success or an error code; the detail
 *     message of the most recent failure on the calling thread is available
 *     from cgq_last_error(). Output parameters are untouched on failure.
 */

#ifndef CARLGQ_H
#define CARLGQ_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cgq_status {
  CGQ_OK = 0,
  CGQ_ERR_INVALID_ARGUMENT = 1,
  CGQ_ERR_DIMENSION = 2,
  CGQ_ERR_UNPHYSICAL = 3,
  CGQ_ERR_NUMERICAL = 4,
  CGQ_ERR_PARSE = 5,
  CGQ_ERR_IO = 6,
  CGQ_ERR_NO_CONVERGENCE = 7,
  CGQ_ERR_INTERNAL = 8
} cgq_status;

const char* cgq_version(void);
const char* cgq_status_message(cgq_status status);
/* Thread-local detail of the last failure; valid until the next failing
 * call on the same thread. */
const char* cgq_last_error(void);

/* ------------------------------------------------------------------ *
 *  Covariance matrices                                               *
 * ------------------------------------------------------------------ */

typedef struct cgq_cm cgq_cm; /* opaque N-mode covariance matrix */

cgq_status cgq_cm_create(int n_modes, const double* entries, cgq_cm** out);
cgq_status cgq_cm_vacuum(int n_modes, cgq_cm** out);
cgq_status cgq_cm_clone(const cgq_cm* cm, cgq_cm** out);
void cgq_cm_free(cgq_cm* cm);

int cgq_cm_modes(const cgq_cm* cm); /* 0 for NULL */
/* Copies the entries into a caller buffer of length (2N)^2, row major. */
cgq_status cgq_cm_entries(const cgq_cm* cm, double* out);

/* CM text format: first line N, then 2N rows of 2N values; '#' comments. */
cgq_status cgq_cm_read(const char* path, cgq_cm** out);
cgq_status cgq_cm_write(const cgq_cm* cm, const char* path);

typedef struct cgq_validity {
  int is_symmetric;
  int is_physical;
  int is_pure;
  /* Smallest Williamson eigenvalue; NaN when not positive definite. */
  double min_symplectic_eigenvalue;
  double determinant;
} cgq_validity;

/* tol <= 0 selects the default 1e-9. */
cgq_status cgq_validate(const cgq_cm* cm, double tol, cgq_validity* out);
/* out must hold N values; ascending Williamson spectrum. */
cgq_status cgq_symplectic_eigenvalues(const cgq_cm* cm, double* out);
cgq_status cgq_reduce(const cgq_cm* cm, const int* modes, int n_selected,
                      cgq_cm** out);
cgq_status cgq_partial_transpose(const cgq_cm* cm, const int* modes,
                                 int n_transposed, cgq_cm** out);
/* xi has length 2N. */
cgq_status cgq_wigner(const cgq_cm* cm, const double* xi, double* out);
cgq_status cgq_renyi2_entropy(const cgq_cm* cm, double* out);
/* out must hold N values: mean occupation per mode. */
cgq_status cgq_mode_populations(const cgq_cm* cm, double* out);

/* ------------------------------------------------------------------ *
 *  Optimizer configuration (shared by the searches below)            *
 * ------------------------------------------------------------------ */

typedef struct cgq_opt_config {
  int restarts;          /* <= 0: per-operation default */
  int max_iterations;    /* <= 0: default */
  double tolerance;      /* <= 0: default */
  double penalty_weight; /* <= 0: default */
  uint64_t seed;         /* same seed => bit-identical results */
} cgq_opt_config;

/* All-defaults configuration with the given seed. */
cgq_opt_config cgq_opt_defaults(uint64_t seed);

/* ------------------------------------------------------------------ *
 *  Correlation measures                                              *
 * ------------------------------------------------------------------ */

/* Partial-transposition criterion across party_a | party_b (1-based mode
 * lists covering all modes). For 1-vs-M Gaussian partitions PPT is
 * equivalent to separability. tol <= 0 selects 1e-9. */
cgq_status cgq_is_ppt(const cgq_cm* cm, const int* party_a, int n_a,
                      const int* party_b, int n_b, double tol, int* ppt,
                      double* min_pt_eigenvalue);

/* Pure-state Renyi-2 entanglement (1/2) ln det sigma_A; the state must be
 * pure. Mixed states are rejected: use cgq_gaussian_entanglement. */
cgq_status cgq_pure_entanglement(const cgq_cm* cm, const int* party_a, int n_a,
                                 const int* party_b, int n_b, double* out);

/* Gaussian convex roof of the Renyi-2 entanglement for a two-mode state
 * across the 1|2 partition, by multistart constrained search. */
cgq_status cgq_gaussian_entanglement(const cgq_cm* cm,
                                     const cgq_opt_config* cfg, double* value,
                                     int* converged);

/* Conditional CM of the unmeasured modes after a pure Gaussian measurement
 * with seed CM R(theta) diag(lambda, 1/lambda) R(theta)^T on one mode. */
cgq_status cgq_conditional_cm(const cgq_cm* cm, int measured_mode,
                              double lambda, double theta, cgq_cm** out);

#define CGQ_DISCORD_LEFT 0  /* probe mode 2 of the pair: D^{<-}_{A|B} */
#define CGQ_DISCORD_RIGHT 1 /* probe mode 1 of the pair: D^{->}_{A|B} */

/* Gaussian Renyi-2 discord of a two-mode state, minimized over pure
 * Gaussian measurements on the probed mode. */
cgq_status cgq_discord(const cgq_cm* cm, int direction,
                       const cgq_opt_config* cfg, double* value,
                       double* seed_lambda, double* seed_theta,
                       int* converged);

/* Residual genuine tripartite entanglement of a pure three-mode state.
 * decompositions (length 3, optional) receives the three probe-mode
 * decomposition values; probe_mode the 1-based argmin. */
cgq_status cgq_residual_tripartite(const cgq_cm* cm, const cgq_opt_config* cfg,
                                   double* value, int* probe_mode,
                                   double* decompositions, int* converged);

/* ------------------------------------------------------------------ *
 *  Svetlichny nonlocality (three-mode states)                        *
 * ------------------------------------------------------------------ */

/* Settings layout: (a_q, a_p, a'_q, a'_p, b_q, b_p, b'_q, b'_p,
 *                   c_q, c_p, c'_q, c'_p). */
typedef struct cgq_svetlichny_result {
  double s_value;
  double m;
  double m_prime;
  double settings[12];
  int violated; /* |S| > 4 + 1e-9 */
  int converged;
} cgq_svetlichny_result;

/* Displaced-parity correlation (pi^3/8) W(xi), xi of length 6. */
cgq_status cgq_parity_correlation(const cgq_cm* cm, const double* xi,
                                  double* out);
cgq_status cgq_mermin_klyshko(const cgq_cm* cm, const double* settings,
                              double* m, double* m_prime);
cgq_status cgq_svetlichny(const cgq_cm* cm, const double* settings,
                          cgq_svetlichny_result* out);
/* Multistart maximization of |S| over the 12 settings. */
cgq_status cgq_optimize_svetlichny(const cgq_cm* cm, const cgq_opt_config* cfg,
                                   cgq_svetlichny_result* out);

/* ------------------------------------------------------------------ *
 *  Collective-recoil dynamics                                        *
 * ------------------------------------------------------------------ */

typedef struct cgq_carl_params {
  double rho; /* collective recoil parameter, > 0 */
  /* Raw pump-cavity detuning Delta; effective delta = Delta + 2 n0 / rho.
   * With has_detuning = 0 the resonant choice delta = 1/rho is used. */
  double detuning;
  int has_detuning;
  int n0;
} cgq_carl_params;

typedef struct cgq_recoil_inputs {
  double rabi_frequency;   /* Omega_0 [rad/s] */
  double pump_detuning;    /* omega - omega_0 [rad/s], signed, nonzero */
  double light_frequency;  /* omega [rad/s] */
  double dipole_moment;    /* mu [C m] */
  double atom_number;      /* N */
  double mode_volume;      /* V [m^3] */
  double recoil_frequency; /* omega_r [rad/s] */
  double epsilon0;         /* vacuum permittivity [F/m] */
} cgq_recoil_inputs;

cgq_status cgq_recoil_parameter(const cgq_recoil_inputs* inputs, double* rho);

/* Quadratic Hamiltonian form G (row-major 6x6) and drift A = Omega G. */
cgq_status cgq_carl_hamiltonian(const cgq_carl_params* params, double* g);
cgq_status cgq_carl_drift(const double* g, double* a);

/* sigma(tau) = E E^T with E = exp(A tau), from the vacuum. tau_cap <= 0
 * selects the default cap 8. */
cgq_status cgq_carl_evolve(const cgq_carl_params* params, double tau,
                           double tau_cap, cgq_cm** out);

typedef struct cgq_carl_report {
  double populations[3];
  double marginal_determinants[3];
  double constraint_residual;   /* sqrt det s1 - sqrt det s2 - sqrt det s3 + 1 */
  double purity_residual;       /* |det sigma - 1| */
  double conservation_residual; /* |n1 - n2 - n3| */
  double thermal_marginal_residual;
  double max_abs_entry;
  int conditioning_warning;
} cgq_carl_report;

/* Evolve and report the dynamical invariants; out_cm may be NULL when only
 * the report is needed. */
cgq_status cgq_carl_state_report(const cgq_carl_params* params, double tau,
                                 double tau_cap, cgq_carl_report* report,
                                 cgq_cm** out_cm);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CARLGQ_H */
