/* Minimal C99 client: proves the header compiles as C and the shared
 * library links and runs from plain C. */

#include "carlgq.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#define REQUIRE_OK(call)                                                  \
  do {                                                                    \
    cgq_status s_ = (call);                                               \
    if (s_ != CGQ_OK) {                                                   \
      fprintf(stderr, "%s failed: %s (%s)\n", #call,                      \
              cgq_status_message(s_), cgq_last_error());                  \
      return 1;                                                           \
    }                                                                     \
  } while (0)

int main(void) {
  cgq_carl_params params;
  params.rho = 1.0;
  params.detuning = 0.0;
  params.has_detuning = 0;
  params.n0 = 0;

  cgq_cm* cm = NULL;
  REQUIRE_OK(cgq_carl_evolve(&params, 2.0, 0.0, &cm));

  double entropy = -1.0;
  REQUIRE_OK(cgq_renyi2_entropy(cm, &entropy));
  if (fabs(entropy) > 1e-6) {
    fprintf(stderr, "pure state entropy should vanish, got %g\n", entropy);
    return 1;
  }

  double populations[3];
  REQUIRE_OK(cgq_mode_populations(cm, populations));
  if (populations[0] <= 0.0) {
    fprintf(stderr, "mode 1 should be populated at tau > 0\n");
    return 1;
  }

  double residual = 0.0;
  int probe = 0;
  cgq_opt_config cfg = cgq_opt_defaults(7);
  REQUIRE_OK(cgq_residual_tripartite(cm, &cfg, &residual, &probe, NULL, NULL));
  if (probe != 1 || residual < 0.0) {
    fprintf(stderr, "unexpected residual %g (probe %d)\n", residual, probe);
    return 1;
  }

  cgq_cm_free(cm);
  printf("carlgq %s: C smoke test passed\n", cgq_version());
  return 0;
}
