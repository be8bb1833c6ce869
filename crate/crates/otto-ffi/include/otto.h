/* C ABI for the coupled quantum Otto cycle library (otto-ffi).
 *
 * Build the crate with `cargo build -p otto-ffi --release` and link against
 * target/release/libotto_ffi.{a,so}. All fallible calls return an
 * OttoStatus and write results through out-pointers only on OTTO_OK.
 * Handles are immutable after construction; free them exactly once with the
 * matching *_free function (NULL is ignored).
 */

#ifndef OTTO_H
#define OTTO_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum OttoStatus {
  OTTO_OK = 0,
  OTTO_NULL_POINTER = 1,
  OTTO_INVALID_PARAMS = 2,
  OTTO_DEGENERATE = 3,
  OTTO_NUMERICAL = 4,
} OttoStatus;

/* Opaque handles. */
typedef struct OttoParams OttoParams;
typedef struct OttoBath OttoBath;

/* Energy flows of one limit cycle, sign convention "into the system".
 * regime: 0 = none, 1 = engine, 2 = refrigerator.
 * figure_of_merit: efficiency (engine) or COP (refrigerator), NaN otherwise.
 * power: engine output power -W/(t_h + t_c) for NELC runs, NaN otherwise. */
typedef struct OttoFlows {
  double q_h;
  double q_c;
  double w;
  int32_t regime;
  double figure_of_merit;
  double power;
} OttoFlows;

/* Cycle parameters: omega_h >= omega_c > 0, g_* >= 0, 0 < beta_h < beta_c,
 * stroke durations t_* >= 0 (must be > 0 for NELC). */
OttoStatus otto_params_new(double omega_h, double omega_c, double g_h,
                           double g_c, double beta_h, double beta_c,
                           double t_h, double t_c, OttoParams **out);
void otto_params_free(OttoParams *params);

/* Ohmic bath with exponential cutoff; both arguments must be positive. */
OttoStatus otto_bath_new(double gamma_scale, double omega_cutoff,
                         OttoBath **out);
OttoStatus otto_bath_default(OttoBath **out);
void otto_bath_free(OttoBath *bath);

/* Limit-cycle energy flows for the three solvers. */
OttoStatus otto_gslc_flows(const OttoParams *params, OttoFlows *out);
OttoStatus otto_elc_flows(const OttoParams *params, const OttoBath *bath,
                          OttoFlows *out);
OttoStatus otto_nelc_flows(const OttoParams *params, const OttoBath *bath,
                           OttoFlows *out);

/* Static strings; do not free. */
const char *otto_version(void);
const char *otto_status_message(OttoStatus status);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OTTO_H */
