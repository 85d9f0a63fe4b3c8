#ifndef NHS_H
#define NHS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum NhsStatus {
  NHS_STATUS_OK = 0,
  NHS_STATUS_NULL_POINTER = 1,
  NHS_STATUS_INVALID_PARAMETER = 2,
  NHS_STATUS_DOMAIN = 3,
  NHS_STATUS_QUADRATURE = 4,
  NHS_STATUS_INSUFFICIENT_POINTS = 5,
  NHS_STATUS_INVALID_INPUT = 6,
  NHS_STATUS_BUFFER_TOO_SMALL = 7,
  NHS_STATUS_PANIC = 8,
} NhsStatus;

typedef enum NhsBranch {
  /**
   * `W_0`, defined on `[-1/e, inf)`.
   */
  NHS_BRANCH_PRINCIPAL = 0,
  /**
   * `W_-1`, defined on `[-1/e, 0)`.
   */
  NHS_BRANCH_MINUS_ONE = 1,
} NhsBranch;

typedef enum NhsScheme {
  NHS_SCHEME_WPT = 0,
  NHS_SCHEME_BAC = 1,
} NhsScheme;

/**
 * Monte Carlo engine with its own worker pool.
 */
typedef struct NhsEngine NhsEngine;

/**
 * Validated system parameters.
 */
typedef struct NhsParams NhsParams;

/**
 * Plain-data scenario; mirrors the Rust `Scenario`.
 */
typedef struct NhsScenario {
  size_t m_devices;
  double alpha;
  double beta;
  double eta;
  double r0;
  double rs;
  double phi;
  double d0;
  double dh;
  double dg;
} NhsScenario;

typedef struct NhsOutage {
  uint64_t trials;
  uint64_t failures;
  double p_hat;
  double ci_half_width;
  uint64_t seed;
} NhsOutage;

typedef struct NhsRate {
  uint64_t trials;
  double mean_rate;
  double std_error;
  uint64_t seed;
} NhsRate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *nhs_version(void);

/**
 * Copies the calling thread's last error message into `buf` (always
 * NUL-terminated when `len > 0`). Returns the buffer size needed for the
 * full message including the NUL, or 0 when there is no error.
 */
size_t nhs_last_error_message(char *buf, size_t len);

/**
 * Default scenario: one device, alpha 0.5, beta 0.1, eta 0.1, r0 0.1,
 * rs 1.2, phi 3.5, unit distances.
 */
struct NhsScenario nhs_scenario_default(void);

enum NhsStatus nhs_params_new(const struct NhsScenario *scenario, struct NhsParams **out);

/**
 * Releases a handle from [`nhs_params_new`]; null is ignored.
 */
void nhs_params_free(struct NhsParams *params);

/**
 * Whether `bar_eps0 * bar_epss < 1`.
 */
enum NhsStatus nhs_params_full_diversity(const struct NhsParams *params, bool *out);

/**
 * `threads == 0` picks the default worker count.
 */
enum NhsStatus nhs_engine_new(size_t threads, struct NhsEngine **out);

void nhs_engine_free(struct NhsEngine *engine);

enum NhsStatus nhs_bessel_k0(double x, double *out);

enum NhsStatus nhs_bessel_k1(double x, double *out);

enum NhsStatus nhs_lambert_w(enum NhsBranch branch, double x, double *out);

/**
 * CDF of `|g|^2 |h|^2` with exponential rates multiplying to `rate_product`.
 */
enum NhsStatus nhs_gamma_cdf(double x, double rate_product, double *out);

enum NhsStatus nhs_gamma_pdf(double x, double rate_product, double *out);

enum NhsStatus nhs_p_e0_exact(const struct NhsParams *params, double p, double *out);

enum NhsStatus nhs_p_e0_high_snr(const struct NhsParams *params, double *out);

/**
 * Requires at least 3 devices.
 */
enum NhsStatus nhs_p_e0_evt(const struct NhsParams *params, double *out);

/**
 * Lower bound on the admitted-device outage term with `m` admissible
 * devices, `1 <= m < M`.
 */
enum NhsStatus nhs_qm_lower_bound(const struct NhsParams *params, double p, size_t m, double *out);

/**
 * Writes `T_0 .. T_M` into `terms[0..=M]`. `len` must be at least `M + 1`;
 * otherwise `BufferTooSmall` is returned and `*written` holds the size
 * needed. `condition_holds` may be null.
 */
enum NhsStatus nhs_t_terms_wpt(const struct NhsParams *params,
                               double p,
                               double *terms,
                               size_t len,
                               size_t *written,
                               bool *condition_holds);

enum NhsStatus nhs_estimate_outage(const struct NhsEngine *engine,
                                   const struct NhsParams *params,
                                   enum NhsScheme scheme,
                                   double p,
                                   uint64_t trials,
                                   uint64_t seed,
                                   struct NhsOutage *out);

enum NhsStatus nhs_estimate_ergodic_rate(const struct NhsEngine *engine,
                                         const struct NhsParams *params,
                                         enum NhsScheme scheme,
                                         double p,
                                         uint64_t trials,
                                         uint64_t seed,
                                         struct NhsRate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NHS_H */
