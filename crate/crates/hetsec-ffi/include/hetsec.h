#ifndef HETSEC_H
#define HETSEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Cell selector.
 */
typedef enum HetsecCell {
  HetsecCellMacro = 0,
  HetsecCellSmall = 1,
} HetsecCell;

/**
 * Spectrum-sharing scheme selector.
 */
typedef enum HetsecScheme {
  HetsecSchemeOss = 0,
  HetsecSchemeIlNoss = 1,
  HetsecSchemeIcNoss = 2,
} HetsecScheme;

/**
 * Status codes returned by every fallible function.
 */
typedef enum HetsecStatus {
  HetsecOk = 0,
  /**
   * An argument fell outside its mathematical or structural domain.
   */
  HetsecErrDomain = 1,
  /**
   * A numeric routine failed (non-convergence, inconsistency).
   */
  HetsecErrNumeric = 2,
  /**
   * A required pointer argument was null or text was not valid UTF-8.
   */
  HetsecErrArgument = 3,
  /**
   * The sweep configuration failed to parse or validate.
   */
  HetsecErrConfig = 4,
} HetsecStatus;

/**
 * Opaque sweep handle: parsed configuration plus results once run.
 */
typedef struct HetsecSweep HetsecSweep;

/**
 * Distance / path-loss exponent / small-scale variance of one link.
 */
typedef struct HetsecLinkPath {
  double distance_m;
  double path_loss_exp;
  double fading_var;
} HetsecLinkPath;

/**
 * Geometry of all six links.
 */
typedef struct HetsecGeometry {
  struct HetsecLinkPath mbs_mu;
  struct HetsecLinkPath mbs_su;
  struct HetsecLinkPath sbs_su;
  struct HetsecLinkPath sbs_mu;
  struct HetsecLinkPath mbs_eve;
  struct HetsecLinkPath sbs_eve;
} HetsecGeometry;

/**
 * The six average channel power gains.
 */
typedef struct HetsecGains {
  double mbs_mu;
  double mbs_su;
  double sbs_su;
  double sbs_mu;
  double mbs_eve;
  double sbs_eve;
} HetsecGains;

/**
 * System operating point. The macro SNR is given in dB; conversion to
 * linear units happens at this boundary.
 */
typedef struct HetsecConfig {
  double gamma_macro_db;
  double beta;
  double alpha_split;
  double rate_macro;
  double rate_small;
} HetsecConfig;

/**
 * One Monte-Carlo estimate.
 */
typedef struct HetsecEstimate {
  double p_hat;
  double stderr;
  uint64_t samples;
} HetsecEstimate;

/**
 * One sweep result row. Missing cells (an analytic row's stderr, values a
 * failed point never produced) are NaN; `has_error` flags rows whose error
 * column is set.
 */
typedef struct HetsecRow {
  double axis_value;
  enum HetsecScheme scheme;
  /**
   * 0 analytic, 1 monte carlo, 2 lower bound, 3 upper bound.
   */
  int32_t method;
  double p_macro;
  double p_small;
  double p_overall;
  double stderr;
  bool has_error;
} HetsecRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Average channel gains from link geometry (d^{-alpha} * delta^2 per link).
 *
 * # Safety
 * `geometry` and `out` must be valid, aligned pointers.
 */
enum HetsecStatus hetsec_gains_from_geometry(const struct HetsecGeometry *geometry,
                                             struct HetsecGains *out);

/**
 * Closed-form secrecy outage probability of one (scheme, cell) pair.
 *
 * # Safety
 * `cfg`, `gains` and `out` must be valid, aligned pointers.
 */
enum HetsecStatus hetsec_sop_analytic(enum HetsecScheme scheme,
                                      enum HetsecCell cell,
                                      const struct HetsecConfig *cfg,
                                      const struct HetsecGains *gains,
                                      double *out);

/**
 * Monte-Carlo secrecy outage estimate of one (scheme, cell) pair, using the
 * deterministic stream (seed, stream_index).
 *
 * # Safety
 * `cfg`, `gains` and `out` must be valid, aligned pointers.
 */
enum HetsecStatus hetsec_sop_monte_carlo(enum HetsecScheme scheme,
                                         enum HetsecCell cell,
                                         const struct HetsecConfig *cfg,
                                         const struct HetsecGains *gains,
                                         uint64_t samples,
                                         uint64_t seed,
                                         uint64_t stream_index,
                                         struct HetsecEstimate *out);

/**
 * High-SNR lower/upper bounds of the interference-canceled macro-cell
 * secrecy outage probability.
 *
 * # Safety
 * `cfg`, `gains`, `lower` and `upper` must be valid, aligned pointers.
 */
enum HetsecStatus hetsec_ic_macro_bounds(const struct HetsecConfig *cfg,
                                         const struct HetsecGains *gains,
                                         double *lower,
                                         double *upper);

/**
 * Noise-free outage floor of the interference-limited macro cell.
 *
 * # Safety
 * `gains` and `out` must be valid, aligned pointers.
 */
enum HetsecStatus hetsec_il_macro_floor(const struct HetsecGains *gains,
                                        double rate,
                                        double beta,
                                        double *out);

/**
 * Parse a sweep configuration document (same grammar as the CLI's
 * `sweep --config` files). Returns null when parsing fails.
 *
 * # Safety
 * `config_text` must be a valid NUL-terminated string.
 */
struct HetsecSweep *hetsec_sweep_new(const char *config_text);

/**
 * Build a sweep handle from a named preset (fig2 .. fig6).
 *
 * # Safety
 * `name` must be a valid NUL-terminated string.
 */
struct HetsecSweep *hetsec_sweep_preset(const char *name);

/**
 * Override the Monte-Carlo sample count of a sweep handle.
 *
 * # Safety
 * `sweep` must be a handle from `hetsec_sweep_new`/`hetsec_sweep_preset`.
 */
enum HetsecStatus hetsec_sweep_set_samples(struct HetsecSweep *sweep, uint64_t samples);

/**
 * Override the base RNG seed of a sweep handle.
 *
 * # Safety
 * `sweep` must be a handle from `hetsec_sweep_new`/`hetsec_sweep_preset`.
 */
enum HetsecStatus hetsec_sweep_set_seed(struct HetsecSweep *sweep, uint64_t seed);

/**
 * Execute the sweep. Deterministic for a fixed (spec, seed).
 *
 * # Safety
 * `sweep` must be a handle from `hetsec_sweep_new`/`hetsec_sweep_preset`.
 */
enum HetsecStatus hetsec_sweep_run(struct HetsecSweep *sweep);

/**
 * Number of result rows produced by `hetsec_sweep_run` (0 before running).
 *
 * # Safety
 * `sweep` must be a handle from `hetsec_sweep_new`/`hetsec_sweep_preset`.
 */
uintptr_t hetsec_sweep_row_count(const struct HetsecSweep *sweep);

/**
 * Fetch one result row by index.
 *
 * # Safety
 * `sweep` must be a live handle and `out` a valid pointer.
 */
enum HetsecStatus hetsec_sweep_row(const struct HetsecSweep *sweep,
                                   uintptr_t index,
                                   struct HetsecRow *out);

/**
 * Last configuration/run error message of the handle, or null.
 * The pointer stays valid until the next call on the same handle.
 *
 * # Safety
 * `sweep` must be a live handle.
 */
const char *hetsec_sweep_error(const struct HetsecSweep *sweep);

/**
 * Release a sweep handle.
 *
 * # Safety
 * `sweep` must be a handle from this library, released at most once.
 */
void hetsec_sweep_free(struct HetsecSweep *sweep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HETSEC_H */
