/* C interface for the eikonal spectral-dynamics library. */

#ifndef EIKONAL_H
#define EIKONAL_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every API function.
 */
typedef enum eik_status {
  /**
   * Success.
   */
  EIK_OK = 0,
  /**
   * Invalid configuration or argument value.
   */
  EIK_ERR_CONFIG = 1,
  /**
   * Numerical failure (no convergence, degenerate input, ...).
   */
  EIK_ERR_NUMERIC = 2,
  /**
   * A required pointer argument was null.
   */
  EIK_ERR_NULL_POINTER = 3,
  /**
   * A string argument was not valid UTF-8 / JSON.
   */
  EIK_ERR_PARSE = 4,
  /**
   * An output buffer was too small.
   */
  EIK_ERR_BUFFER_TOO_SMALL = 5,
  /**
   * A validation case ran but one of its checks failed.
   */
  EIK_ERR_VALIDATION_FAILED = 6,
  /**
   * Internal panic; state may be inconsistent.
   */
  EIK_ERR_INTERNAL = 7,
} eik_status;

/**
 * Opaque model handle: an ensemble spec plus an initial spectral measure.
 */
typedef struct eik_model eik_model;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message for the calling thread into `buf`
 * (NUL-terminated, truncated to `cap` bytes). Returns the full message
 * length in bytes, excluding the terminator. `buf` may be null to query
 * the length.
 */
size_t eik_last_error_message(char *buf, size_t cap);

/**
 * Creates a model from an ensemble spec and an initial measure, both JSON.
 * `ensemble_json` example: `{"variant":"elliptic","params":{"tau":0.5}}`.
 * `initial_json` example: `{"atoms":[[[0.0,0.0],1.0]]}`; pass null for a
 * unit mass at the origin. The handle must be released with
 * `eik_model_free`.
 */
enum eik_status eik_model_new(const char *ensemble_json,
                              const char *initial_json,
                              struct eik_model **out_model);

/**
 * Releases a model handle. Passing null is a no-op.
 */
void eik_model_free(struct eik_model *model);

/**
 * Spectral density at time `t` on `n` real points `x`, evaluated at
 * imaginary offset `epsilon`. Writes `n` values to `out_rho`.
 */
enum eik_status eik_density(const struct eik_model *model,
                            double t,
                            const double *x,
                            size_t n,
                            double epsilon,
                            double *out_rho);

/**
 * Two-dimensional spectral density at time `t` on the uniform grid with
 * origin `(x0, y0)`, spacing `h`, and `nx * ny` points. The derivative
 * stencil drops the boundary ring: exactly `(nx-2) * (ny-2)` values are
 * written to `out_rho`, row-major from `(x0+h, y0+h)`.
 */
enum eik_status eik_density_2d(const struct eik_model *model,
                               double t,
                               double x0,
                               double y0,
                               double h,
                               size_t nx,
                               size_t ny,
                               double *out_rho);

/**
 * Diagonal eigenvector-overlap correlator at time `t` on the uniform grid
 * with origin `(x0, y0)`, spacing `h`, and `nx * ny` points. Writes
 * `nx * ny` values to `out_overlap` (zero outside the spectral support).
 */
enum eik_status eik_overlap(const struct eik_model *model,
                            double t,
                            double x0,
                            double y0,
                            double h,
                            size_t nx,
                            size_t ny,
                            double *out_overlap);

/**
 * Eigenphase density and angular resolvent of the unitary diffusion at
 * time `t`. The initial condition is `n_atoms` phase/weight pairs. Writes
 * `n` densities to `out_rho` and, when non-null, `n` resolvent components
 * to `out_j_re` / `out_j_im`.
 */
enum eik_status eik_unitary_density(const double *phases,
                                    const double *weights,
                                    size_t n_atoms,
                                    double t,
                                    const double *theta,
                                    size_t n,
                                    double epsilon,
                                    double *out_rho,
                                    double *out_j_re,
                                    double *out_j_im);

/**
 * Density and velocity fields of the matrix Brownian bridge described by
 * `problem_json` (`{"atoms_a":[[x,w],...],"atoms_b":[...],"beta":2.0}`),
 * on `nx` spatial points `x` and `nt` interior times `t` in (0,1). Writes
 * `nt * nx` values to each of `out_rho` and `out_mu`, time-major.
 */
enum eik_status eik_bridge_fields(const char *problem_json,
                                  const double *x,
                                  size_t nx,
                                  const double *t,
                                  size_t nt,
                                  double epsilon,
                                  double *out_rho,
                                  double *out_mu);

/**
 * Pooled finite-N spectral statistics of `seeds` independent replicas
 * drawn with the given master seed: eigenvalues for Hermitian ensembles,
 * eigenphases for unitary ones, moduli for general ones. Writes up to
 * `cap` values into `out_values` and stores the total count in `out_len`;
 * returns `EikErrBufferTooSmall` when `cap` is insufficient (with
 * `out_len` set to the required size).
 */
enum eik_status eik_mc_spectrum(const char *ensemble_json,
                                size_t n,
                                size_t seeds,
                                double variance,
                                uint64_t seed,
                                double *out_values,
                                size_t cap,
                                size_t *out_len);

/**
 * Runs a named validation case (see the library's validation suite for
 * case names). `n`/`seeds` of 0 select the case defaults. Returns `EikOk`
 * when every check passes and `EikErrValidationFailed` otherwise; the JSON
 * report is available through `eik_last_error_message` on failure.
 */
enum eik_status eik_validate_case(const char *case_name, size_t n, size_t seeds, uint64_t seed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EIKONAL_H */
