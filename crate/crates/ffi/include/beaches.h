#ifndef BEACHES_H
#define BEACHES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BeachesStatus {
  BEACHES_STATUS_OK = 0,
  BEACHES_STATUS_NULL_POINTER = 1,
  BEACHES_STATUS_EMPTY_INPUT = 2,
  BEACHES_STATUS_NON_FINITE = 3,
  BEACHES_STATUS_INVALID_NOISE_VARIANCE = 4,
  BEACHES_STATUS_INVALID_THRESHOLD = 5,
  BEACHES_STATUS_THRESHOLD_AT_MAGNITUDE = 6,
  BEACHES_STATUS_INVALID_ARGUMENT = 7,
  BEACHES_STATUS_INTERNAL = 8,
  BEACHES_STATUS_PANIC = 9,
} BeachesStatus;

typedef enum BeachesProfile {
  BEACHES_PROFILE_LOS = 0,
  BEACHES_PROFILE_NLOS = 1,
} BeachesProfile;

/**
 * Reusable denoiser for one antenna count. Create with
 * [`beaches_denoiser_new`], release with [`beaches_denoiser_free`].
 */
typedef struct BeachesDenoiser BeachesDenoiser;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *beaches_version(void);

/**
 * Message describing the last failure on this thread, or NULL if the last
 * call succeeded. The pointer stays valid until the next call on this thread.
 */
const char *beaches_last_error_message(void);

/**
 * Create a denoiser for vectors of `len` antennas and noise variance `e0`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum BeachesStatus beaches_denoiser_new(size_t len, double e0, struct BeachesDenoiser **out);

/**
 * Release a handle. Passing NULL is a no-op.
 *
 * # Safety
 * `handle` must come from [`beaches_denoiser_new`] and not be used afterwards.
 */
void beaches_denoiser_free(struct BeachesDenoiser *handle);

/**
 * Denoise an antenna-domain vector in place. `tau_star` and `sure_min`
 * may be NULL.
 *
 * # Safety
 * `handle` must be live and `data` must hold `2 * len` doubles.
 */
enum BeachesStatus beaches_denoiser_denoise(const struct BeachesDenoiser *handle,
                                            double *data,
                                            size_t len,
                                            double *tau_star,
                                            double *sure_min);

/**
 * Soft-threshold a beamspace vector in place at the SURE-optimal level.
 *
 * # Safety
 * `data` must hold `2 * len` doubles. `tau_star` and `sure_min` may be NULL.
 */
enum BeachesStatus beaches_denoise_beamspace(double *data,
                                             size_t len,
                                             double e0,
                                             double *tau_star,
                                             double *sure_min);

/**
 * SURE-optimal threshold of a beamspace vector without modifying it.
 *
 * # Safety
 * `data` must hold `2 * len` doubles. `tau_star` and `sure_min` may be NULL.
 */
enum BeachesStatus beaches_find_tau_star(const double *data,
                                         size_t len,
                                         double e0,
                                         double *tau_star,
                                         double *sure_min);

/**
 * SURE of soft-thresholding a beamspace vector at `tau`.
 *
 * # Safety
 * `data` must hold `2 * len` doubles and `out` must be writable.
 */
enum BeachesStatus beaches_sure_soft(const double *data,
                                     size_t len,
                                     double tau,
                                     double e0,
                                     double *out);

/**
 * Complex soft-thresholding in place.
 *
 * # Safety
 * `data` must hold `2 * len` doubles.
 */
enum BeachesStatus beaches_soft_threshold(double *data, size_t len, double tau);

/**
 * Unitary DFT (antenna to beamspace) in place.
 *
 * # Safety
 * `data` must hold `2 * len` doubles.
 */
enum BeachesStatus beaches_dft(double *data, size_t len);

/**
 * Unitary inverse DFT (beamspace to antenna) in place.
 *
 * # Safety
 * `data` must hold `2 * len` doubles.
 */
enum BeachesStatus beaches_idft(double *data, size_t len);

/**
 * Draw a channel from a synthetic profile into `out` (antenna domain,
 * normalized to squared norm `len`).
 *
 * # Safety
 * `out` must hold `2 * len` doubles.
 */
enum BeachesStatus beaches_generate_channel(enum BeachesProfile profile,
                                            size_t len,
                                            uint64_t seed,
                                            double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BEACHES_H */
