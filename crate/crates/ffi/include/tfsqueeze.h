#ifndef TFSQUEEZE_H
#define TFSQUEEZE_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TfsIterMode {
  TFS_ITER_MODE_LINEAR = 0,
  TFS_ITER_MODE_EXPONENTIAL = 1,
} TfsIterMode;

typedef enum TfsMethod {
  TFS_METHOD_MWT = 0,
  TFS_METHOD_WTSST = 1,
  TFS_METHOD_WTMSST = 2,
  TFS_METHOD_RM = 3,
} TfsMethod;

/**
 * Result of every fallible call.
 */
typedef enum TfsStatus {
  TFS_STATUS_OK = 0,
  TFS_STATUS_NULL_POINTER = 1,
  TFS_STATUS_INVALID_ARGUMENT = 2,
  TFS_STATUS_DIMENSION = 3,
  /**
   * The data has no energy or power where some is required.
   */
  TFS_STATUS_UNDEFINED = 4,
  TFS_STATUS_FORMAT = 5,
  TFS_STATUS_IO = 6,
  TFS_STATUS_UNSUPPORTED = 7,
  TFS_STATUS_PANIC = 8,
} TfsStatus;

/**
 * Opaque signal handle.
 */
typedef struct TfsSignal TfsSignal;

/**
 * Opaque transform result.
 */
typedef struct TfsTransform TfsTransform;

/**
 * Transform settings. Start from [`tfs_params_default`].
 */
typedef struct TfsParams {
  enum TfsMethod method;
  double omega0;
  double sigma;
  /**
   * First frequency bin, at least 1.
   */
  size_t k_min;
  /**
   * Last frequency bin; 0 selects every bin below Nyquist.
   */
  size_t k_max;
  /**
   * Support threshold, relative to the largest magnitude unless
   * `threshold_absolute` is set.
   */
  double threshold;
  bool threshold_absolute;
  /**
   * Iterations for [`TfsMethod::Wtmsst`].
   */
  size_t n_iter;
  enum TfsIterMode iter_mode;
} TfsParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` as a
 * NUL-terminated string, truncating to `cap` bytes. Returns the full
 * message length excluding the terminator.
 *
 * # Safety
 * `buf` must be null or valid for `cap` bytes.
 */
size_t tfs_last_error(char *buf, size_t cap);

struct TfsParams tfs_params_default(void);

/**
 * Wraps `len` real samples taken at `fs` Hz starting at time `t0`.
 *
 * # Safety
 * `samples` must be valid for `len` reads and `out` for one write.
 */
enum TfsStatus tfs_signal_from_real(const double *samples,
                                    size_t len,
                                    double fs,
                                    double t0,
                                    struct TfsSignal **out);

/**
 * Unit impulse at `t0_s` seconds in a record of `len` samples.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum TfsStatus tfs_signal_dirac(double t0_s, size_t len, double fs, struct TfsSignal **out);

/**
 * # Safety
 * `sig` must be a live handle; returns 0 for null.
 */
size_t tfs_signal_len(const struct TfsSignal *sig);

/**
 * Copies the real parts of the samples into `buf`, which must hold
 * exactly `tfs_signal_len` values.
 *
 * # Safety
 * `sig` must be a live handle and `buf` valid for `len` writes.
 */
enum TfsStatus tfs_signal_copy_real(const struct TfsSignal *sig, double *buf, size_t len);

/**
 * # Safety
 * `sig` must be null or a handle not yet freed.
 */
void tfs_signal_free(struct TfsSignal *sig);

/**
 * Runs the transform selected by `params` on `sig`.
 *
 * # Safety
 * `sig` and `params` must be valid, `out` valid for one write.
 */
enum TfsStatus tfs_transform(const struct TfsSignal *sig,
                             const struct TfsParams *params,
                             struct TfsTransform **out);

/**
 * Rows (frequency bins) and columns (samples) of the result.
 *
 * # Safety
 * `t` must be a live handle, `rows` and `cols` valid for one write.
 */
enum TfsStatus tfs_transform_dims(const struct TfsTransform *t, size_t *rows, size_t *cols);

/**
 * Copies the result row-major into `re` and `im`, each holding
 * `rows * cols` values. For RM the energy is in `re` and `im` is zero.
 *
 * # Safety
 * `t` must be a live handle; `re` and `im` valid for `len` writes.
 */
enum TfsStatus tfs_transform_copy(const struct TfsTransform *t, double *re, double *im, size_t len);

/**
 * Writes the result as a TFR1 file.
 *
 * # Safety
 * `t` must be a live handle and `path` a NUL-terminated UTF-8 string.
 */
enum TfsStatus tfs_transform_write_tfr(const struct TfsTransform *t, const char *path);

/**
 * Inverts a WTSST or WTMSST result back to a time signal. Real input gives
 * a real signal.
 *
 * # Safety
 * `t` must be a live handle and `out` valid for one write.
 */
enum TfsStatus tfs_transform_reconstruct(const struct TfsTransform *t, struct TfsSignal **out);

/**
 * Rényi entropy of order `alpha` of the result's energy distribution.
 *
 * # Safety
 * `t` must be a live handle and `out` valid for one write.
 */
enum TfsStatus tfs_transform_renyi_entropy(const struct TfsTransform *t, double alpha, double *out);

/**
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void tfs_transform_free(struct TfsTransform *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TFSQUEEZE_H */
