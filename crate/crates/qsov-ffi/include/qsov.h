#ifndef QSOV_H
#define QSOV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum QsovStatus {
  QSOV_STATUS_OK = 0,
  QSOV_STATUS_NULL_POINTER = 1,
  QSOV_STATUS_INVALID_UTF8 = 2,
  /**
   * Bad config text, parameter or operator name.
   */
  QSOV_STATUS_CONFIG = 3,
  /**
   * A computation failed (singular matrix, pole, degenerate spectrum, ...).
   */
  QSOV_STATUS_COMPUTE = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  QSOV_STATUS_PANIC = 5,
} QsovStatus;

/**
 * Opaque model handle.
 */
typedef struct QsovModel QsovModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *qsov_last_error(void);

/**
 * Library version; a static string, do not free.
 */
const char *qsov_version(void);

/**
 * Builds a model from config text (`key = value` lines). A null `config`
 * selects the bundled default configuration.
 *
 * # Safety
 * `config` must be null or a NUL-terminated string; `out` must be valid
 * for writes.
 */
enum QsovStatus qsov_model_new(const char *config, struct QsovModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must come from `qsov_model_new` and not be used afterwards.
 */
void qsov_model_free(struct QsovModel *model);

/**
 * Dimension of the quantum space `H`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum QsovStatus qsov_model_dim(const struct QsovModel *model, uintptr_t *out);

/**
 * Expected degree `g` of `B(x)`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum QsovStatus qsov_model_genus(const struct QsovModel *model, uintptr_t *out);

/**
 * JSON operator tensor for `which` in {"B","D","Y","X"} at the rational `at`
 * (e.g. "3/2"). Free the result with `qsov_string_free`.
 *
 * # Safety
 * `model` must be a live handle, `which` and `at` NUL-terminated strings,
 * `out_json` valid for writes.
 */
enum QsovStatus qsov_dump_operator(const struct QsovModel *model,
                                   const char *which,
                                   const char *at,
                                   char **out_json);

/**
 * Runs the verification suite. Writes the JSON report to `out_json` and
 * whether every check passed to `out_pass`.
 *
 * # Safety
 * `model` must be a live handle not used concurrently; out pointers must
 * be valid for writes.
 */
enum QsovStatus qsov_verify(struct QsovModel *model, char **out_json, bool *out_pass);

/**
 * Spectral analysis (roots and `w`-actions per joint eigenvector) as JSON.
 *
 * # Safety
 * As for `qsov_verify`.
 */
enum QsovStatus qsov_spectra(struct QsovModel *model, char **out_json);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void qsov_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSOV_H */
