#ifndef LEFSCHETZ_LAB_H
#define LEFSCHETZ_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LlStatus {
  LL_STATUS_OK = 0,
  LL_STATUS_NULL_POINTER = 1,
  LL_STATUS_INVALID_UTF8 = 2,
  LL_STATUS_INPUT_ERROR = 3,
  LL_STATUS_OUT_OF_RANGE = 4,
  LL_STATUS_INTERNAL_ERROR = 5,
  LL_STATUS_PANIC = 6,
} LlStatus;

/**
 * Opaque model handle.
 */
typedef struct LlModel LlModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses fixture JSON text and builds a model.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LlStatus ll_model_from_json(const char *json, struct LlModel **out);

/**
 * Loads a fixture file and builds a model.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LlStatus ll_model_from_path(const char *path, struct LlModel **out);

/**
 * # Safety
 * `model` must come from `ll_model_from_*` and not be used afterwards.
 */
void ll_model_free(struct LlModel *model);

/**
 * # Safety
 * `model` and `out` must be valid pointers.
 */
enum LlStatus ll_model_dim(const struct LlModel *model, size_t *out);

/**
 * Betti number `b_p` of the invariant complex.
 *
 * # Safety
 * `model` and `out` must be valid pointers.
 */
enum LlStatus ll_model_betti(const struct LlModel *model, size_t p, size_t *out);

/**
 * Writes 1 to `is_lefschetz` when every relation is the graph of an
 * isomorphism and all parities are even, 0 when obstructed.
 *
 * # Safety
 * `model` and `is_lefschetz` must be valid pointers.
 */
enum LlStatus ll_model_verdict(const struct LlModel *model, int32_t *is_lefschetz);

/**
 * JSON report of the Lefschetz analysis. Free the result with `ll_string_free`.
 *
 * # Safety
 * `model` and `out` must be valid pointers.
 */
enum LlStatus ll_model_report_json(const struct LlModel *model, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ll_string_free(char *s);

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *ll_last_error(void);

const char *ll_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEFSCHETZ_LAB_H */
