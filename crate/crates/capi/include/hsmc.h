#ifndef HSMC_H
#define HSMC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible function.
 */
typedef enum HsmcStatus {
  HsmcStatus_Ok = 0,
  HsmcStatus_NullArgument = 1,
  HsmcStatus_InvalidUtf8 = 2,
  HsmcStatus_ParseError = 3,
  HsmcStatus_UnsupportedFragment = 4,
  HsmcStatus_BadBound = 5,
  HsmcStatus_InternalError = 6,
} HsmcStatus;

/**
 * A parsed interval temporal logic formula.
 */
typedef struct HsmcFormula HsmcFormula;

/**
 * A parsed Kripke structure.
 */
typedef struct HsmcModel HsmcModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message for the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *hsmc_last_error(void);

/**
 * The library version as a static string; do not free it.
 */
const char *hsmc_version(void);

/**
 * Parses a model description (the same format the CLI reads) into a
 * handle written through `out`. Release it with `hsmc_model_free`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HsmcStatus hsmc_model_parse(const char *text, struct HsmcModel **out);

/**
 * Releases a model handle; accepts NULL.
 *
 * # Safety
 * `model` must be NULL or a handle from `hsmc_model_parse` that has not
 * been freed yet.
 */
void hsmc_model_free(struct HsmcModel *model);

/**
 * Parses a formula into a handle written through `out`. Release it with
 * `hsmc_formula_free`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HsmcStatus hsmc_formula_parse(const char *text, struct HsmcFormula **out);

/**
 * Releases a formula handle; accepts NULL.
 *
 * # Safety
 * `formula` must be NULL or a handle from `hsmc_formula_parse` that has
 * not been freed yet.
 */
void hsmc_formula_free(struct HsmcFormula *formula);

/**
 * Releases a string returned through an out parameter; accepts NULL.
 *
 * # Safety
 * `s` must be NULL or a string this library wrote through an out
 * parameter, not freed yet.
 */
void hsmc_string_free(char *s);

/**
 * Decides whether every initial trace of the model satisfies the
 * formula. A positive `max_trace_len` bounds the searched traces and may
 * leave the verdict incomplete; zero runs the full procedure, whose
 * verdict is always exact. Writes 1 or 0 through `satisfied`. When the
 * formula is violated and `witness` is non-NULL, writes a space-separated
 * counterexample trace (release with `hsmc_string_free`); writes NULL
 * otherwise. When `complete` is non-NULL, writes 1 when the verdict is
 * exact and 0 when the bound truncated the search.
 *
 * # Safety
 * `model` and `formula` must be live handles; `satisfied` must be a valid
 * pointer; `witness` and `complete` must each be NULL or valid pointers.
 */
enum HsmcStatus hsmc_check(const struct HsmcModel *model,
                           const struct HsmcFormula *formula,
                           uintptr_t max_trace_len,
                           int32_t *satisfied,
                           char **witness,
                           int32_t *complete);

/**
 * Evaluates the formula by brute-force enumeration of all traces up to
 * `max_trace_len` states, which must be at least 1. Handles the full
 * modality set but is only a bounded approximation of the unbounded
 * semantics. Writes 1 or 0 through `satisfied` and, when `witness` is
 * non-NULL and the formula is violated within the bound, a
 * space-separated counterexample trace (release with `hsmc_string_free`).
 *
 * # Safety
 * `model` and `formula` must be live handles; `satisfied` must be a valid
 * pointer; `witness` must be NULL or a valid pointer.
 */
enum HsmcStatus hsmc_oracle_check(const struct HsmcModel *model,
                                  const struct HsmcFormula *formula,
                                  uintptr_t max_trace_len,
                                  int32_t *satisfied,
                                  char **witness);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSMC_H */
