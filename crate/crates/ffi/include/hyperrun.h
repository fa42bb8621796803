#ifndef HYPERRUN_H
#define HYPERRUN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HrEngine {
  HR_ENGINE_FORMULA = 0,
  HR_ENGINE_ORACLE = 1,
} HrEngine;

typedef enum HrFamily {
  HR_FAMILY_LOOSE_PATH = 0,
  HR_FAMILY_LOOSE_CYCLE = 1,
  HR_FAMILY_TIGHT_PATH = 2,
  HR_FAMILY_TIGHT_CYCLE = 3,
  HR_FAMILY_M_TIGHT_PATH = 4,
} HrFamily;

typedef enum HrStatus {
  HR_STATUS_OK = 0,
  HR_STATUS_INVALID_ARGUMENT = 1,
  HR_STATUS_BUDGET_EXCEEDED = 2,
  HR_STATUS_NULL_POINTER = 3,
  HR_STATUS_PANIC = 4,
} HrStatus;

/**
 * Opaque session handle.
 */
typedef struct HrSession HrSession;

/**
 * Structure parameters. `m` is only read for `HR_FAMILY_M_TIGHT_PATH`.
 */
typedef struct HrStructure {
  enum HrFamily family;
  uint32_t r;
  uint32_t n;
  uint32_t m;
} HrStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a session. `budget` is the oracle vertex budget; 0 means the
 * default (or `HYPERRUN_ORACLE_BUDGET` when set). Never returns null.
 */
struct HrSession *hr_session_new(uint32_t budget);

/**
 * # Safety
 * `session` must come from [`hr_session_new`] and not be used afterwards.
 * Null is ignored.
 */
void hr_session_free(struct HrSession *session);

/**
 * Number of vertices of the structure, written to `out`.
 *
 * # Safety
 * `structure` and `out` must be valid pointers.
 */
enum HrStatus hr_vertex_count(const struct HrStructure *structure, size_t *out);

/**
 * Count of colorings with exactly `j` blue vertices and no blue run of `k`
 * edges, as a decimal string in `*out`.
 *
 * # Safety
 * Pointers must be valid; free `*out` with [`hr_string_free`].
 */
enum HrStatus hr_count(const struct HrSession *session,
                       const struct HrStructure *structure,
                       uint32_t k,
                       int64_t j,
                       enum HrEngine engine,
                       char **out);

/**
 * Whole table over `j` as a JSON document in `*out`.
 *
 * # Safety
 * Pointers must be valid; free `*out` with [`hr_string_free`].
 */
enum HrStatus hr_table_json(const struct HrSession *session,
                            const struct HrStructure *structure,
                            uint32_t k,
                            enum HrEngine engine,
                            char **out);

/**
 * Survival probability when each vertex fails independently with
 * probability `p`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HrStatus hr_reliability(const struct HrSession *session,
                             const struct HrStructure *structure,
                             uint32_t k,
                             double p,
                             double *out);

/**
 * Exact survival probability. `p` is `a/b`, an integer or a decimal; the
 * result is written as `a/b` (or an integer) to `*out`.
 *
 * # Safety
 * `p` must be a NUL-terminated string; free `*out` with [`hr_string_free`].
 */
enum HrStatus hr_reliability_exact(const struct HrSession *session,
                                   const struct HrStructure *structure,
                                   uint32_t k,
                                   const char *p,
                                   char **out);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void hr_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library from the same thread.
 */
const char *hr_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERRUN_H */
