#ifndef DIRSPACE_H
#define DIRSPACE_H

/* Generated by cbindgen from crates/dirspace-ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DsStatus {
  DS_STATUS_OK = 0,
  DS_STATUS_NULL_ARGUMENT = 1,
  DS_STATUS_INVALID_UTF8 = 2,
  DS_STATUS_PARSE = 3,
  DS_STATUS_DOMAIN = 4,
  DS_STATUS_PRECONDITION = 5,
  DS_STATUS_UNSUPPORTED = 6,
  DS_STATUS_BUDGET = 7,
  DS_STATUS_PANIC = 8,
} DsStatus;

typedef enum DsKind {
  DS_KIND_NOT_DIRECTED = 0,
  DS_KIND_DIRECTED = 1,
  DS_KIND_CONTINUOUS = 2,
  DS_KIND_ALGEBRAIC = 3,
} DsKind;

typedef enum DsTheory {
  DS_THEORY_LOWER = 0,
  DS_THEORY_UPPER = 1,
  DS_THEORY_CONVEX = 2,
} DsTheory;

/**
 * A finished report.
 */
typedef struct DsReport DsReport;

/**
 * A parsed space.
 */
typedef struct DsSpace DsSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ds_last_error(void);

/**
 * Parse a schema document holding a "space" or "poset" field.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DsStatus ds_space_parse(const char *json, struct DsSpace **out);

/**
 * # Safety
 * `s` must come from `ds_space_parse` and not be used afterwards.
 */
void ds_space_free(struct DsSpace *s);

/**
 * # Safety
 * `s` must be a live space handle and `out` a valid pointer.
 */
enum DsStatus ds_space_classify(const struct DsSpace *s, uint32_t depth, enum DsKind *out);

/**
 * Whether `x ≪ y`; elements are JSON values such as `3` or `"top"`.
 *
 * # Safety
 * Pointers must be valid; `x` and `y` NUL-terminated.
 */
enum DsStatus ds_space_way_below(const struct DsSpace *s,
                                 const char *x,
                                 const char *y,
                                 uint32_t depth,
                                 bool *out);

/**
 * The ⇓ ⊣ sup adjunction report.
 *
 * # Safety
 * `s` must be a live space handle and `out` a valid pointer.
 */
enum DsStatus ds_space_adjunction(const struct DsSpace *s, uint32_t depth, struct DsReport **out);

/**
 * Subset model against the free algebra, for a finite poset.
 *
 * # Safety
 * `s` must be a live space handle and `out` a valid pointer.
 */
enum DsStatus ds_powerspace(const struct DsSpace *s,
                            enum DsTheory t,
                            uint64_t budget,
                            struct DsReport **out);

/**
 * Checks (i)–(v) for the free algebra functor over `s`.
 *
 * # Safety
 * `s` must be a live space handle and `out` a valid pointer.
 */
enum DsStatus ds_preservation(const struct DsSpace *s,
                              enum DsTheory t,
                              uint32_t depth,
                              struct DsReport **out);

/**
 * 1 when no check failed, 0 when refuted, -1 for a null handle.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
int32_t ds_report_passed(const struct DsReport *r);

/**
 * The report as JSON; release with `ds_string_free`.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
char *ds_report_json(const struct DsReport *r);

/**
 * # Safety
 * `r` must come from this library and not be used afterwards.
 */
void ds_report_free(struct DsReport *r);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ds_string_free(char *s);

/**
 * Run the "paper" or "quick" suite. `exit` receives the CLI exit code and
 * `json` the outcomes (release with `ds_string_free`).
 *
 * # Safety
 * `name` must be NUL-terminated; `exit` and `json` valid pointers.
 */
enum DsStatus ds_suite_run(const char *name,
                           uint64_t seed,
                           uint32_t jobs,
                           int32_t *exit,
                           char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRSPACE_H */
