#ifndef ABCO_H
#define ABCO_H

/* Generated by cbindgen from the abco-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>
#include <stdbool.h>
#include <stdint.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum AbcoStatus {
  ABCO_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ABCO_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  ABCO_STATUS_INVALID_UTF8 = 2,
  /**
   * A numeric or digit argument was rejected.
   */
  ABCO_STATUS_INVALID_ARGUMENT = 3,
  /**
   * The substitution spec does not define a valid Parry substitution.
   */
  ABCO_STATUS_INVALID_SUBSTITUTION = 4,
  /**
   * The query would materialize more letters than the cap allows.
   */
  ABCO_STATUS_RESOURCE_EXCEEDED = 5,
  /**
   * The digit recursion hit an inapplicable step.
   */
  ABCO_STATUS_STEP_INAPPLICABLE = 6,
  /**
   * Codec and oracle disagreed (method `Both`).
   */
  ABCO_STATUS_DISAGREEMENT = 7,
  /**
   * An internal invariant failed.
   */
  ABCO_STATUS_INTERNAL = 8,
} AbcoStatus;

/**
 * Computation path selector for [`abco_abelian_complexity`].
 */
typedef enum AbcoMethod {
  ABCO_METHOD_CODEC = 0,
  ABCO_METHOD_ORACLE = 1,
  ABCO_METHOD_BOTH = 2,
} AbcoMethod;

/**
 * Opaque handle to a validated Parry substitution.
 */
typedef struct AbcoSubstitution AbcoSubstitution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a substitution spec (`simple m=3 alpha=1,1,1`,
 * `nonsimple m=1 p=2 alpha=2,0,1`, or raw rules `0->01;1->02;2->0`)
 * into a new handle written to `out`.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string; `out` must be a valid
 * pointer to writable memory.
 */
enum AbcoStatus abco_substitution_parse(const char *spec, struct AbcoSubstitution **out);

/**
 * Release a handle created by [`abco_substitution_parse`]. Null is a no-op.
 *
 * # Safety
 * `subst` must be a pointer previously returned by
 * [`abco_substitution_parse`] and not yet freed.
 */
void abco_substitution_free(struct AbcoSubstitution *subst);

/**
 * Alphabet size of the substitution, or 0 when the handle is null.
 *
 * # Safety
 * `subst` must be a live handle or null.
 */
uint32_t abco_alphabet_size(const struct AbcoSubstitution *subst);

/**
 * Write the canonical description of the substitution
 * (e.g. `simple m=3 alpha=1,1,1`) to `out`.
 *
 * # Safety
 * `subst` must be a live handle; `out` must be writable.
 */
enum AbcoStatus abco_substitution_describe(const struct AbcoSubstitution *subst, char **out);

/**
 * Abelian complexity `AC(n)` of the fixed point, with `n` given as a
 * decimal string. `cap` limits materialized letters (0 selects the
 * default of 10^8). When the codec path hits an inapplicable step the
 * oracle supplies the value and `*out_fallback` (when non-null) is set.
 *
 * # Safety
 * `subst` must be a live handle; strings must be NUL-terminated;
 * `out_value` must be writable; `out_fallback` may be null.
 */
enum AbcoStatus abco_abelian_complexity(const struct AbcoSubstitution *subst,
                                        const char *n_decimal,
                                        enum AbcoMethod method,
                                        uint64_t cap,
                                        uint64_t *out_value,
                                        bool *out_fallback);

/**
 * Normal F-representation of `n`, rendered like `(1,0,1)`, written to
 * `out` as a fresh string.
 *
 * # Safety
 * `subst` must be a live handle; `n_decimal` must be NUL-terminated;
 * `out` must be writable.
 */
enum AbcoStatus abco_frep(const struct AbcoSubstitution *subst, const char *n_decimal, char **out);

/**
 * The Z-set of `n` as a JSON object
 * `{"n":…,"digits":…,"pairs":[{"z":…,"z_tilde":…},…]}`.
 *
 * # Safety
 * As for [`abco_abelian_complexity`]; `out` must be writable.
 */
enum AbcoStatus abco_zset_json(const struct AbcoSubstitution *subst,
                               const char *n_decimal,
                               uint64_t cap,
                               char **out);

/**
 * Probe stabilization along the digit pattern `(block^i, tail)` and
 * write the report as a JSON object. `block_csv`/`tail_csv` are
 * comma-separated digit lists; `tail_csv` may be empty.
 *
 * # Safety
 * As for [`abco_abelian_complexity`]; `out` must be writable.
 */
enum AbcoStatus abco_stabilize_json(const struct AbcoSubstitution *subst,
                                    const char *block_csv,
                                    const char *tail_csv,
                                    uint32_t max_i,
                                    uint64_t cap,
                                    char **out);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library and not yet
 * freed.
 */
void abco_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABCO_H */
