#ifndef LEGENDRIAN_H
#define LEGENDRIAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LgCriterionCase {
  LG_CRITERION_CASE_NOT_SIMPLE = 0,
  LG_CRITERION_CASE_ALL_ONE_PEAK = 1,
  LG_CRITERION_CASE_TWO_PEAK_POWER = 2,
  LG_CRITERION_CASE_MANY_PEAKS_ONCE = 3,
} LgCriterionCase;

typedef enum LgRenderFormat {
  LG_RENDER_FORMAT_ASCII = 0,
  LG_RENDER_FORMAT_SVG = 1,
} LgRenderFormat;

/**
 * Status codes returned by every fallible call.
 */
typedef enum LgStatus {
  LG_STATUS_OK = 0,
  LG_STATUS_NULL_ARGUMENT = 1,
  LG_STATUS_INVALID_UTF8 = 2,
  LG_STATUS_PARSE_ERROR = 3,
  LG_STATUS_SCHEMA_ERROR = 4,
  LG_STATUS_RANGE_INVALID = 5,
  LG_STATUS_INVALID_SPEC = 6,
  LG_STATUS_NOT_APPLICABLE = 7,
  LG_STATUS_DOMAIN_ERROR = 8,
  LG_STATUS_PANIC = 9,
} LgStatus;

/**
 * A validated prime knot with its mountain range.
 */
typedef struct LgKnot LgKnot;

/**
 * A connected sum of distinct knots with multiplicities.
 */
typedef struct LgSum LgSum;

/**
 * `S+^a S-^b (p x P1 # q x P2)`.
 */
typedef struct LgCanonicalForm {
  uint64_t a;
  uint64_t b;
  uint64_t p;
  uint64_t q;
} LgCanonicalForm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *lg_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void lg_string_free(char *s);

/**
 * Parses and validates a knot document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LgStatus lg_knot_from_json(const char *json, struct LgKnot **out);

/**
 * Builds a knot from peak coordinates in ascending `r`. `genus < 0` means
 * unknown.
 *
 * # Safety
 * `name` must be NUL-terminated; `tbs` and `rs` must hold `len` values.
 */
enum LgStatus lg_knot_new(const char *name,
                          const int64_t *tbs,
                          const int64_t *rs,
                          size_t len,
                          int64_t genus,
                          bool prime,
                          struct LgKnot **out);

/**
 * # Safety
 * `knot` must come from this library and not have been freed. Null is ignored.
 */
void lg_knot_free(struct LgKnot *knot);

/**
 * Number of peaks; 0 for a null handle.
 *
 * # Safety
 * `knot` must be null or a live handle.
 */
size_t lg_knot_peak_count(const struct LgKnot *knot);

/**
 * # Safety
 * `knot` must be a live handle; `out` must be writable.
 */
enum LgStatus lg_knot_contains(const struct LgKnot *knot, int64_t tb, int64_t r, bool *out);

/**
 * Canonical one-line knot document.
 *
 * # Safety
 * `knot` must be a live handle; `out` must be writable.
 */
enum LgStatus lg_knot_to_json(const struct LgKnot *knot, char **out);

/**
 * # Safety
 * `knot` must be a live handle; `out` must be writable.
 */
enum LgStatus lg_knot_render(const struct LgKnot *knot,
                             int64_t tb_min,
                             enum LgRenderFormat format,
                             char **out);

/**
 * Canonical form of the class at `(tb, r)` in `n` copies of a two-peak knot.
 * `*found` is false when no class of the sum sits at that point.
 *
 * # Safety
 * `knot` must be a live handle; `found` and `out` must be writable.
 */
enum LgStatus lg_canonical_form(const struct LgKnot *knot,
                                uint32_t n,
                                int64_t tb,
                                int64_t r,
                                bool *found,
                                struct LgCanonicalForm *out);

/**
 * Builds a sum from `len` knots with their counts. The knots are shared, so
 * they may be freed afterwards.
 *
 * # Safety
 * `knots` and `counts` must hold `len` entries; every knot must be live.
 */
enum LgStatus lg_sum_new(const struct LgKnot *const *knots,
                         const size_t *counts,
                         size_t len,
                         struct LgSum **out);

/**
 * # Safety
 * `sum` must come from this library and not have been freed. Null is ignored.
 */
void lg_sum_free(struct LgSum *sum);

/**
 * # Safety
 * `sum` must be a live handle; `out` must be writable.
 */
enum LgStatus lg_sum_top_tb(const struct LgSum *sum, int64_t *out);

/**
 * # Safety
 * `sum` must be a live handle; outputs must be writable.
 */
enum LgStatus lg_sum_criterion(const struct LgSum *sum,
                               bool *simple,
                               enum LgCriterionCase *matched);

/**
 * Number of peak classes of the sum.
 *
 * # Safety
 * `sum` must be a live handle; `out` must be writable.
 */
enum LgStatus lg_sum_peak_count(const struct LgSum *sum, uint64_t *out);

/**
 * Number of classes with invariants `(tb, r)`.
 *
 * # Safety
 * `sum` must be a live handle; `out` must be writable.
 */
enum LgStatus lg_sum_fiber_size(const struct LgSum *sum, int64_t tb, int64_t r, size_t *out);

/**
 * Whether every point with `tb >= tb_min` carries a single class.
 *
 * # Safety
 * `sum` must be a live handle; `out` must be writable.
 */
enum LgStatus lg_sum_simple_in_window(const struct LgSum *sum, int64_t tb_min, bool *out);

/**
 * JSON analysis of the window: criterion, quotient, nonsimple points.
 *
 * # Safety
 * `sum` must be a live handle; `out` must be writable.
 */
enum LgStatus lg_sum_report_json(const struct LgSum *sum, int64_t tb_min, char **out);

/**
 * # Safety
 * `sum` must be a live handle; `out` must be writable.
 */
enum LgStatus lg_sum_render(const struct LgSum *sum,
                            int64_t tb_min,
                            enum LgRenderFormat format,
                            char **out);

/**
 * Null-terminated version string with static lifetime.
 */
const char *lg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEGENDRIAN_H */
