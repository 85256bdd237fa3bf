/* C interface for the limitroots library. */

#ifndef LIMITROOTS_H
#define LIMITROOTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result status for every call.
 */
typedef enum LrStatus {
  /**
   * Success.
   */
  LrOk = 0,
  /**
   * Malformed input text: curve JSON, preset name, or class spec.
   */
  LrParseError = 1,
  /**
   * Structurally valid input that fails a mathematical requirement.
   */
  LrInvalidInput = 2,
  /**
   * Instance exceeds a built-in size limit.
   */
  LrSizeLimit = 3,
  /**
   * A required pointer argument was NULL.
   */
  LrNullPointer = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  LrUtf8Error = 5,
  /**
   * Unexpected internal failure.
   */
  LrInternalError = 6,
} LrStatus;

/**
 * Opaque curve handle.
 */
typedef struct LrCurve LrCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread.  The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *lr_last_error(void);

/**
 * Parses a curve from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum LrStatus lr_curve_from_json(const char *json, struct LrCurve **out);

/**
 * Builds one of the named preset curves.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum LrStatus lr_curve_preset(const char *name, struct LrCurve **out);

/**
 * Releases a curve handle.  NULL is ignored.
 *
 * # Safety
 * `curve` must be a handle from this library, not yet freed.
 */
void lr_curve_free(struct LrCurve *curve);

/**
 * Arithmetic genus of the curve.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum LrStatus lr_curve_genus(const struct LrCurve *curve, uint64_t *out);

/**
 * First Betti number of the dual graph.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum LrStatus lr_curve_betti1(const struct LrCurve *curve, uint64_t *out);

/**
 * Number of vertices (irreducible components).
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum LrStatus lr_curve_vertex_count(const struct LrCurve *curve, uint64_t *out);

/**
 * Number of edges (nodes of the curve).
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum LrStatus lr_curve_edge_count(const struct LrCurve *curve, uint64_t *out);

/**
 * Limit-root fiber report as JSON.  `class_spec` uses the same syntax as
 * the command line: `zero`, `spin:l=<int>[,...]`, or a residue list.
 *
 * # Safety
 * `curve` must be a live handle; `class_spec` must be NUL-terminated;
 * `out` must be a valid pointer.
 */
enum LrStatus lr_limit_roots_json(const struct LrCurve *curve,
                                  uint64_t r,
                                  const char *class_spec,
                                  char **out);

/**
 * Balanced multidegree inventory as JSON.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum LrStatus lr_balanced_json(const struct LrCurve *curve,
                               int64_t total_degree,
                               bool stably_only,
                               bool parallel,
                               char **out);

/**
 * Compactified Picard fiber report as JSON.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum LrStatus lr_shat_fiber_json(const struct LrCurve *curve,
                                 uint64_t r,
                                 int64_t l,
                                 bool parallel,
                                 char **out);

/**
 * Two-component fiber dimension as JSON.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum LrStatus lr_riass_json(uint64_t k, uint64_t r, uint64_t res1, uint64_t res2, char **out);

/**
 * Regularity diagnostics for the comparison map, as JSON.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be a valid pointer.
 */
enum LrStatus lr_chi_json(const struct LrCurve *curve,
                          uint64_t r,
                          int64_t l,
                          bool parallel,
                          char **out);

/**
 * Releases a string returned by this library.  NULL is ignored.
 *
 * # Safety
 * `s` must come from this library, not yet freed.
 */
void lr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIMITROOTS_H */
