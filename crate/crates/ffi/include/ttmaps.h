#ifndef TTMAPS_H
#define TTMAPS_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TtStatus {
  TT_STATUS_OK = 0,
  TT_STATUS_NULL_POINTER = 1,
  TT_STATUS_INVALID_UTF8 = 2,
  TT_STATUS_PARSE = 3,
  TT_STATUS_INVALID_MAP = 4,
  TT_STATUS_HYPOTHESIS = 5,
  TT_STATUS_DECOMPOSITION = 6,
  TT_STATUS_ARGUMENT = 7,
  TT_STATUS_NOT_FOUND = 8,
  TT_STATUS_BUDGET = 9,
  TT_STATUS_INTERNAL = 10,
  TT_STATUS_PANIC = 11,
} TtStatus;

/**
 * A parsed document.
 */
typedef struct TtDocument TtDocument;

/**
 * A self map together with its graph.
 */
typedef struct TtMap TtMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; valid until the next call.
 */
const char *tt_last_error(void);

/**
 * Library version, a static string.
 */
const char *tt_version(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void tt_string_free(char *s);

/**
 * Parses document text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum TtStatus tt_document_parse(const char *text, struct TtDocument **out);

/**
 * # Safety
 * `doc` must come from [`tt_document_parse`] or be null.
 */
void tt_document_free(struct TtDocument *doc);

/**
 * # Safety
 * `doc` must be a live handle; `out` must be writable.
 */
enum TtStatus tt_document_map_count(const struct TtDocument *doc, size_t *out);

/**
 * Copies out the map called `name`, or the only map when `name` is null.
 *
 * # Safety
 * `doc` must be a live handle, `name` null or NUL-terminated, `out` writable.
 */
enum TtStatus tt_document_map(const struct TtDocument *doc, const char *name, struct TtMap **out);

/**
 * # Safety
 * `map` must come from [`tt_document_map`] or be null.
 */
void tt_map_free(struct TtMap *map);

/**
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum TtStatus tt_map_edge_count(const struct TtMap *map, size_t *out);

/**
 * Folds in the deterministic decomposition.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum TtStatus tt_map_fold_count(const struct TtMap *map, size_t *out);

/**
 * Leading eigenvalue: an isolating interval of width at most 2^-40 and the
 * characteristic polynomial as text (free with [`tt_string_free`]).
 * `char_poly` may be null.
 *
 * # Safety
 * `map` must be a live handle; `lo` and `hi` writable.
 */
enum TtStatus tt_map_stretch_factor(const struct TtMap *map,
                                    double *lo,
                                    double *hi,
                                    char **char_poly);

/**
 * Decides `λ^n ≥ m + 1` exactly; `holds` receives 1 or 0.
 *
 * # Safety
 * `map` must be a live handle; `holds` must be writable.
 */
enum TtStatus tt_map_fold_bound(const struct TtMap *map, int32_t *holds);

/**
 * Stack count of an expanding irreducible map.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum TtStatus tt_map_stack_count(const struct TtMap *map, size_t *out);

/**
 * The `analyze` report as one JSON object (free with [`tt_string_free`]).
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum TtStatus tt_map_analyze_json(const struct TtMap *map, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TTMAPS_H */
