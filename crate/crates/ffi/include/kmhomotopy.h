#ifndef KMHOMOTOPY_H
#define KMHOMOTOPY_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum KmhStatus {
  KMH_STATUS_OK = 0,
  KMH_STATUS_NULL_POINTER = 1,
  KMH_STATUS_INVALID_UTF8 = 2,
  KMH_STATUS_PARSE = 3,
  KMH_STATUS_DOMAIN = 4,
  KMH_STATUS_VERIFICATION = 5,
  KMH_STATUS_OUT_OF_RANGE = 6,
  KMH_STATUS_PANIC = 7,
} KmhStatus;

typedef struct KmhMatrix KmhMatrix;

typedef struct KmhSeries KmhSeries;

/**
 * Classification flags. `epsilon` is -1 when undefined.
 */
typedef struct KmhClassification {
  size_t rank;
  bool generic;
  bool symmetrizable;
  bool indecomposable;
  int32_t epsilon;
} KmhClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *kmh_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void kmh_string_free(char *s);

/**
 * Parses `{"n": .., "entries": [[..]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KmhStatus kmh_matrix_from_json(const char *json, struct KmhMatrix **out);

/**
 * Builds a matrix from `n * n` row-major entries.
 *
 * # Safety
 * `entries` must point to `n * n` readable values and `out` be valid.
 */
enum KmhStatus kmh_matrix_from_entries(const int64_t *entries, size_t n, struct KmhMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void kmh_matrix_free(struct KmhMatrix *m);

/**
 * Rank of the matrix, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t kmh_matrix_rank(const struct KmhMatrix *m);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum KmhStatus kmh_classify(const struct KmhMatrix *m, struct KmhClassification *out);

/**
 * Full classification report as JSON.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum KmhStatus kmh_classify_json(const struct KmhMatrix *m, char **out);

/**
 * Computes a named series (`flag`, `chow`, `bg`, `bg-recursive`,
 * `mv-coker`). `epsilon` is ignored for `flag`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KmhStatus kmh_series(const char *name,
                          size_t n,
                          int32_t epsilon,
                          size_t order,
                          struct KmhSeries **out);

/**
 * # Safety
 * `s` must be null or a live handle.
 */
void kmh_series_free(struct KmhSeries *s);

/**
 * Truncation order of the series, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t kmh_series_order(const struct KmhSeries *s);

/**
 * Coefficient of `q^degree` as a decimal or `p/q` string.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum KmhStatus kmh_series_coefficient(const struct KmhSeries *s, size_t degree, char **out);

/**
 * Coefficient array as a JSON list of strings.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum KmhStatus kmh_series_to_json(const struct KmhSeries *s, char **out);

/**
 * Closed-form generator count `a_{2i}` (family `a`) or `b_{2i}` (family
 * `b`) as a decimal string.
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out` a valid pointer.
 */
enum KmhStatus kmh_coefficient(const char *family, size_t n, size_t i, char **out);

/**
 * Rational homotopy type of BG(A) for `(n, ε)` as JSON.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KmhStatus kmh_homotopy_json(size_t n, int32_t epsilon, size_t max_degree, char **out);

/**
 * Writes whether the two groups are rationally equivalent.
 *
 * # Safety
 * Both handles must be live and `out` a valid pointer.
 */
enum KmhStatus kmh_rationally_equivalent(const struct KmhMatrix *a,
                                         const struct KmhMatrix *b,
                                         bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KMHOMOTOPY_H */
