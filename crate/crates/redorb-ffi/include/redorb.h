#ifndef REDORB_H
#define REDORB_H

/* Generated by cbindgen from src/lib.rs. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define REDORB_OK 0

/**
 * A required pointer argument was null.
 */
#define REDORB_ERR_NULL -1

/**
 * A string argument was not valid UTF-8.
 */
#define REDORB_ERR_UTF8 -2

/**
 * The library panicked; the handle arguments should be considered invalid.
 */
#define REDORB_ERR_PANIC -3

/**
 * A family of congruence conditions.
 */
typedef struct RedorbFamily RedorbFamily;

/**
 * A monic integer polynomial `x^n + f_1 x^(n-1) + ... + f_n`.
 */
typedef struct RedorbPoly RedorbPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *redorb_last_error(void);

/**
 * Static name of a status code.
 */
const char *redorb_status_name(int32_t code);

/**
 * Create a polynomial from `n` coefficients `f_1..f_n`.
 *
 * # Safety
 * `coeffs` must point to `n` readable `int64_t` values and `out` to a
 * writable handle slot. On success `*out` owns a handle to be released with
 * `redorb_poly_free`.
 */
int32_t redorb_poly_new(const int64_t *coeffs, size_t n, struct RedorbPoly **out);

/**
 * Release a polynomial handle. Null is ignored.
 *
 * # Safety
 * `poly` must be null or a handle from `redorb_poly_new` not freed before.
 */
void redorb_poly_free(struct RedorbPoly *poly);

/**
 * Degree of a polynomial, or 0 for null.
 *
 * # Safety
 * `poly` must be null or a live handle.
 */
size_t redorb_poly_degree(const struct RedorbPoly *poly);

/**
 * Number of `P(Z_p)`-orbits on `W0(Z_p)` with invariant `poly`.
 *
 * # Safety
 * `poly` must be a live handle and `out` writable.
 */
int32_t redorb_orbit_count_local(const struct RedorbPoly *poly, uint64_t p, uint64_t *out);

/**
 * Number of `P(Z)`-orbits on `W0(Z)` with invariant `poly`, restricted by
 * `family` when it is non-null.
 *
 * # Safety
 * `poly` must be a live handle, `family` null or a live handle, `out` writable.
 */
int32_t redorb_orbit_count_global(const struct RedorbPoly *poly,
                                  const struct RedorbFamily *family,
                                  uint64_t *out);

/**
 * Parse a family from JSON, e.g. `{"n": 3, "conditions": {"2": {"kind": "unit-lambda"}}}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable handle slot.
 * Release the handle with `redorb_family_free`.
 */
int32_t redorb_family_from_json(const char *json, struct RedorbFamily **out);

/**
 * Release a family handle. Null is ignored.
 *
 * # Safety
 * `family` must be null or a handle from `redorb_family_from_json` not freed before.
 */
void redorb_family_free(struct RedorbFamily *family);

/**
 * The lambda-density factor of `family` at `p` as an exact rational string
 * `"num/den"`, written to `*out`; release it with `redorb_string_free`.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
int32_t redorb_local_density(const struct RedorbFamily *family,
                             uint64_t p,
                             uint32_t jmax,
                             char **out);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not freed before.
 */
void redorb_string_free(char *s);

/**
 * Enclosure `[lo, hi]` of `C_n^fin`.
 *
 * # Safety
 * `lo` and `hi` must be writable.
 */
int32_t redorb_cfin(size_t n, double precision, double *lo, double *hi);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* REDORB_H */
