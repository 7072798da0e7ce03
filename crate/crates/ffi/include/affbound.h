#ifndef AFFBOUND_H
#define AFFBOUND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum AbStatus {
  AB_STATUS_OK = 0,
  AB_STATUS_NULL_POINTER = 1,
  AB_STATUS_INVALID_UTF8 = 2,
  // Malformed algebra file, term or builtin name.
  AB_STATUS_INVALID_INPUT = 3,
  AB_STATUS_OUT_OF_RANGE = 4,
  // A search would exceed its budget or a hard limit.
  AB_STATUS_LIMIT_EXCEEDED = 5,
  // The algebra does not satisfy the laws the operation needs.
  AB_STATUS_PRECONDITION = 6,
  // An output buffer is too small.
  AB_STATUS_BUFFER_TOO_SMALL = 7,
  // A panic was caught at the boundary.
  AB_STATUS_INTERNAL = 8,
} AbStatus;

// Opaque handle to a finite algebra.
typedef struct AbAlgebra AbAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Owned by the
// library.
const char *ab_last_error(void);

// Library version, static.
const char *ab_version(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void ab_string_free(char *s);

// Parses an algebra file given as JSON text.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum AbStatus ab_algebra_from_json(const char *json, struct AbAlgebra **out);

// Builds a catalog algebra from a spec such as `zn_ring:6`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out` writable.
enum AbStatus ab_algebra_builtin(const char *spec, struct AbAlgebra **out);

// Frees an algebra. Null is ignored.
//
// # Safety
// `a` must come from this library and not be freed twice.
void ab_algebra_free(struct AbAlgebra *a);

// # Safety
// `a` must be a live handle and `out` writable.
enum AbStatus ab_algebra_carrier(const struct AbAlgebra *a, size_t *out);

// Serializes the algebra as an algebra file. Free the result with
// [`ab_string_free`].
//
// # Safety
// `a` must be a live handle and `out` writable.
enum AbStatus ab_algebra_to_json(const struct AbAlgebra *a, char **out);

// Applies the operation named `symbol` to `nargs` elements.
//
// # Safety
// `a` must be a live handle, `symbol` NUL-terminated, `args` readable for
// `nargs` entries (or null when `nargs` is 0) and `out` writable.
enum AbStatus ab_algebra_apply(const struct AbAlgebra *a,
                               const char *symbol,
                               const size_t *args,
                               size_t nargs,
                               size_t *out);

// Size of the translation monoid.
//
// # Safety
// `a` must be a live handle and `out` writable.
enum AbStatus ab_monoid_size(const struct AbAlgebra *a, size_t *out);

// Map induced by a term in `x`, written to `image` (length at least the
// carrier size).
//
// # Safety
// `a` must be a live handle, `term` NUL-terminated and `image` writable
// for `len` entries.
enum AbStatus ab_eval_term(const struct AbAlgebra *a, const char *term, size_t *image, size_t len);

// Affine-boundedness check. `bounded` receives the verdict; if `json` is
// not null it receives the certificate or the missing maps as JSON.
//
// # Safety
// `a` must be a live handle, `bounded` writable, `json` null or writable.
enum AbStatus ab_check_bounded_by(const struct AbAlgebra *a, size_t m, bool *bounded, char **json);

// Least bound, with its certificate as JSON if `certificate` is not null.
//
// # Safety
// `a` must be a live handle, `m` writable, `certificate` null or writable.
enum AbStatus ab_minimal_bound(const struct AbAlgebra *a, size_t *m, char **certificate);

// # Safety
// `a` must be a live handle and `out` writable.
enum AbStatus ab_is_simple(const struct AbAlgebra *a, bool *out);

// Number of congruences (carrier at most 7).
//
// # Safety
// `a` must be a live handle and `out` writable.
enum AbStatus ab_congruence_count(const struct AbAlgebra *a, size_t *out);

// Least congruence relating `x` and `y`, as block labels (each element's
// label is the least element of its block).
//
// # Safety
// `a` must be a live handle and `labels` writable for `len` entries.
enum AbStatus ab_principal_congruence(const struct AbAlgebra *a,
                                      size_t x,
                                      size_t y,
                                      size_t *labels,
                                      size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AFFBOUND_H */
