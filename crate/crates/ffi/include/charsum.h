#ifndef CHARSUM_H
#define CHARSUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CharsumStatus {
  CHARSUM_STATUS_OK = 0,
  CHARSUM_STATUS_NULL_POINTER = 1,
  CHARSUM_STATUS_NOT_ODD_PRIME = 2,
  CHARSUM_STATUS_MODULUS_TOO_LARGE = 3,
  CHARSUM_STATUS_BAD_REDUCTION = 4,
  CHARSUM_STATUS_DEGENERATE = 5,
  CHARSUM_STATUS_NOT_SPLIT = 6,
  CHARSUM_STATUS_NOT_APPLICABLE = 7,
  CHARSUM_STATUS_INVALID_ARGUMENT = 8,
  CHARSUM_STATUS_UNKNOWN_FAMILY = 9,
  CHARSUM_STATUS_CONVENTIONS = 10,
  CHARSUM_STATUS_INTERNAL = 11,
  CHARSUM_STATUS_PANIC = 12,
} CharsumStatus;

typedef enum CharsumStrategy {
  // Closed form where one applies, direct summation otherwise.
  CHARSUM_STRATEGY_AUTO = 0,
  CHARSUM_STRATEGY_CLOSED = 1,
  CHARSUM_STRATEGY_ORACLE = 2,
} CharsumStrategy;

// Opaque conventions table.
typedef struct CharsumConventions CharsumConventions;

// Family parameters. Fields a family does not use are ignored.
typedef struct CharsumParams {
  int64_t a;
  int64_t beta;
  int64_t k;
  int64_t c;
  int64_t d;
} CharsumParams;

// A character sum value. `method` indexes the names returned by
// [`charsum_method_name`]. With `residue_only` set only `value mod p` is
// certified.
typedef struct CharsumSum {
  int64_t value;
  uint32_t method;
  bool residue_only;
} CharsumSum;

typedef struct CharsumPoints {
  // Affine solutions of y^2 = f(x).
  int64_t affine;
  // Affine count plus one point at infinity.
  int64_t with_infinity;
  struct CharsumSum sum;
} CharsumPoints;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *charsum_last_error(void);

// Name of a method index from [`CharsumSum`], or null when out of range.
const char *charsum_method_name(uint32_t method);

// Defaults used when a parameter is not given: a = 1, beta = 2, k = 1,
// c = 1, d = 2.
struct CharsumParams charsum_params_default(void);

// A copy of the built-in conventions table. Free with
// [`charsum_conventions_free`].
struct CharsumConventions *charsum_conventions_shipped(void);

// Parse a conventions table from JSON.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum CharsumStatus charsum_conventions_from_json(const char *json, struct CharsumConventions **out);

// # Safety
// `conv` must come from this library and not be freed twice. Null is ignored.
void charsum_conventions_free(struct CharsumConventions *conv);

// Sum of (f(x)|p) over F_p for f with `len` coefficients, constant term first.
//
// # Safety
// `coeffs` must point to `len` values (it may be null when `len` is 0),
// `out` must be valid, and `conv` null or a live handle.
enum CharsumStatus charsum_eval_poly(const struct CharsumConventions *conv,
                                     uint64_t p,
                                     const int64_t *coeffs,
                                     size_t len,
                                     enum CharsumStrategy strategy,
                                     struct CharsumSum *out);

// Character sum of a named family (`f1`, `g19`, `legendre`, `newton`,
// `edwards`, ...). `params` may be null for the defaults.
//
// # Safety
// `family` must be a nul-terminated string, `out` valid, `params` null or
// valid, and `conv` null or a live handle.
enum CharsumStatus charsum_eval_family(const struct CharsumConventions *conv,
                                       const char *family,
                                       const struct CharsumParams *params,
                                       uint64_t p,
                                       enum CharsumStrategy strategy,
                                       struct CharsumSum *out);

// Points on y^2 = f(x) for a named family.
//
// # Safety
// Same requirements as [`charsum_eval_family`].
enum CharsumStatus charsum_point_count(const struct CharsumConventions *conv,
                                       const char *family,
                                       const struct CharsumParams *params,
                                       uint64_t p,
                                       enum CharsumStrategy strategy,
                                       struct CharsumPoints *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHARSUM_H */
