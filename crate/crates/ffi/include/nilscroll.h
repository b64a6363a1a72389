/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef NILSCROLL_H
#define NILSCROLL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum NsStatus {
  NS_STATUS_OK = 0,
  NS_STATUS_NULL_POINTER = 1,
  NS_STATUS_INVALID_ARGUMENT = 2,
  NS_STATUS_UNKNOWN_NAME = 3,
  NS_STATUS_NO_ROOT = 4,
  NS_STATUS_NOT_INVERTIBLE = 5,
  NS_STATUS_DEGENERATE = 6,
  NS_STATUS_NOT_LORENTZ = 7,
  NS_STATUS_CONSTRUCTION_FAILED = 8,
  NS_STATUS_IO = 9,
  NS_STATUS_PANIC = 99,
} NsStatus;

/**
 * Opaque scroll handle.
 */
typedef struct NsScroll NsScroll;

/**
 * A point of Nil3 in exponential coordinates.
 */
typedef struct NsPoint {
  double x1;
  double x2;
  double x3;
} NsPoint;

/**
 * A para-complex number `re + i' im` with `i'^2 = 1`.
 */
typedef struct NsParaComplex {
  double re;
  double im;
} NsParaComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a successful call. The
 * pointer stays valid until the next call on the same thread.
 */
const char *ns_last_error(void);

/**
 * Library version as a static string.
 */
const char *ns_version(void);

/**
 * Builds a gallery example (`circle`, `parabola:0`, `vertical-plane:1.2`, ...) through
 * its constructor.
 *
 * # Safety
 * `name` must be a valid C string and `out` a valid pointer.
 */
enum NsStatus ns_example_new(const char *name, struct NsScroll **out);

/**
 * Builds a scroll from a construction request in JSON. `velocity_tolerance <= 0`
 * selects the default.
 *
 * # Safety
 * `request_json` must be a valid C string and `out` a valid pointer.
 */
enum NsStatus ns_construct_json(const char *request_json,
                                double velocity_tolerance,
                                struct NsScroll **out);

/**
 * Releases a scroll; null is accepted.
 *
 * # Safety
 * `scroll` must come from this library and not be used afterwards.
 */
void ns_scroll_free(struct NsScroll *scroll);

/**
 * Parameter interval of the base curve.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NsStatus ns_scroll_span(const struct NsScroll *scroll, double *s0, double *s1);

/**
 * `f(s, t)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NsStatus ns_scroll_eval(const struct NsScroll *scroll,
                             double s,
                             double t,
                             struct NsPoint *out);

/**
 * Closed-form and finite-difference mean curvature at `(s, t)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NsStatus ns_scroll_mean_curvature(const struct NsScroll *scroll,
                                       double s,
                                       double t,
                                       double *closed,
                                       double *fd);

/**
 * Runs the minimality check on a grid and returns the report as JSON.
 *
 * # Safety
 * Pointers must be valid; `*json` must be released with [`ns_string_free`].
 */
enum NsStatus ns_scroll_verify_json(const struct NsScroll *scroll,
                                    double s0,
                                    double s1,
                                    uint32_t ns,
                                    double t0,
                                    double t1,
                                    uint32_t nt,
                                    char **json,
                                    int *passed);

/**
 * Releases a string returned by this library; null is accepted.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ns_string_free(char *s);

struct NsParaComplex ns_pc_mul(struct NsParaComplex a, struct NsParaComplex b);

struct NsParaComplex ns_pc_exp(struct NsParaComplex z);

/**
 * # Safety
 * `out` must be valid.
 */
enum NsStatus ns_pc_inverse(struct NsParaComplex z, struct NsParaComplex *out);

/**
 * Principal square root (both null components non-negative).
 *
 * # Safety
 * `out` must be valid.
 */
enum NsStatus ns_pc_sqrt(struct NsParaComplex z, struct NsParaComplex *out);

/**
 * Group product `p * q`.
 */
struct NsPoint ns_group_mul(struct NsPoint p, struct NsPoint q);

struct NsPoint ns_group_inv(struct NsPoint p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILSCROLL_H */
