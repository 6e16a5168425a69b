#ifndef NODAL_THETA_H
#define NODAL_THETA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. `NT_STATUS_OK` is zero; everything else is an error.
 */
typedef enum nt_status {
  NT_STATUS_OK = 0,
  NT_STATUS_NULL_POINTER = 1,
  NT_STATUS_INVALID_PARAMETER = 2,
  NT_STATUS_NON_CONVERGENT = 3,
  NT_STATUS_POLE = 4,
  NT_STATUS_QUADRATURE = 5,
  /**
   * Shift `c` is non-generic or a contour meets a zero; try another `c`.
   */
  NT_STATUS_DEGENERATE = 6,
  NT_STATUS_NEWTON = 7,
  NT_STATUS_BUFFER_TOO_SMALL = 8,
  NT_STATUS_PANIC = 9,
} nt_status;

/**
 * Opaque curve with its period map.
 */
typedef struct nt_curve nt_curve;

typedef struct nt_complex {
  double re;
  double im;
} nt_complex;

/**
 * Curve parameters. `series_tol` and `series_max_index` control the
 * truncation of the theta series.
 */
typedef struct nt_curve_spec {
  struct nt_complex tau;
  struct nt_complex p1;
  struct nt_complex p2;
  struct nt_complex z0;
  struct nt_complex q0;
  double delta;
  double eps;
  double quad_tol;
  double series_tol;
  size_t series_max_index;
} nt_curve_spec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated).
 * `len` receives the message length without the terminator; it is 0 when
 * the last call succeeded.
 *
 * # Safety
 * `buf` must be writable for `cap` bytes or be NULL with `cap == 0`;
 * `len` must be NULL or valid for writes.
 */
enum nt_status nt_last_error_message(char *buf, size_t cap, size_t *len);

/**
 * `θ[a;b](z, τ)` with the default series policy.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum nt_status nt_theta(double a,
                        double b,
                        struct nt_complex z,
                        struct nt_complex tau,
                        struct nt_complex *out);

/**
 * Validate `spec` and build its period map. The handle must be released
 * with [`nt_curve_free`].
 *
 * # Safety
 * `spec` must point to a valid spec and `out` must be valid for writes.
 */
enum nt_status nt_curve_new(const struct nt_curve_spec *spec, struct nt_curve **out);

/**
 * Release a curve. NULL is ignored.
 *
 * # Safety
 * `curve` must come from [`nt_curve_new`] and not be used afterwards.
 */
void nt_curve_free(struct nt_curve *curve);

/**
 * Real periods `r1`, `r2` of the third-kind differential.
 *
 * # Safety
 * `curve` must be a live handle; `r1`, `r2` valid for writes.
 */
enum nt_status nt_curve_periods(const struct nt_curve *curve, double *r1, double *r2);

/**
 * `φ(P)` on the parallelogram slit along `[p1, p2]`.
 *
 * # Safety
 * `curve` must be a live handle; `phi1`, `phi2` valid for writes.
 */
enum nt_status nt_phi(const struct nt_curve *curve,
                      struct nt_complex p,
                      struct nt_complex *phi1,
                      struct nt_complex *phi2);

/**
 * `Θ(z, w) = θ[0;0](z) + θ[-r1;r2](z)·e(w)` for the curve's periods.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid for writes.
 */
enum nt_status nt_big_theta(const struct nt_curve *curve,
                            struct nt_complex z,
                            struct nt_complex w,
                            struct nt_complex *out);

/**
 * `𝔗_c(P) = Θ(φ(P) - c)`.
 *
 * # Safety
 * `curve` must be a live handle; `out` valid for writes.
 */
enum nt_status nt_frak_t(const struct nt_curve *curve,
                         struct nt_complex c1,
                         struct nt_complex c2,
                         struct nt_complex p,
                         struct nt_complex *out);

/**
 * Number of zeros of `𝔗_c` in the parallelogram.
 *
 * # Safety
 * `curve` must be a live handle; `n` valid for writes.
 */
enum nt_status nt_count_zeros(const struct nt_curve *curve,
                              struct nt_complex c1,
                              struct nt_complex c2,
                              int64_t *n);

/**
 * The two zeros of `𝔗_c`, written to `zeros[0]` and `zeros[1]`.
 *
 * # Safety
 * `curve` must be a live handle; `zeros` valid for two writes.
 */
enum nt_status nt_locate_zeros(const struct nt_curve *curve,
                               struct nt_complex c1,
                               struct nt_complex c2,
                               struct nt_complex *zeros);

/**
 * `κ1` and `κ2(ε)`.
 *
 * # Safety
 * `curve` must be a live handle; `kappa1`, `kappa2` valid for writes.
 */
enum nt_status nt_riemann_constants(const struct nt_curve *curve,
                                    double eps,
                                    struct nt_complex *kappa1,
                                    struct nt_complex *kappa2);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NODAL_THETA_H */
