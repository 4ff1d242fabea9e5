#ifndef GIELAB_H
#define GIELAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GielabStatus {
  GIELAB_STATUS_OK = 0,
  GIELAB_STATUS_INVALID_INPUT = 1,
  GIELAB_STATUS_UNPHYSICAL = 2,
  GIELAB_STATUS_WRONG_FAMILY = 3,
  GIELAB_STATUS_SHAPE_MISMATCH = 4,
  GIELAB_STATUS_DOMAIN_NOT_COVERED = 5,
  GIELAB_STATUS_NOT_SYMPLECTIC = 6,
  GIELAB_STATUS_NUMERICAL_DEGENERACY = 7,
  GIELAB_STATUS_NO_CONVERGENCE = 8,
  GIELAB_STATUS_IO = 9,
  GIELAB_STATUS_NULL_POINTER = 10,
  GIELAB_STATUS_PANIC = 11,
} GielabStatus;

/**
 * Outcome of the numerical optimization over Eve's measurements.
 */
typedef struct GielabResult GielabResult;

/**
 * A validated two-mode Gaussian state.
 */
typedef struct GielabState GielabState;

/**
 * Standard-form parameters of a two-mode covariance matrix.
 */
typedef struct GielabStdForm {
  double a;
  double b;
  double kx;
  double kp;
} GielabStdForm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Two-mode squeezed vacuum with local variance `a`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GielabStatus gielab_state_pure(double a, struct GielabState **out);

/**
 * Symmetric state with one unit symplectic eigenvalue.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GielabStatus gielab_state_sym_glems(double a, double kp, struct GielabState **out);

/**
 * Symmetric squeezed thermal state with `kx = kp = k`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GielabStatus gielab_state_sym_sq_thermal(double a, double k, struct GielabState **out);

/**
 * Asymmetric state with one unit symplectic eigenvalue.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GielabStatus gielab_state_asym_glems(double a, double b, struct GielabState **out);

/**
 * Two-mode reduction of the three-mode GHZ state with squeezing `r`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GielabStatus gielab_state_cv_ghz(double r, struct GielabState **out);

/**
 * Any physical standard form.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GielabStatus gielab_state_generic(double a,
                                       double b,
                                       double kx,
                                       double kp,
                                       struct GielabState **out);

/**
 * # Safety
 * `state` must be null or a handle from a `gielab_state_*` constructor that
 * has not been freed.
 */
void gielab_state_free(struct GielabState *state);

/**
 * # Safety
 * `state` must be a live handle and `out` valid for one write.
 */
enum GielabStatus gielab_state_std_form(const struct GielabState *state, struct GielabStdForm *out);

/**
 * Closed-form GIE in nats. `verified` is set to whether the point lies in a
 * proven domain. Fails with `DomainNotCovered` when no closed form exists.
 *
 * # Safety
 * `state` must be a live handle; `value` and `verified` valid for one write.
 */
enum GielabStatus gielab_gie_closed_form(const struct GielabState *state,
                                         double *value,
                                         bool *verified);

/**
 * Gaussian Rényi-2 entanglement in nats.
 *
 * # Safety
 * `state` must be a live handle and `value` valid for one write.
 */
enum GielabStatus gielab_gr2(const struct GielabState *state, double *value);

/**
 * Runs the optimization over Eve's measurements. `grid` is the number of
 * coarse grid points per parameter; 0 keeps the default.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for one write. The handle
 * written to `out` must be released with [`gielab_result_free`].
 */
enum GielabStatus gielab_gie_numeric(const struct GielabState *state,
                                     uint32_t grid,
                                     struct GielabResult **out);

/**
 * Minimized conditional mutual information in nats; NaN for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
double gielab_result_value(const struct GielabResult *result);

/**
 * `|numeric - closed form|`, or NaN when there is no closed form.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
double gielab_result_discrepancy(const struct GielabResult *result);

/**
 * Copies a description of Eve's optimal measurement into `buf` as a
 * NUL-terminated UTF-8 string, truncated to `len` bytes. Returns the length
 * needed without the terminator.
 *
 * # Safety
 * `result` must be null or a live handle; `buf` null or valid for `len` bytes.
 */
size_t gielab_result_eve_optimum(const struct GielabResult *result, char *buf, size_t len);

/**
 * # Safety
 * `result` must be null or a handle from [`gielab_gie_numeric`] that has not
 * been freed.
 */
void gielab_result_free(struct GielabResult *result);

/**
 * Message of the last failed call on this thread, copied like
 * [`gielab_result_eve_optimum`]. Empty after a successful call.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t gielab_last_error(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GIELAB_H */
