#ifndef WLAB_H
#define WLAB_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes of every fallible call.
 */
typedef enum WlabStatus {
  WLAB_STATUS_OK = 0,
  WLAB_STATUS_NULL_POINTER = 1,
  WLAB_STATUS_INVALID_UTF8 = 2,
  WLAB_STATUS_PARSE = 3,
  WLAB_STATUS_JSON = 4,
  WLAB_STATUS_DIMENSION = 5,
  WLAB_STATUS_DEGREE = 6,
  WLAB_STATUS_INDEX = 7,
  WLAB_STATUS_NOT_SELF_DUAL = 8,
  WLAB_STATUS_INVALID_ARGUMENT = 9,
  WLAB_STATUS_NUMERICAL = 10,
  WLAB_STATUS_PANIC = 11,
} WlabStatus;

/**
 * Opaque handle to a form with exact or float coefficients.
 */
typedef struct WlabForm WlabForm;

/**
 * Optimizer settings. Zero fields fall back to the library defaults.
 */
typedef struct WlabOptions {
  size_t restarts;
  size_t max_iters;
  double grad_tol;
  uint64_t seed;
} WlabOptions;

/**
 * Output of [`wlab_reduce`].
 */
typedef struct WlabReduction {
  /**
   * Coordinates in the Cartan basis `h_1..h_7`.
   */
  double coords[7];
  /**
   * Rotation `k`, row-major.
   */
  double rotation[64];
  double gradient_residual;
  bool converged;
} WlabReduction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an expression over R^8, with exact rational coefficients when
 * `exact` is true and doubles otherwise.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum WlabStatus wlab_form_parse(const char *text, bool exact, struct WlabForm **out);

/**
 * Reads a form from its JSON interchange text.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum WlabStatus wlab_form_from_json(const char *json, struct WlabForm **out);

/**
 * Writes the JSON text of `form`; release it with [`wlab_string_free`].
 *
 * # Safety
 * `form` must be a live handle and `out` a valid pointer.
 */
enum WlabStatus wlab_form_to_json(const struct WlabForm *form, char **out);

/**
 * Ambient dimension and degree of `form`.
 *
 * # Safety
 * `form` must be a live handle; `n` and `k` valid pointers.
 */
enum WlabStatus wlab_form_shape(const struct WlabForm *form, size_t *n, size_t *k);

/**
 * `a ∧ b`. Exact when both inputs are exact.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` a valid pointer.
 */
enum WlabStatus wlab_form_wedge(const struct WlabForm *a,
                                const struct WlabForm *b,
                                struct WlabForm **out);

/**
 * Hodge star with respect to the standard orientation.
 *
 * # Safety
 * `form` must be a live handle and `out` a valid pointer.
 */
enum WlabStatus wlab_form_hodge_star(const struct WlabForm *form, struct WlabForm **out);

/**
 * Sum of squared coefficients in the orthonormal monomial basis.
 *
 * # Safety
 * `form` must be a live handle and `out` a valid pointer.
 */
enum WlabStatus wlab_form_norm_sq(const struct WlabForm *form, double *out);

/**
 * Comass of `form`: exact for 2-forms, otherwise the best value found by
 * multi-start ascent (a lower bound). `opts` may be null.
 *
 * # Safety
 * `form` must be a live handle, `opts` null or valid, `out` valid.
 */
enum WlabStatus wlab_comass(const struct WlabForm *form,
                            const struct WlabOptions *opts,
                            double *out);

/**
 * Rotates a self-dual 4-form on R^8 into the Cartan subspace.
 *
 * # Safety
 * `form` must be a live handle, `opts` null or valid, `out` valid.
 */
enum WlabStatus wlab_reduce(const struct WlabForm *form,
                            const struct WlabOptions *opts,
                            struct WlabReduction *out);

/**
 * Wirtinger constant for `n` = 2 or 4: the supremum of
 * `|w ∧ w| / comass(w)²` over forms of degree `n` on R^(2n).
 *
 * # Safety
 * `opts` must be null or valid, `out` valid.
 */
enum WlabStatus wlab_wirtinger(size_t n, const struct WlabOptions *opts, double *out);

/**
 * Releases a form handle. Null is ignored.
 *
 * # Safety
 * `form` must be null or a handle not yet freed.
 */
void wlab_form_free(struct WlabForm *form);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void wlab_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *wlab_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WLAB_H */
