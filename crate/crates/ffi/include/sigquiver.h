/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SIGQUIVER_H
#define SIGQUIVER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum SqStatus {
  SQ_STATUS_OK = 0,
  // Null pointer, bad UTF-8, index out of range or malformed input.
  SQ_STATUS_INVALID_ARGUMENT = 1,
  // JSON, CSV or word syntax error.
  SQ_STATUS_PARSE = 2,
  SQ_STATUS_NOT_CLOSED = 3,
  SQ_STATUS_SIMPLE_SIGNATURE = 4,
  SQ_STATUS_DEGENERATE = 5,
  // Word is not a closed path of the quiver.
  SQ_STATUS_NOT_A_PATH = 6,
  SQ_STATUS_IO = 7,
  // Count does not fit the output type.
  SQ_STATUS_OVERFLOW = 8,
  SQ_STATUS_INTERNAL = 9,
  SQ_STATUS_PANIC = 10,
} SqStatus;

// Periodic curvature function.
typedef struct SqCurvature SqCurvature;

// Sampled plane curve.
typedef struct SqCurve SqCurve;

// Signature quiver.
typedef struct SqQuiver SqQuiver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library from the same thread.
const char *sq_last_error(void);

// # Safety
// `s` is null or a string returned by this library, not yet freed.
void sq_string_free(char *s);

// Parses a curvature JSON document.
//
// # Safety
// `json` is a NUL-terminated string; `out` is writable.
enum SqStatus sq_curvature_from_json(const char *json, struct SqCurvature **out);

// Named curvature from the built-in gallery (`cinf1`, `mn`, `cogwheel`, ...).
//
// # Safety
// `name` is a NUL-terminated string; `out` is writable.
enum SqStatus sq_curvature_gallery(const char *name, struct SqCurvature **out);

// # Safety
// `h` is null or a live handle.
void sq_curvature_free(struct SqCurvature *h);

// # Safety
// `h` is a live handle; outputs are writable.
enum SqStatus sq_curvature_eval(const struct SqCurvature *h,
                                double s,
                                double *kappa,
                                double *kappa_dot);

// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_curvature_period(const struct SqCurvature *h, double *out);

// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_curvature_to_json(const struct SqCurvature *h, char **out);

// `m` with `L = mℓ` for a closed curve.
//
// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_symmetry_index(const struct SqCurvature *h, uint32_t *out);

// Congruence of the curves defined by two curvature functions. `reversed`
// compares against the reversed traversal of `b`. `shift` receives the
// parameter shift when congruent, NaN otherwise; it may be null.
//
// # Safety
// `a`, `b` are live handles; `congruent` is writable; `shift` is null or writable.
enum SqStatus sq_congruent(const struct SqCurvature *a,
                           const struct SqCurvature *b,
                           int reversed,
                           int *congruent,
                           double *shift);

// Reconstructs the curve, over `mℓ` when it closes and one period otherwise.
//
// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_curve_reconstruct(const struct SqCurvature *h, struct SqCurve **out);

// Curve through `n` points `xy = [x0, y0, x1, y1, ...]`, parametrized by
// chord length. A closed curve may repeat its first point at the end.
//
// # Safety
// `xy` points to `2n` doubles; `out` is writable.
enum SqStatus sq_curve_from_points(const double *xy, size_t n, int closed, struct SqCurve **out);

// # Safety
// `h` is null or a live handle.
void sq_curve_free(struct SqCurve *h);

// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_curve_sample_count(const struct SqCurve *h, size_t *out);

// Copies up to `cap` samples as `[x0, y0, x1, y1, ...]` into `xy`; `written`
// receives the number of points copied.
//
// # Safety
// `h` is a live handle; `xy` has room for `2 * cap` doubles; `written` is writable.
enum SqStatus sq_curve_points(const struct SqCurve *h, double *xy, size_t cap, size_t *written);

// Curvature and its arc-length derivative at sample `i`.
//
// # Safety
// `h` is a live handle; outputs are writable.
enum SqStatus sq_curve_curvature_at(const struct SqCurve *h,
                                    size_t i,
                                    double *kappa,
                                    double *kappa_dot);

// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_curve_length(const struct SqCurve *h, double *out);

// Endpoint distance divided by length.
//
// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_curve_closure_gap(const struct SqCurve *h, double *out);

// Congruence of two closed sampled curves.
//
// # Safety
// `a`, `b` are live handles; `congruent` is writable.
enum SqStatus sq_curves_congruent(const struct SqCurve *a, const struct SqCurve *b, int *congruent);

// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_quiver_build(const struct SqCurvature *h, struct SqQuiver **out);

// # Safety
// `json` is a NUL-terminated string; `out` is writable.
enum SqStatus sq_quiver_from_json(const char *json, struct SqQuiver **out);

// # Safety
// `h` is null or a live handle.
void sq_quiver_free(struct SqQuiver *h);

// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_quiver_to_json(const struct SqQuiver *h, char **out);

// # Safety
// `h` is a live handle; `out` is writable.
enum SqStatus sq_quiver_to_dot(const struct SqQuiver *h, char **out);

// Relabels edges by `(from, to, ω)`.
//
// # Safety
// `h` is a live handle.
enum SqStatus sq_quiver_canonical_relabel(struct SqQuiver *h);

// # Safety
// `h` is a live handle; outputs are writable.
enum SqStatus sq_quiver_counts(const struct SqQuiver *h, size_t *vertices, size_t *edges);

// Symmetry exponent `m` and signature index `min μ`.
//
// # Safety
// `h` is a live handle; outputs are writable.
enum SqStatus sq_quiver_indices(const struct SqQuiver *h, uint32_t *m, uint32_t *sig_index);

// Edge `i`: its letter, endpoints, multiplicity and weight.
//
// # Safety
// `h` is a live handle; outputs are writable.
enum SqStatus sq_quiver_edge(const struct SqQuiver *h,
                             size_t i,
                             char *label,
                             size_t *from,
                             size_t *to,
                             uint32_t *mu,
                             double *omega);

// Closed paths with the given per-edge multiplicities (`"a=1,b=2"` or
// `"all=1"`), one per rotation class, newline separated. `truncated` is set
// when `max_results` stopped the search; it may be null.
//
// # Safety
// `h` is a live handle; `mult` is a NUL-terminated string; `out` is writable.
enum SqStatus sq_words_enumerate(const struct SqQuiver *h,
                                 const char *mult,
                                 size_t max_results,
                                 char **out,
                                 int *truncated);

// Number of rotation classes, without listing them.
//
// # Safety
// `h` is a live handle; `mult` is a NUL-terminated string; `out` is writable.
enum SqStatus sq_words_count(const struct SqQuiver *h, const char *mult, uint64_t *out);

// Synthesizes the curve of a closed word such as `"(cadb)^6"`. `xi` is used
// when `has_xi` is non-zero, otherwise the quiver's turning number. `report`
// may be null; otherwise it receives a JSON summary.
//
// # Safety
// `h` is a live handle; `word` is a NUL-terminated string; `out` is writable;
// `report` is null or writable.
enum SqStatus sq_synthesize(const struct SqQuiver *h,
                            const char *word,
                            int64_t xi,
                            int has_xi,
                            struct SqCurve **out,
                            char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIGQUIVER_H */
