#ifndef PAIRFRAME_H
#define PAIRFRAME_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes. Values 2, 3 and 4 match the CLI exit codes.
 */
typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_INVALID_ARGUMENT = 1,
  PF_STATUS_FORMAT = 2,
  PF_STATUS_DIMENSION_MISMATCH = 3,
  PF_STATUS_NOT_INVERTIBLE = 4,
  PF_STATUS_NULL_POINTER = 5,
  PF_STATUS_INTERNAL = 6,
} PfStatus;

/*
 Opaque operator family.
 */
typedef struct PfFamily PfFamily;

/*
 Opaque pair system `(m, gamma, lambda)`.
 */
typedef struct PfPair PfPair;

typedef struct PfComplex {
  double re;
  double im;
} PfComplex;

typedef struct PfFrameReport {
  bool is_bessel;
  bool is_frame;
  bool is_tight;
  double lower;
  double upper;
  /*
   `1/B` for frames, NaN otherwise.
   */
  double alpha_star;
  /*
   `|I - S/B|` for frames, NaN otherwise.
   */
  double residual;
  bool cert_contraction;
  bool cert_invertible;
  bool cert_surjective;
} PfFrameReport;

typedef struct PfPairReport {
  bool is_pair_frame;
  double sigma_min;
  double op_norm;
  /*
   Infinity when the multiplier is singular.
   */
  double condition_number;
  double framelike_lower;
  double framelike_upper;
  double adjoint_residual;
} PfPairReport;

typedef struct PfNearIdentity {
  struct PfComplex alpha;
  double residual;
  bool is_near_identity;
  bool is_positive_variant;
} PfNearIdentity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until the
 next failing call on the same thread.
 */
const char *pf_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *pf_version(void);

/*
 Ordinary frame from `count` vectors of length `dim`, stored row-major in
 `vectors` (`count * dim` entries).

 # Safety
 `vectors` must point to `count * dim` readable entries; `out` must be writable.
 */
enum PfStatus pf_family_from_vectors(size_t dim,
                                     size_t count,
                                     const struct PfComplex *vectors,
                                     struct PfFamily **out);

/*
 Family of `count` operators; member `i` is `rows[i] x dim`, all members
 concatenated row-major in `data`.

 # Safety
 `rows` must hold `count` entries and `data` `sum(rows) * dim` entries.
 */
enum PfStatus pf_family_from_operators(size_t dim,
                                       size_t count,
                                       const size_t *rows,
                                       const struct PfComplex *data,
                                       struct PfFamily **out);

/*
 Family from the text of a frame file (the `gamma` and `weights` fields are
 ignored).

 # Safety
 `json` must be a valid NUL-terminated string.
 */
enum PfStatus pf_family_from_json(const char *json, struct PfFamily **out);

/*
 Generated fixture family; `kind` is a generator name such as `"mercedes"`.

 # Safety
 `kind` must be a NUL-terminated string; `params` must hold `n_params` entries.
 */
enum PfStatus pf_family_generate(const char *kind,
                                 size_t dim,
                                 size_t count,
                                 uint64_t seed,
                                 const double *params,
                                 size_t n_params,
                                 struct PfFamily **out);

/*
 # Safety
 `family` must be null or a handle from this library not yet freed.
 */
void pf_family_free(struct PfFamily *family);

/*
 Ambient dimension, or 0 for a null handle.

 # Safety
 `family` must be null or a live handle.
 */
size_t pf_family_dim(const struct PfFamily *family);

/*
 Member count, or 0 for a null handle.

 # Safety
 `family` must be null or a live handle.
 */
size_t pf_family_len(const struct PfFamily *family);

/*
 Writes the `dim x dim` frame operator row-major into `buf` (`len` must be `dim * dim`).

 # Safety
 `family` must be live; `buf` must hold `len` writable entries.
 */
enum PfStatus pf_frame_operator(const struct PfFamily *family, struct PfComplex *buf, size_t len);

/*
 # Safety
 `family` must be live; `out` writable.
 */
enum PfStatus pf_frame_classify(const struct PfFamily *family,
                                double tol,
                                struct PfFrameReport *out);

/*
 Canonical dual family; fails with `NOT_INVERTIBLE` for non-frames.

 # Safety
 `family` must be live; `out` writable.
 */
enum PfStatus pf_canonical_dual(const struct PfFamily *family, double tol, struct PfFamily **out);

/*
 Pair system from two families and optional weights (`weights` may be null
 for all ones; otherwise it holds one entry per member). The families are
 copied; the caller keeps ownership of its handles.

 # Safety
 `gamma` and `lambda` must be live; `weights` null or `len(lambda)` entries.
 */
enum PfStatus pf_pair_new(const struct PfFamily *gamma,
                          const struct PfFamily *lambda,
                          const struct PfComplex *weights,
                          struct PfPair **out);

/*
 # Safety
 `pair` must be null or a live handle.
 */
void pf_pair_free(struct PfPair *pair);

/*
 Writes the multiplier `S` row-major into `buf` (`len` must be `dim * dim`).

 # Safety
 `pair` must be live; `buf` must hold `len` writable entries.
 */
enum PfStatus pf_pair_operator(const struct PfPair *pair, struct PfComplex *buf, size_t len);

/*
 # Safety
 `pair` must be live; `out` writable.
 */
enum PfStatus pf_pair_classify(const struct PfPair *pair,
                               double tol,
                               size_t theta_steps,
                               struct PfPairReport *out);

/*
 Best scalar `alpha` for `|I - alpha S|` with default search settings.

 # Safety
 `pair` must be live; `out` writable.
 */
enum PfStatus pf_find_alpha(const struct PfPair *pair, struct PfNearIdentity *out);

/*
 Fills `errors[N] = |I - J_N|` and `bounds[N] = |I - alpha S|^{N+1}` for
 `N = 0..len`.

 # Safety
 `pair` must be live; `errors` and `bounds` must hold `len` writable entries.
 */
enum PfStatus pf_neumann_trace(const struct PfPair *pair,
                               struct PfComplex alpha,
                               double *errors,
                               double *bounds,
                               size_t len);

/*
 Neumann reconstruction of `signal` at truncation order `order`; writes
 the approximation into `approx` and the relative error into `rel_error`.

 # Safety
 `pair` must be live; `signal` and `approx` must hold `dim` entries.
 */
enum PfStatus pf_reconstruct(const struct PfPair *pair,
                             struct PfComplex alpha,
                             size_t order,
                             const struct PfComplex *signal,
                             struct PfComplex *approx,
                             double *rel_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PAIRFRAME_H */
