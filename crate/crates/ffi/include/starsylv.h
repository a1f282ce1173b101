#ifndef STARSYLV_H
#define STARSYLV_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. `SS_STATUS_INCONSISTENT` and `SS_STATUS_REJECTED` are
 * verdicts, not failures, and leave the last error message untouched.
 */
typedef enum SsStatus {
  SS_STATUS_OK = 0,
  SS_STATUS_INCONSISTENT = 1,
  SS_STATUS_REJECTED = 2,
  SS_STATUS_NULL_POINTER = 3,
  SS_STATUS_INVALID_UTF8 = 4,
  SS_STATUS_SYNTAX = 5,
  SS_STATUS_SHAPE_MISMATCH = 6,
  SS_STATUS_INVALID_STAR_MODE = 7,
  SS_STATUS_INVALID_MODULUS = 8,
  SS_STATUS_CHAR2_REJECTED = 9,
  SS_STATUS_CHAR2_UNSUPPORTED = 10,
  SS_STATUS_NOT_A_SOLUTION = 11,
  SS_STATUS_INVALID_WITNESS = 12,
  SS_STATUS_FIELD_MISMATCH = 13,
  SS_STATUS_DIVISION_BY_ZERO = 14,
  SS_STATUS_OTHER_ERROR = 15,
  SS_STATUS_INTERNAL = 16,
} SsStatus;

/**
 * A matrix over the field of the system it was created for.
 */
typedef struct SsMatrix SsMatrix;

/**
 * A parsed or generated system.
 */
typedef struct SsSystem SsSystem;

/**
 * Result of [`ss_check_claims`]. Tri-state fields hold -1 when the claim
 * was not decided (no witness supplied), else 0 or 1.
 */
typedef struct SsClaimReport {
  size_t dim_d;
  size_t dim_d0;
  size_t dim_ker_phi_d;
  size_t dim_im_phi_d;
  size_t dim_ker_phi_d0;
  size_t dim_im_phi_d0;
  bool rank_nullity_ok;
  int8_t claim_i;
  bool claim_ii;
  bool claim_iii;
  bool claim_iv;
  bool target_in_image_d;
  int8_t twist_ok;
  bool realified;
} SsClaimReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse the system file format. `allow_char2` admits `field GF 2`.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum SsStatus ss_system_parse(const char *text, bool allow_char2, struct SsSystem **out);

/**
 * # Safety
 * `sys` must come from this library and not be used afterwards. Null is ignored.
 */
void ss_system_free(struct SsSystem *sys);

/**
 * Serialize to the system file format.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum SsStatus ss_system_to_text(const struct SsSystem *sys, char **out);

/**
 * `m`, `n` and the number of equations. Null outputs are skipped.
 *
 * # Safety
 * `sys` must be a live handle.
 */
enum SsStatus ss_system_dims(const struct SsSystem *sys, size_t *m, size_t *n, size_t *ell);

/**
 * Parse a `matrix <rows> <cols>` block over the field of `sys`.
 *
 * # Safety
 * `sys` must be a live handle, `text` nul-terminated, `out` writable.
 */
enum SsStatus ss_matrix_parse(const struct SsSystem *sys, const char *text, struct SsMatrix **out);

/**
 * # Safety
 * `m` must come from this library and not be used afterwards. Null is ignored.
 */
void ss_matrix_free(struct SsMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum SsStatus ss_matrix_to_text(const struct SsMatrix *m, char **out);

/**
 * # Safety
 * `m` must be a live handle.
 */
enum SsStatus ss_matrix_dims(const struct SsMatrix *m, size_t *rows, size_t *cols);

/**
 * Direct solve. `SS_STATUS_OK` with a particular solution and the
 * homogeneous dimension, or `SS_STATUS_INCONSISTENT`. Null outputs are skipped.
 *
 * # Safety
 * `sys` must be a live handle.
 */
enum SsStatus ss_solve(const struct SsSystem *sys, struct SsMatrix **out_x, size_t *out_dim);

/**
 * Solution recovered from the pair space, or `SS_STATUS_INCONSISTENT`.
 *
 * # Safety
 * `sys` must be a live handle.
 */
enum SsStatus ss_extract(const struct SsSystem *sys, struct SsMatrix **out_x);

/**
 * Congruence witness `S` built from a solution `x`.
 *
 * # Safety
 * `sys` and `x` must be live handles; `out_s` must be writable.
 */
enum SsStatus ss_witness(const struct SsSystem *sys,
                         const struct SsMatrix *x,
                         struct SsMatrix **out_s);

/**
 * `SS_STATUS_OK` when `s` is invertible and satisfies every congruence,
 * `SS_STATUS_REJECTED` otherwise.
 *
 * # Safety
 * `sys` and `s` must be live handles.
 */
enum SsStatus ss_verify(const struct SsSystem *sys, const struct SsMatrix *s);

/**
 * Pair-space dimensions and claims. `s` may be null; if given it must be
 * a valid witness.
 *
 * # Safety
 * `sys` must be a live handle, `s` null or live, `out` writable.
 */
enum SsStatus ss_check_claims(const struct SsSystem *sys,
                              const struct SsMatrix *s,
                              struct SsClaimReport *out);

/**
 * Seeded generator. `field` is `"Q"`, `"QI"` or `"GF <p>"`, `star` is
 * `"T"` or `"H"`. With `perturb`, `C_1` is perturbed and `out_x` must be
 * null; otherwise the planted solution is written to `out_x` if non-null.
 *
 * # Safety
 * `field` and `star` must be nul-terminated; `out_sys` writable.
 */
enum SsStatus ss_gen(const char *field,
                     const char *star,
                     size_t m,
                     size_t n,
                     size_t ell,
                     uint64_t seed,
                     uint32_t entry_bound,
                     bool perturb,
                     bool allow_char2,
                     struct SsSystem **out_sys,
                     struct SsMatrix **out_x);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void ss_string_free(char *s);

/**
 * Message of the last failure on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *ss_last_error_message(void);

/**
 * Library version, static storage.
 */
const char *ss_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STARSYLV_H */
