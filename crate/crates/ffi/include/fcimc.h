#ifndef FCIMC_H
#define FCIMC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcimcStatus {
  FCIMC_STATUS_OK = 0,
  FCIMC_STATUS_NULL_POINTER = 1,
  FCIMC_STATUS_INVALID_UTF8 = 2,
  FCIMC_STATUS_PARSE_ERROR = 3,
  FCIMC_STATUS_INVALID_VALUE = 4,
  FCIMC_STATUS_SIGNATURE_MISMATCH = 5,
  FCIMC_STATUS_FRAGMENT_ERROR = 6,
  FCIMC_STATUS_EVAL_ERROR = 7,
  FCIMC_STATUS_PANIC = 8,
} FcimcStatus;

typedef enum FcimcSignature {
  FCIMC_SIGNATURE_W = 0,
  FCIMC_SIGNATURE_L = 1,
} FcimcSignature;

typedef enum FcimcClass {
  FCIMC_CLASS_QUANTIFIER_FREE = 0,
  FCIMC_CLASS_EXISTENTIAL = 1,
  FCIMC_CLASS_POSITIVE_EXISTENTIAL = 2,
  FCIMC_CLASS_OTHER = 3,
} FcimcClass;

/**
 * Variable bindings for one signature.
 */
typedef struct FcimcAssignment FcimcAssignment;

/**
 * A parsed formula together with its signature.
 */
typedef struct FcimcFormula FcimcFormula;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or the empty string. The
 * pointer stays valid until the next call into this library on the thread.
 */
const char *fcimc_last_error_message(void);

/**
 * Parses `text` in signature `sig` into a new formula handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum FcimcStatus fcimc_parse(const char *text, enum FcimcSignature sig, struct FcimcFormula **out);

/**
 * Releases a formula. Null is ignored.
 *
 * # Safety
 * `f` must come from this library and not be used afterwards.
 */
void fcimc_formula_free(struct FcimcFormula *f);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void fcimc_string_free(char *s);

/**
 * The canonical text of a formula, to be released with [`fcimc_string_free`].
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum FcimcStatus fcimc_formula_print(const struct FcimcFormula *f, char **out);

/**
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum FcimcStatus fcimc_formula_signature(const struct FcimcFormula *f, enum FcimcSignature *out);

/**
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum FcimcStatus fcimc_formula_classify(const struct FcimcFormula *f, enum FcimcClass *out);

/**
 * Positive existential W-formula equivalent to an existential W-formula.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum FcimcStatus fcimc_to_positive_existential(const struct FcimcFormula *f,
                                               struct FcimcFormula **out);

/**
 * Existential L-formula agreeing with a positive existential W-formula on
 * finite sets.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum FcimcStatus fcimc_translate_w_to_l(const struct FcimcFormula *f, struct FcimcFormula **out);

/**
 * W-formula about endpoint pairs equivalent to an L-formula. Each free
 * variable `X` becomes a pair of W-variables; when `coordinates` is not null
 * it receives one line `X X_left X_right` per free variable, to be released
 * with [`fcimc_string_free`].
 *
 * # Safety
 * `f` must be a live handle, `out` writable and `coordinates` null or writable.
 */
enum FcimcStatus fcimc_translate_l_to_w(const struct FcimcFormula *f,
                                        struct FcimcFormula **out,
                                        char **coordinates);

/**
 * Existential L-formula equivalent to an L-formula in the supported
 * fragment; `FCIMC_STATUS_FRAGMENT_ERROR` otherwise.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum FcimcStatus fcimc_pipeline(const struct FcimcFormula *f, struct FcimcFormula **out);

/**
 * An empty assignment for signature `sig`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FcimcStatus fcimc_assignment_new(enum FcimcSignature sig, struct FcimcAssignment **out);

/**
 * Binds `var` to the set written `value` (`{0, 1/2}` for finite sets,
 * `[0,1]+{2}+[3,*)` or `empty` for interval unions).
 *
 * # Safety
 * `a` must be a live handle; `var` and `value` NUL-terminated strings.
 */
enum FcimcStatus fcimc_assignment_bind(struct FcimcAssignment *a,
                                       const char *var,
                                       const char *value);

/**
 * Releases an assignment. Null is ignored.
 *
 * # Safety
 * `a` must come from this library and not be used afterwards.
 */
void fcimc_assignment_free(struct FcimcAssignment *a);

/**
 * Truth of `f` under `a`, quantifiers ranging over the default witness pool.
 *
 * # Safety
 * `f` and `a` must be live handles and `out` writable.
 */
enum FcimcStatus fcimc_eval(const struct FcimcFormula *f,
                            const struct FcimcAssignment *a,
                            bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FCIMC_H */
