#ifndef BLOCH_LAB_H
#define BLOCH_LAB_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BlStatus {
  BL_STATUS_OK = 0,
  BL_STATUS_NULL_POINTER = 1,
  BL_STATUS_INVALID_UTF8 = 2,
  /**
   * A point, exponent, dimension or other argument out of range.
   */
  BL_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Malformed JSON or descriptor.
   */
  BL_STATUS_DESCRIPTOR = 4,
  BL_STATUS_NOT_ISOMETRY = 5,
  BL_STATUS_NOT_REFLECTION = 6,
  BL_STATUS_NOT_IN_B0 = 7,
  BL_STATUS_UNKNOWN_SUITE = 8,
  BL_STATUS_CONFIG = 9,
  BL_STATUS_UNSUPPORTED = 10,
  BL_STATUS_PANIC = 11,
} BlStatus;

typedef struct BlFlow BlFlow;

typedef struct BlFunction BlFunction;

typedef struct BlMobius BlMobius;

typedef struct BlOperator BlOperator;

typedef struct BlSpace BlSpace;

/**
 * Search grid for norm estimates.
 */
typedef struct BlGrid {
  size_t n_radii;
  size_t n_angles;
  size_t refinement_rounds;
} BlGrid;

typedef struct BlComplex {
  double re;
  double im;
} BlComplex;

typedef struct BlNormEstimate {
  double value;
  struct BlComplex argmax;
  double uncertainty;
} BlNormEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *bl_status_message(enum BlStatus status);

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *bl_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void bl_string_free(char *s);

struct BlGrid bl_grid_default(void);

/**
 * `C^d` with the `p`-norm.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum BlStatus bl_space_new(size_t d, double p, struct BlSpace **out);

/**
 * # Safety
 * `s` must be NULL or a live handle.
 */
void bl_space_free(struct BlSpace *s);

/**
 * # Safety
 * `s` must be a live handle; `v` must point to `len` values.
 */
enum BlStatus bl_space_norm(const struct BlSpace *s,
                            const struct BlComplex *v,
                            size_t len,
                            double *out);

/**
 * Parses a function descriptor.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` valid for writes.
 */
enum BlStatus bl_function_from_json(const char *json, struct BlFunction **out);

/**
 * # Safety
 * `f` must be a live handle; `out` valid for writes.
 */
enum BlStatus bl_function_to_json(const struct BlFunction *f, char **out);

/**
 * # Safety
 * `f` must be NULL or a live handle.
 */
void bl_function_free(struct BlFunction *f);

/**
 * Range dimension, or 0 for NULL.
 *
 * # Safety
 * `f` must be NULL or a live handle.
 */
size_t bl_function_dim(const struct BlFunction *f);

/**
 * Writes `f(z)` into `out[0..len]`; `len` must equal the dimension.
 *
 * # Safety
 * `f` must be a live handle; `out` valid for `len` writes.
 */
enum BlStatus bl_function_eval(const struct BlFunction *f,
                               struct BlComplex z,
                               struct BlComplex *out,
                               size_t len);

/**
 * Bloch seminorm `sup (1-|z|^2) ||f'(z)||`. A NULL grid uses the defaults.
 *
 * # Safety
 * `s`, `f` must be live handles; `grid` NULL or valid; `out` valid for writes.
 */
enum BlStatus bl_seminorm(const struct BlSpace *s,
                          const struct BlFunction *f,
                          const struct BlGrid *grid,
                          struct BlNormEstimate *out);

/**
 * `||f(0)|| + ` the seminorm.
 *
 * # Safety
 * As for [`bl_seminorm`].
 */
enum BlStatus bl_norm_star(const struct BlSpace *s,
                           const struct BlFunction *f,
                           const struct BlGrid *grid,
                           struct BlNormEstimate *out);

/**
 * `z -> λ (z - a) / (1 - conj(a) z)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum BlStatus bl_mobius_new(struct BlComplex lambda, struct BlComplex a, struct BlMobius **out);

/**
 * # Safety
 * `m` must be NULL or a live handle.
 */
void bl_mobius_free(struct BlMobius *m);

/**
 * # Safety
 * `m` must be a live handle; `out` valid for writes.
 */
enum BlStatus bl_mobius_map(const struct BlMobius *m, struct BlComplex z, struct BlComplex *out);

/**
 * # Safety
 * `m` must be a live handle; `out` valid for writes.
 */
enum BlStatus bl_mobius_derivative(const struct BlMobius *m,
                                   struct BlComplex z,
                                   struct BlComplex *out);

/**
 * `a ∘ b`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` valid for writes.
 */
enum BlStatus bl_mobius_compose(const struct BlMobius *a,
                                const struct BlMobius *b,
                                struct BlMobius **out);

/**
 * # Safety
 * `m` must be a live handle; `out` valid for writes.
 */
enum BlStatus bl_mobius_inverse(const struct BlMobius *m, struct BlMobius **out);

/**
 * Recovers `(λ, a)`.
 *
 * # Safety
 * `m` must be a live handle; outputs valid for writes.
 */
enum BlStatus bl_mobius_canonical(const struct BlMobius *m,
                                  struct BlComplex *lambda,
                                  struct BlComplex *a);

/**
 * Matrix distance, minimised over the sign ambiguity.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` valid for writes.
 */
enum BlStatus bl_mobius_distance(const struct BlMobius *a, const struct BlMobius *b, double *out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` valid for writes.
 */
enum BlStatus bl_flow_from_json(const char *json, struct BlFlow **out);

/**
 * # Safety
 * `f` must be NULL or a live handle.
 */
void bl_flow_free(struct BlFlow *f);

/**
 * The member `φ_t` of the flow.
 *
 * # Safety
 * `f` must be a live handle; `out` valid for writes.
 */
enum BlStatus bl_flow_at(const struct BlFlow *f, double t, struct BlMobius **out);

/**
 * Builds and certifies an operator from its descriptor over `s`. Group
 * descriptors yield the hermitian generator.
 *
 * # Safety
 * `s` must be a live handle; `json` NUL-terminated; `out` valid for writes.
 */
enum BlStatus bl_operator_from_json(const struct BlSpace *s,
                                    const char *json,
                                    struct BlOperator **out);

/**
 * # Safety
 * `op` must be NULL or a live handle.
 */
void bl_operator_free(struct BlOperator *op);

/**
 * # Safety
 * `op`, `f` must be live handles; `out` valid for writes.
 */
enum BlStatus bl_operator_apply(const struct BlOperator *op,
                                const struct BlFunction *f,
                                struct BlFunction **out);

/**
 * Runs a suite and returns its JSON-lines report. `config_json` may be NULL
 * for the defaults. A suite whose checks fail still returns `Ok`; the
 * outcome is in `all_passed`.
 *
 * # Safety
 * `suite` must be NUL-terminated; `config_json` NULL or NUL-terminated;
 * outputs valid for writes.
 */
enum BlStatus bl_run_suite(const char *config_json,
                           const char *suite,
                           char **out_jsonl,
                           bool *all_passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCH_LAB_H */
