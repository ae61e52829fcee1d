#ifndef IECOUNT_H
#define IECOUNT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IecStatus {
  IEC_STATUS_OK = 0,
  IEC_STATUS_NULL_POINTER = 1,
  IEC_STATUS_INVALID_UTF8 = 2,
  IEC_STATUS_PARSE_ERROR = 3,
  IEC_STATUS_INVALID_INPUT = 4,
  IEC_STATUS_BUDGET_EXCEEDED = 5,
  IEC_STATUS_INTERNAL = 6,
} IecStatus;

/**
 * A parsed DNF or CNF file.
 */
typedef struct IecFormula IecFormula;

/**
 * A parsed generator file.
 */
typedef struct IecGenerators IecGenerators;

/**
 * A disjoint union of `{0,1,2,n}` rows.
 */
typedef struct IecRowUnion IecRowUnion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread. Owned by the library and
 * valid until the next failing call on the same thread.
 */
const char *iec_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void iec_string_free(char *s);

/**
 * Parses a generator file (`h m` header, then one generator per line).
 *
 * # Safety
 * `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IecStatus iec_generators_parse(const char *text_ptr, struct IecGenerators **out);

/**
 * # Safety
 * `g` must be null or a live handle from [`iec_generators_parse`].
 */
void iec_generators_free(struct IecGenerators *g);

/**
 * Number of elements `h` of the ground set.
 *
 * # Safety
 * `g` must be a live handle.
 */
size_t iec_generators_ground_size(const struct IecGenerators *g);

/**
 * Builds the disjoint row union of all faces containing no generator.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum IecStatus iec_generators_complex(const struct IecGenerators *g, struct IecRowUnion **out);

/**
 * # Safety
 * `u` must be null or a live handle from [`iec_generators_complex`].
 */
void iec_rows_free(struct IecRowUnion *u);

/**
 * Number of rows in the union.
 *
 * # Safety
 * `u` must be a live handle.
 */
size_t iec_rows_len(const struct IecRowUnion *u);

/**
 * Number of `k`-element faces, as a decimal string.
 *
 * # Safety
 * `u` must be a live handle and `out` a valid pointer.
 */
enum IecStatus iec_rows_face_count(const struct IecRowUnion *u, size_t k, char **out);

/**
 * Total number of faces, as a decimal string.
 *
 * # Safety
 * `u` must be a live handle and `out` a valid pointer.
 */
enum IecStatus iec_rows_total(const struct IecRowUnion *u, char **out);

/**
 * The rows in text form, one per line.
 *
 * # Safety
 * `u` must be a live handle and `out` a valid pointer.
 */
enum IecStatus iec_rows_to_string(const struct IecRowUnion *u, char **out);

/**
 * Parses a `p dnf n h` or `p cnf n h` file.
 *
 * # Safety
 * `text_ptr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IecStatus iec_formula_parse(const char *text_ptr, struct IecFormula **out);

/**
 * # Safety
 * `f` must be null or a live handle from [`iec_formula_parse`].
 */
void iec_formula_free(struct IecFormula *f);

/**
 * Number of models, as a decimal string.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum IecStatus iec_formula_model_count(const struct IecFormula *f, char **out);

/**
 * Number of models with exactly `k` true variables.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum IecStatus iec_formula_model_count_k(const struct IecFormula *f, size_t k, char **out);

/**
 * Solutions of `u_1 + .. + u_h = t` with `0 <= u_i < a_i`; `bounds` is a
 * comma-separated list and `target` a decimal integer.
 *
 * # Safety
 * Both strings must be NUL-terminated and `out` a valid pointer.
 */
enum IecStatus iec_count_compositions(const char *bounds, const char *target, char **out);

/**
 * Counts a permutation problem given in the `perm n` / `maps n m` format.
 *
 * # Safety
 * `text_ptr` must be NUL-terminated and `out` a valid pointer.
 */
enum IecStatus iec_count_permutations(const char *text_ptr, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IECOUNT_H */
