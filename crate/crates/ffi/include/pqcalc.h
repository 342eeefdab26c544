#ifndef PQCALC_H
#define PQCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PqStatus {
  PQ_STATUS_OK = 0,
  PQ_STATUS_NULL_POINTER = 1,
  PQ_STATUS_INVALID_ARGUMENT = 2,
  PQ_STATUS_PARSE_ERROR = 3,
  PQ_STATUS_UNDEFINED = 4,
  PQ_STATUS_NON_CONVERGENCE = 5,
  PQ_STATUS_IDENTITY_FAILED = 6,
  PQ_STATUS_INTERNAL = 7,
  PQ_STATUS_PANIC = 8,
} PqStatus;

typedef struct PqOperator PqOperator;

typedef struct PqPolynomial PqPolynomial;

typedef struct PqStirlingTable PqStirlingTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pq_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void pq_string_free(char *s);

/**
 * `[n]_{p,q}` as a new polynomial handle.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PqStatus pq_number_new(int64_t n, struct PqPolynomial **out);

/**
 * # Safety
 * `poly` must be NULL or a handle from this library, not yet freed.
 */
void pq_polynomial_free(struct PqPolynomial *poly);

/**
 * Polynomial as a JSON array of term records.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum PqStatus pq_polynomial_to_json(const struct PqPolynomial *poly, char **out);

/**
 * Evaluates at floating-point `(p, q, h, x)`.
 *
 * # Safety
 * `poly` must be a live handle and `out` a valid pointer.
 */
enum PqStatus pq_polynomial_eval(const struct PqPolynomial *poly,
                                 double p,
                                 double q,
                                 double h,
                                 double x,
                                 double *out);

/**
 * Normal-orders an operator word such as `"(X^2 D)^3"`.
 *
 * # Safety
 * `word` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PqStatus pq_normal_order(const char *word, struct PqOperator **out);

/**
 * # Safety
 * `op` must be NULL or a handle from this library, not yet freed.
 */
void pq_operator_free(struct PqOperator *op);

/**
 * Number of normal-ordered terms.
 *
 * # Safety
 * `op` must be a live handle and `out` a valid pointer.
 */
enum PqStatus pq_operator_len(const struct PqOperator *op, size_t *out);

/**
 * `{"terms": [{"x", "N", "D", "coeff"}]}`.
 *
 * # Safety
 * `op` must be a live handle and `out` a valid pointer.
 */
enum PqStatus pq_operator_to_json(const struct PqOperator *op, char **out);

/**
 * Builds a Stirling table. `variant_json` is e.g.
 * `{"kind": "general", "s": 1, "h": "symbolic"}` or
 * `{"kind": "touchard", "m": 2, "tilde": true}`.
 *
 * # Safety
 * `variant_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PqStatus pq_stirling_table_new(const char *variant_json,
                                    size_t max_n,
                                    struct PqStirlingTable **out);

/**
 * # Safety
 * `table` must be NULL or a handle from this library, not yet freed.
 */
void pq_stirling_table_free(struct PqStirlingTable *table);

/**
 * Entry `(n, k)` as a new polynomial handle; the table grows as needed.
 *
 * # Safety
 * `table` must be a live handle and `out` a valid pointer.
 */
enum PqStatus pq_stirling_table_entry(struct PqStirlingTable *table,
                                      size_t n,
                                      size_t k,
                                      struct PqPolynomial **out);

/**
 * `{"variant": ..., "rows": [[polynomial]]}`.
 *
 * # Safety
 * `table` must be a live handle and `out` a valid pointer.
 */
enum PqStatus pq_stirling_table_to_json(const struct PqStirlingTable *table, char **out);

/**
 * Touchard polynomial of real order `m` at real `(p, q, x)`. `digits`
 * selects decimal arithmetic; 0 means double precision.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PqStatus pq_touchard(uint32_t n,
                          double m,
                          double p,
                          double q,
                          double x,
                          uint32_t digits,
                          double tol,
                          double *out);

/**
 * Dobinski series for the tilde Bell polynomial; arguments as for
 * [`pq_touchard`].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PqStatus pq_dobinski(uint32_t n,
                          double m,
                          double p,
                          double q,
                          double x,
                          uint32_t digits,
                          double tol,
                          double *out);

/**
 * Runs a named identity check and writes the JSON report to
 * `report_out` (may be NULL). Returns `PQ_STATUS_IDENTITY_FAILED` when
 * the verdict is not a pass.
 *
 * # Safety
 * `identity` must be a NUL-terminated string; `report_out` NULL or valid.
 */
enum PqStatus pq_verify(const char *identity,
                        uint64_t seed,
                        size_t points,
                        double tol,
                        char **report_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PQCALC_H */
