#ifndef CAUSAL_QUERY_H
#define CAUSAL_QUERY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CqStatus {
  CQ_STATUS_OK = 0,
  CQ_STATUS_NULL_POINTER = 1,
  CQ_STATUS_INVALID_UTF8 = 2,
  CQ_STATUS_INVALID_ARGUMENT = 3,
  CQ_STATUS_PARSE = 4,
  CQ_STATUS_BUDGET_EXCEEDED = 5,
  CQ_STATUS_IO = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  CQ_STATUS_INTERNAL = 7,
} CqStatus;

/**
 * Boolean function handle.
 */
typedef struct CqFunction CqFunction;

/**
 * Table-backed process function handle.
 */
typedef struct CqProcess CqProcess;

typedef struct CqMeasures {
  size_t arity;
  /**
   * Fourier (multilinear) degree.
   */
  size_t degree;
  size_t certificate;
  /**
   * Deterministic decision-tree depth.
   */
  size_t depth;
} CqMeasures;

typedef struct CqQuantumOutcome {
  bool bit;
  double probability;
  double purity;
} CqQuantumOutcome;

typedef struct CqSdpReport {
  bool feasible;
  double epsilon;
  double max_residual;
  double min_eigenvalue;
} CqSdpReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * The caller frees it with [`cq_string_free`].
 */
char *cq_last_error_message(void);

/**
 * # Safety
 * `s` is null or a string returned by this library that was not yet freed.
 */
void cq_string_free(char *s);

/**
 * Library version as a static string; do not free.
 */
const char *cq_version(void);

/**
 * Builtin function by name (`f6c`, `f6q`, `and`, `or`, `xor`, `const0`,
 * `const1`). `n` is the arity for the parametrised ones and ignored otherwise.
 *
 * # Safety
 * `name` is a NUL-terminated string; `out` is valid for one write.
 */
enum CqStatus cq_function_builtin(const char *name, size_t n, struct CqFunction **out);

/**
 * Function from truth-table text: `n=<k>` then `2^k` bits, `x1` most significant.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is valid for one write.
 */
enum CqStatus cq_function_from_table(const char *text, struct CqFunction **out);

/**
 * # Safety
 * `f` is null or a handle from this library that was not yet freed.
 */
void cq_function_free(struct CqFunction *f);

/**
 * # Safety
 * `f` is a live handle; `bits` points to `len` bytes each 0 or 1.
 */
enum CqStatus cq_function_eval(const struct CqFunction *f,
                               const uint8_t *bits,
                               size_t len,
                               bool *out);

/**
 * Degree, certificate complexity and decision-tree depth.
 *
 * # Safety
 * `f` is a live handle; `out` is valid for one write.
 */
enum CqStatus cq_function_analyze(const struct CqFunction *f, struct CqMeasures *out);

/**
 * Builtin process by name (`lugano`, `lugano_bar`).
 *
 * # Safety
 * `name` is a NUL-terminated string; `out` is valid for one write.
 */
enum CqStatus cq_process_builtin(const char *name, struct CqProcess **out);

/**
 * Process from its JSON table description.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is valid for one write.
 */
enum CqStatus cq_process_from_json(const char *json, struct CqProcess **out);

/**
 * # Safety
 * `w` is a live handle; `out` is valid for one write. Free the string with [`cq_string_free`].
 */
enum CqStatus cq_process_to_json(const struct CqProcess *w, char **out);

/**
 * # Safety
 * `w` is null or a handle from this library that was not yet freed.
 */
void cq_process_free(struct CqProcess *w);

/**
 * Unique fixed point for every past value and operation tuple. A budget of 0
 * uses the library default.
 *
 * # Safety
 * `w` is a live handle; `valid` is valid for one write.
 */
enum CqStatus cq_process_validate(const struct CqProcess *w, uint64_t budget, bool *valid);

/**
 * # Safety
 * `w` is a live handle; `definite` is valid for one write.
 */
enum CqStatus cq_process_is_definite(const struct CqProcess *w, uint64_t budget, bool *definite);

/**
 * Whether `w` computes `f` on copies of its oracle: exhaustively for small
 * arity, else on `samples` seeded random inputs.
 *
 * # Safety
 * `w` and `f` are live handles; `holds` is valid for one write.
 */
enum CqStatus cq_process_computes(const struct CqProcess *w,
                                  const struct CqFunction *f,
                                  size_t samples,
                                  uint64_t seed,
                                  bool *holds);

/**
 * Runs the three-query supermap on the phase oracle of `x` (six bytes, each
 * 0 or 1) and decodes the output. `random_completion` selects a seeded random
 * extension of the Hadamard-like gates instead of Gram-Schmidt.
 *
 * # Safety
 * `x` points to 6 bytes; `out` is valid for one write.
 */
enum CqStatus cq_run_f6q(const uint8_t *x,
                         bool random_completion,
                         uint64_t seed,
                         struct CqQuantumOutcome *out);

/**
 * SDPA sparse text of the sequential-query program for `(f, queries)`.
 *
 * # Safety
 * `f` is a live handle; `out` is valid for one write. Free the string with [`cq_string_free`].
 */
enum CqStatus cq_sdp_export(const struct CqFunction *f, size_t queries, char **out);

/**
 * Checks a solution (JSON) against an SDPA instance at tolerance `tol`.
 *
 * # Safety
 * `instance` and `solution` are NUL-terminated strings; `out` is valid for one write.
 */
enum CqStatus cq_sdp_verify(const char *instance,
                            const char *solution,
                            double tol,
                            struct CqSdpReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAUSAL_QUERY_H */
