/* C interface to the typetwo workbench. Handles are opaque; every function returning TtStatus reports failures through tt_last_error_message(). */

#ifndef TYPETWO_H
#define TYPETWO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum TtStatus {
  TT_STATUS_OK = 0,
  TT_STATUS_PARSE_ERROR = 1,
  TT_STATUS_DOMAIN_ERROR = 2,
  TT_STATUS_ABORTED = 3,
  TT_STATUS_NULL_ARGUMENT = 4,
  TT_STATUS_INTERNAL_ERROR = 5,
} TtStatus;

/**
 * A machine description (opaque).
 */
typedef struct TtMachine TtMachine;

/**
 * A strictly monotone function on the naturals (opaque).
 */
typedef struct TtMonFn TtMonFn;

/**
 * A function-space name (opaque).
 */
typedef struct TtName TtName;

/**
 * A regular string function (opaque).
 */
typedef struct TtRegFn TtRegFn;

/**
 * A second-order polynomial (opaque).
 */
typedef struct TtSop TtSop;

/**
 * Outcome of a machine run. `output` is null when the run aborted; a
 * non-null output is freed with `tt_string_free`.
 */
typedef struct TtRunResult {
  bool aborted;
  uint64_t steps;
  uint64_t oracle_calls;
  uint64_t meta_probes;
  char *output;
} TtRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The last error message on this thread, or null. Free with
 * `tt_string_free`.
 */
char *tt_last_error_message(void);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library and not yet
 * freed.
 */
void tt_string_free(char *s);

/**
 * Free a polynomial handle.
 *
 * # Safety
 * The handle must originate from this library and not be used afterwards.
 */
void tt_sop_free(struct TtSop *p);

/**
 * Free a monotone-function handle.
 *
 * # Safety
 * The handle must originate from this library and not be used afterwards.
 */
void tt_monfn_free(struct TtMonFn *p);

/**
 * Free a regular-function handle.
 *
 * # Safety
 * The handle must originate from this library and not be used afterwards.
 */
void tt_regfn_free(struct TtRegFn *p);

/**
 * Free a machine handle.
 *
 * # Safety
 * The handle must originate from this library and not be used afterwards.
 */
void tt_machine_free(struct TtMachine *p);

/**
 * Free a name handle.
 *
 * # Safety
 * The handle must originate from this library and not be used afterwards.
 */
void tt_name_free(struct TtName *p);

/**
 * Parse a second-order polynomial, e.g. "L(L(n)) + 2*n".
 *
 * # Safety
 * `text` must be a valid C string; `out` must be a valid pointer.
 */
enum TtStatus tt_sop_parse(const char *text, struct TtSop **out);

/**
 * The canonical monomial `P_n`.
 */
struct TtSop *tt_sop_monomial(uint32_t n);

/**
 * Canonical fully parenthesized rendering.
 *
 * # Safety
 * `q` must be a valid handle.
 */
char *tt_sop_print(const struct TtSop *q);

/**
 * Degree and type tag ('a' or 'm').
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_sop_degree(const struct TtSop *q, uint32_t *degree, char *type_tag);

/**
 * Exact evaluation; the value is returned as a decimal string.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_sop_eval(const struct TtSop *q, const struct TtMonFn *p, uint64_t k, char **value);

/**
 * Does the polynomial lie in the dominance class of the m-th monomial
 * (m >= 1)?
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_sop_dominates_monomial(const struct TtSop *q, uint32_t m, bool *out);

/**
 * Synthesize a grid-verified dominance witness (q, k).
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_sop_witness(const struct TtSop *q,
                             struct TtMonFn **witness_q,
                             uint32_t *witness_k);

/**
 * A verified counterexample to `P_{m+1}` dominance against `P_m` under
 * the scale `q` and exponent `k`: returns the table function and the
 * argument.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_sop_separate_monomials(uint32_t m,
                                        const struct TtMonFn *q,
                                        uint32_t k,
                                        struct TtMonFn **cex_p,
                                        uint64_t *cex_n);

/**
 * Parse a monotone function: "id", "poly: 2*x^2 + 1" or
 * "table: [1,3,7] tail+1".
 *
 * # Safety
 * `text` must be a valid C string; `out` must be a valid pointer.
 */
enum TtStatus tt_monfn_parse(const char *text, struct TtMonFn **out);

/**
 * Render a monotone function in its textual form.
 *
 * # Safety
 * `f` must be a valid handle.
 */
char *tt_monfn_print(const struct TtMonFn *f);

/**
 * Exact application, returned as a decimal string.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_monfn_apply(const struct TtMonFn *f, uint64_t i, char **value);

/**
 * Parse a regular function: `pad g=<monfn>`, `lift "<word>"`,
 * `pair(<regfn>,<regfn>)` or `table {1:"0"} extend=repeat`.
 *
 * # Safety
 * `text` must be a valid C string; `out` must be a valid pointer.
 */
enum TtStatus tt_regfn_parse(const char *text, struct TtRegFn **out);

/**
 * Apply a regular function to a word over {0,1,2}.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_regfn_apply(const struct TtRegFn *f, const char *word, char **out);

/**
 * The size `|f|(i)`, returned as a decimal string.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_regfn_size_at(const struct TtRegFn *f, uint64_t i, char **value);

/**
 * Parse the line-oriented machine text format.
 *
 * # Safety
 * `text` must be a valid C string; `out` must be a valid pointer.
 */
enum TtStatus tt_machine_parse_text(const char *text, struct TtMachine **out);

/**
 * Canonical machine text.
 *
 * # Safety
 * `m` must be a valid handle.
 */
char *tt_machine_print(const struct TtMachine *m);

/**
 * The canonical index word (over {0,1,2}) of a machine.
 *
 * # Safety
 * `m` must be a valid handle.
 */
char *tt_machine_encode(const struct TtMachine *m);

/**
 * Decode an index word back into a machine.
 *
 * # Safety
 * `index` must be a valid C string; `out` must be a valid pointer.
 */
enum TtStatus tt_machine_decode(const char *index, struct TtMachine **out);

/**
 * The machine computing n-fold oracle application.
 */
struct TtMachine *tt_machine_phi(uint32_t n);

/**
 * Run a machine under a hard fuel cap (0 selects the default cap). A
 * null oracle means the constant empty-word function.
 *
 * # Safety
 * All non-null pointers must be valid.
 */
enum TtStatus tt_run(const struct TtMachine *m,
                     const struct TtRegFn *oracle,
                     const char *input,
                     uint64_t fuel,
                     struct TtRunResult *out);

/**
 * Run a machine under the clock `P(|oracle|)(|input|)`.
 *
 * # Safety
 * All non-null pointers must be valid.
 */
enum TtStatus tt_run_clocked(const struct TtMachine *m,
                             const struct TtSop *p,
                             const struct TtRegFn *oracle,
                             const char *input,
                             struct TtRunResult *out);

/**
 * Run the clocked universal machine at level `m` on an index word.
 *
 * # Safety
 * All non-null pointers must be valid.
 */
enum TtStatus tt_universal_run(uint32_t m,
                               const char *index,
                               const struct TtRegFn *oracle,
                               uint32_t l,
                               const char *input,
                               struct TtRunResult *out);

/**
 * Compile a machine with a promised second-order polynomial bound into
 * a function-space name.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_compile_to_name(const struct TtMachine *m,
                                 const struct TtSop *p,
                                 struct TtName **out);

/**
 * The level of a name.
 *
 * # Safety
 * `f` must be a valid handle.
 */
uint32_t tt_name_level(const struct TtName *f);

/**
 * The textual container for a name (level, exponent, advice, machine).
 *
 * # Safety
 * `f` must be a valid handle.
 */
char *tt_name_to_text(const struct TtName *f);

/**
 * Evaluate a name at a point name and an input word; a clock abort is
 * reported as `TT_STATUS_ABORTED`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum TtStatus tt_name_eval(const struct TtName *f,
                           const struct TtRegFn *x,
                           const char *input,
                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TYPETWO_H */
