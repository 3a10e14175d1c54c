#ifndef MOEBIUS_H
#define MOEBIUS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MoebiusStatus {
  MOEBIUS_STATUS_OK = 0,
  MOEBIUS_STATUS_NULL_POINTER = 1,
  MOEBIUS_STATUS_INVALID_ARGUMENT = 2,
  MOEBIUS_STATUS_OUT_OF_RANGE = 3,
  MOEBIUS_STATUS_OVERFLOW = 4,
  MOEBIUS_STATUS_IO = 5,
  MOEBIUS_STATUS_CACHE_FORMAT = 6,
  MOEBIUS_STATUS_NUMERIC = 7,
  MOEBIUS_STATUS_PANIC = 8,
} MoebiusStatus;

/**
 * Opaque f_α instance.
 */
typedef struct MoebiusAxer MoebiusAxer;

/**
 * Opaque sieved table of μ(n) and M(n).
 */
typedef struct MoebiusTable MoebiusTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *moebius_status_message(enum MoebiusStatus status);

/**
 * Message of the last failed call on this thread, or NULL. Free with
 * `moebius_string_free`.
 */
char *moebius_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, freed once.
 */
void moebius_string_free(char *s);

/**
 * Sieves μ and M up to `limit`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MoebiusStatus moebius_table_build(uint64_t limit, struct MoebiusTable **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MoebiusStatus moebius_table_load(const char *path, struct MoebiusTable **out);

/**
 * # Safety
 * `table` must come from this library; `path` must be a NUL-terminated string.
 */
enum MoebiusStatus moebius_table_save(const struct MoebiusTable *table, const char *path);

/**
 * # Safety
 * `table` must be NULL or come from this library, freed once.
 */
void moebius_table_free(struct MoebiusTable *table);

/**
 * # Safety
 * `table` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_table_limit(const struct MoebiusTable *table, uint64_t *out);

/**
 * μ(n) for 1 ≤ n ≤ limit.
 *
 * # Safety
 * `table` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_mu(const struct MoebiusTable *table, uint64_t n, int8_t *out);

/**
 * M(x).
 *
 * # Safety
 * `table` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_mertens(const struct MoebiusTable *table, double x, int64_t *out);

/**
 * m(x) = Σ_{n ≤ x} μ(n)/n.
 *
 * # Safety
 * `table` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_m_log(const struct MoebiusTable *table, double x, double *out);

/**
 * m₁(x) = m(x) - M(x)/x.
 *
 * # Safety
 * `table` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_m1(const struct MoebiusTable *table, double x, double *out);

/**
 * ∫_1^x |M(t)| t^weight dt.
 *
 * # Safety
 * `table` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_abs_mertens_integral(const struct MoebiusTable *table,
                                                double x,
                                                int32_t weight,
                                                double *out);

/**
 * Runs the named verification (`meissel`, `macleod`, `gram`, `vonmangoldt`,
 * `id19-20`, `prop3`, `prop7`, `prop10`, `prop6`, `prop9`, `eq5`) up to
 * `x_max`. `k <= 0` selects the default order. Writes whether every report
 * passed and, when `out_json` is not NULL, the JSON array of reports.
 *
 * # Safety
 * `table` may be NULL only for identities that do not need it; `name` must
 * be NUL-terminated; `out_passed` must be valid; `out_json` may be NULL.
 */
enum MoebiusStatus moebius_verify(const struct MoebiusTable *table,
                                  const char *name,
                                  double x_max,
                                  int32_t k,
                                  uint64_t seed,
                                  bool *out_passed,
                                  char **out_json);

/**
 * λ_1..λ_k, c_k and the Δ_k checks for one k, as a JSON report.
 *
 * # Safety
 * `out_passed` and `out_json` must be valid.
 */
enum MoebiusStatus moebius_lambda_json(uint32_t k, bool *out_passed, char **out_json);

/**
 * # Safety
 * `out` must be valid.
 */
enum MoebiusStatus moebius_axer_build(uint64_t alpha_inv, uint32_t j_max, struct MoebiusAxer **out);

/**
 * # Safety
 * `a` must be NULL or come from this library, freed once.
 */
void moebius_axer_free(struct MoebiusAxer *a);

/**
 * Number of support points.
 *
 * # Safety
 * `a` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_axer_support_len(const struct MoebiusAxer *a, uint64_t *out);

/**
 * F_α(x).
 *
 * # Safety
 * `a` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_axer_f(const struct MoebiusAxer *a, double x, double *out);

/**
 * G_α(x).
 *
 * # Safety
 * `a` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_axer_g(const struct MoebiusAxer *a, double x, double *out);

/**
 * H_α(x), evaluated exactly at the rational value of x.
 *
 * # Safety
 * `a` must come from this library; `out` must be valid.
 */
enum MoebiusStatus moebius_axer_h(const struct MoebiusAxer *a, double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOEBIUS_H */
