#ifndef ECCENTRIC_H
#define ECCENTRIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EccStatus {
  ECC_STATUS_OK = 0,
  ECC_STATUS_NULL_POINTER = 1,
  ECC_STATUS_INVALID_INPUT = 2,
  ECC_STATUS_NUMERICAL_FAILURE = 3,
  ECC_STATUS_UNSUPPORTED = 4,
  ECC_STATUS_PANIC = 5,
} EccStatus;

/**
 * A Pietsch certificate together with the ids of its space.
 */
typedef struct EccCertificate EccCertificate;

/**
 * A weighted connected graph.
 */
typedef struct EccGraph EccGraph;

/**
 * A finite metric space.
 */
typedef struct EccSpace EccSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *ecc_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ecc_string_free(char *s);

/**
 * Parses a metric space document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum EccStatus ecc_space_from_json(const char *json, struct EccSpace **out);

/**
 * Builds a space with ids `x0..x{n-1}` and base point `x0` from a row-major
 * `n x n` matrix.
 *
 * # Safety
 * `d` must point to `n * n` doubles; `out` must be writable.
 */
enum EccStatus ecc_space_from_matrix(size_t n,
                                     const double *d,
                                     bool pseudometric,
                                     struct EccSpace **out);

/**
 * # Safety
 * `space` must come from this library and not be freed twice.
 */
void ecc_space_free(struct EccSpace *space);

/**
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum EccStatus ecc_space_len(const struct EccSpace *space, size_t *out);

/**
 * Writes the eccentric pseudometric of `subset` into the row-major
 * `n x n` buffer `out`.
 *
 * # Safety
 * `subset` must hold `subset_len` indices; `out` must hold `n * n` doubles.
 */
enum EccStatus ecc_eccentric_pseudometric(const struct EccSpace *space,
                                          const size_t *subset,
                                          size_t subset_len,
                                          double *out);

/**
 * Arens-Eells norm of the molecule `sum_i coefficients[i] * delta(points[i])`.
 *
 * # Safety
 * `points` and `coefficients` must hold `len` entries; `out` must be writable.
 */
enum EccStatus ecc_ae_norm(const struct EccSpace *space,
                           const size_t *points,
                           const double *coefficients,
                           size_t len,
                           double *out);

/**
 * Absolute p-proximity of the pairs `(xs[i], ys[i])`; `weights` may be
 * null for unit weights.
 *
 * # Safety
 * `xs`, `ys` and a non-null `weights` must hold `len` entries.
 */
enum EccStatus ecc_d_ac(const struct EccSpace *space,
                        const size_t *xs,
                        const size_t *ys,
                        const double *weights,
                        size_t len,
                        double p,
                        double *out);

/**
 * Eccentric p-proximity of the pairs over the point set `subset`.
 *
 * # Safety
 * As [`ecc_d_ac`]; `subset` must hold `subset_len` indices.
 */
enum EccStatus ecc_d_cc(const struct EccSpace *space,
                        const size_t *xs,
                        const size_t *ys,
                        const double *weights,
                        size_t len,
                        double p,
                        const size_t *subset,
                        size_t subset_len,
                        double *out);

/**
 * Minimal eccentric p-summing constant of `f` (one value per point) with
 * respect to the points `k`.
 *
 * # Safety
 * `f` must hold one double per point; `k` must hold `k_len` indices.
 */
enum EccStatus ecc_pietsch(const struct EccSpace *space,
                           const double *f,
                           const size_t *k,
                           size_t k_len,
                           double p,
                           struct EccCertificate **out);

/**
 * # Safety
 * `cert` must come from this library and not be freed twice.
 */
void ecc_certificate_free(struct EccCertificate *cert);

/**
 * The constant, or positive infinity.
 *
 * # Safety
 * `cert` must be a live handle; `out` must be writable.
 */
enum EccStatus ecc_certificate_constant(const struct EccCertificate *cert, double *out);

/**
 * Writes the Pietsch measure densely, one weight per point. Fails with
 * `InvalidInput` when the constant is infinite.
 *
 * # Safety
 * `out` must hold `n` doubles, `n` being the number of points.
 */
enum EccStatus ecc_certificate_measure(const struct EccCertificate *cert, double *out, size_t n);

/**
 * The certificate as JSON; release with [`ecc_string_free`].
 *
 * # Safety
 * `cert` must be a live handle; `out` must be writable.
 */
enum EccStatus ecc_certificate_to_json(const struct EccCertificate *cert, char **out);

/**
 * Parses a graph document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum EccStatus ecc_graph_from_json(const char *json, struct EccGraph **out);

/**
 * # Safety
 * `graph` must come from this library and not be freed twice.
 */
void ecc_graph_free(struct EccGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum EccStatus ecc_graph_len(const struct EccGraph *graph, size_t *out);

/**
 * Shortest path p-distances into the row-major `n x n` buffer `out`.
 *
 * # Safety
 * `out` must hold `n * n` doubles, `n` being the number of vertices.
 */
enum EccStatus ecc_graph_qp(const struct EccGraph *graph, double p, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ECCENTRIC_H */
