#ifndef SPECMIX_H
#define SPECMIX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SmStatus {
  SM_STATUS_OK = 0,
  SM_STATUS_INVALID_INPUT = 1,
  SM_STATUS_INVALID_PARAMETERS = 2,
  SM_STATUS_INVALID_STATE = 3,
  SM_STATUS_CONVERGENCE_FAILURE = 4,
  SM_STATUS_DEGENERATE = 5,
  SM_STATUS_SIZE_LIMIT = 6,
  SM_STATUS_IO = 7,
  SM_STATUS_PARSE = 8,
  SM_STATUS_NULL_POINTER = 9,
  SM_STATUS_PANIC = 10,
} SmStatus;

/**
 * Opaque population model.
 */
typedef struct SmModel SmModel;

/**
 * Opaque data matrix with optional ground-truth labels.
 */
typedef struct SmSample SmSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into this library.
 */
const char *sm_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sm_version(void);

/**
 * Builds a model from a row-major `populations × features` probability
 * array and `populations` sizes.
 *
 * # Safety
 * `probs` must point to `populations·features` doubles, `sizes` to
 * `populations` values and `out` to writable storage for one pointer.
 */
enum SmStatus sm_model_new(const double *probs,
                           size_t populations,
                           size_t features,
                           const size_t *sizes,
                           struct SmModel **out);

/**
 * Balanced two-block model with `n_per_population` individuals per side.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum SmStatus sm_model_two_block(double alpha,
                                 double epsilon,
                                 size_t features,
                                 size_t n_per_population,
                                 struct SmModel **out);

/**
 * Releases a model; null is ignored.
 *
 * # Safety
 * `model` must come from this library and not be used afterwards.
 */
void sm_model_free(struct SmModel *model);

/**
 * Divergence of the closest pair of populations.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SmStatus sm_model_divergence(const struct SmModel *model, double *out);

/**
 * Total number of individuals of a model.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SmStatus sm_model_individuals(const struct SmModel *model, size_t *out);

/**
 * Draws a raw 0/1 sample with ground-truth labels.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SmStatus sm_sample_generate(const struct SmModel *model, uint64_t seed, struct SmSample **out);

/**
 * Wraps a row-major `rows × cols` array of 0/1 values without labels.
 *
 * # Safety
 * `data` must point to `rows·cols` doubles and `out` be writable.
 */
enum SmStatus sm_sample_from_bits(const double *data,
                                  size_t rows,
                                  size_t cols,
                                  struct SmSample **out);

/**
 * Releases a sample; null is ignored.
 *
 * # Safety
 * `sample` must come from this library and not be used afterwards.
 */
void sm_sample_free(struct SmSample *sample);

/**
 * Number of individuals and features.
 *
 * # Safety
 * `sample` must be a live handle; `rows` and `cols` writable.
 */
enum SmStatus sm_sample_shape(const struct SmSample *sample, size_t *rows, size_t *cols);

/**
 * Copies the ground-truth labels into `out`, which must hold exactly one
 * entry per individual.
 *
 * # Safety
 * `sample` must be a live handle and `out` point to `len` writable values.
 */
enum SmStatus sm_sample_labels(const struct SmSample *sample, size_t *out, size_t len);

/**
 * Two-way classification with `rounds` disjoint blocks of `block_size`
 * features. Writes one 0/1 label per individual.
 *
 * # Safety
 * `sample` must be a live handle and `out` point to `len` writable values.
 */
enum SmStatus sm_classify(const struct SmSample *sample,
                          double gamma,
                          double omega_min,
                          size_t block_size,
                          size_t rounds,
                          uint64_t seed,
                          size_t *out,
                          size_t len);

/**
 * Clusters into `k` sets with the default scale sweep.
 *
 * # Safety
 * `sample` must be a live handle and `out` point to `len` writable values.
 */
enum SmStatus sm_partition(const struct SmSample *sample, size_t k, size_t *out, size_t len);

/**
 * Misplaced-individual count (each counted twice) and its rate over `n`,
 * minimized over relabelings.
 *
 * # Safety
 * `labels` and `truth` must point to `n` values; `raw` and `rate` writable.
 */
enum SmStatus sm_misclassification(const size_t *labels,
                                   const size_t *truth,
                                   size_t n,
                                   size_t k,
                                   size_t *raw,
                                   double *rate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECMIX_H */
