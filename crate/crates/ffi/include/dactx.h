#ifndef DACTX_H
#define DACTX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DactxStatus {
  DACTX_STATUS_OK = 0,
  DACTX_STATUS_NULL_POINTER = 1,
  DACTX_STATUS_INVALID_UTF8 = 2,
  DACTX_STATUS_CONFIG = 3,
  DACTX_STATUS_IO = 4,
  DACTX_STATUS_PARSE = 5,
  DACTX_STATUS_MODEL = 6,
  DACTX_STATUS_INVALID_INPUT = 7,
  DACTX_STATUS_OUT_OF_RANGE = 8,
  DACTX_STATUS_PANIC = 9,
} DactxStatus;

/**
 * Opaque corpus handle.
 */
typedef struct DactxCorpus DactxCorpus;

/**
 * Opaque model handle.
 */
typedef struct DactxModel DactxModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *dactx_last_error_message(void);

/**
 * Loads a corpus. `format` is one of `swda`, `lego`, `dialogbank`,
 * `segments`; `variant` may be null for the format's default tag set.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum DactxStatus dactx_corpus_load(const char *path,
                                   const char *format,
                                   const char *variant,
                                   struct DactxCorpus **out);

/**
 * # Safety
 * `corpus` must be null or a live handle from [`dactx_corpus_load`].
 */
size_t dactx_corpus_dialog_count(const struct DactxCorpus *corpus);

/**
 * # Safety
 * `corpus` must be null or a live handle from [`dactx_corpus_load`].
 */
size_t dactx_corpus_segment_count(const struct DactxCorpus *corpus);

/**
 * # Safety
 * `corpus` must be null or a live handle from [`dactx_corpus_load`].
 */
size_t dactx_corpus_label_count(const struct DactxCorpus *corpus);

/**
 * Label `index` of the corpus label set. The string is owned by the handle.
 *
 * # Safety
 * `corpus` must be a live handle and `out` writable.
 */
enum DactxStatus dactx_corpus_label(const struct DactxCorpus *corpus,
                                    size_t index,
                                    const char **out);

/**
 * # Safety
 * `corpus` must be null or a handle not yet freed.
 */
void dactx_corpus_free(struct DactxCorpus *corpus);

/**
 * Loads a model and the dictionary stored next to it.
 *
 * # Safety
 * `path` must be NUL-terminated and `out` writable.
 */
enum DactxStatus dactx_model_load(const char *path, struct DactxModel **out);

/**
 * # Safety
 * `model` must be null or a live handle from [`dactx_model_load`].
 */
size_t dactx_model_class_count(const struct DactxModel *model);

/**
 * Number of preceding segments the model's features look at.
 *
 * # Safety
 * `model` must be null or a live handle from [`dactx_model_load`].
 */
size_t dactx_model_context_size(const struct DactxModel *model);

/**
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum DactxStatus dactx_model_class_label(const struct DactxModel *model,
                                         size_t index,
                                         const char **out);

/**
 * Classifies one segment given its preceding segments, most recent first.
 * `prev_labels` may be null unless the model uses label context. Writes the
 * class index to `out_class`.
 *
 * # Safety
 * `text` must be NUL-terminated; `prev_texts` (and `prev_labels` when not
 * null) must point to `n_prev` NUL-terminated strings; `out_class` must be
 * writable.
 */
enum DactxStatus dactx_model_predict_segment(const struct DactxModel *model,
                                             const char *text,
                                             const char *const *prev_texts,
                                             const char *const *prev_labels,
                                             size_t n_prev,
                                             size_t *out_class);

/**
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void dactx_model_free(struct DactxModel *model);

/**
 * Wilcoxon signed-rank test on `n` pairs. Writes the two-sided p-value and
 * the positive rank sum; either output may be null.
 *
 * # Safety
 * `a` and `b` must point to `n` doubles.
 */
enum DactxStatus dactx_wilcoxon(const double *a,
                                const double *b,
                                size_t n,
                                double *out_p,
                                double *out_w_plus);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DACTX_H */
