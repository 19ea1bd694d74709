#ifndef KSVERIFY_H
#define KSVERIFY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum KsvStatus {
  KSV_STATUS_OK = 0,
  KSV_STATUS_NULL_POINTER = 1,
  KSV_STATUS_INVALID_UTF8 = 2,
  KSV_STATUS_UNKNOWN_MODEL = 3,
  KSV_STATUS_PARSE = 4,
  KSV_STATUS_DOMAIN = 5,
  KSV_STATUS_PANIC = 6,
} KsvStatus;

typedef enum KsvErrorMode {
  KSV_ERROR_MODE_LINEAR = 0,
  KSV_ERROR_MODE_QUADRATURE = 1,
  KSV_ERROR_MODE_POISSON = 2,
} KsvErrorMode;

/**
 * Parsed measurement statistics.
 */
typedef struct KsvDataSet KsvDataSet;

/**
 * A noncontextual model together with its Bell operator.
 */
typedef struct KsvModel KsvModel;

/**
 * A value with its standard uncertainty.
 */
typedef struct KsvValue {
  double value;
  double sigma;
} KsvValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * successful call. Valid until the next call into this library on the same
 * thread.
 */
const char *ksv_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ksv_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ksv_string_free(char *s);

/**
 * Loads a built-in model (`mermin-ghz3`, `pentagram`, `square-b`,
 * `square-c`, `ghz-mermin-<n>`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum KsvStatus ksv_model_from_catalog(const char *name, struct KsvModel **out);

/**
 * Builds a model from model-file JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum KsvStatus ksv_model_from_json(const char *json, struct KsvModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library, not yet freed.
 */
void ksv_model_free(struct KsvModel *model);

/**
 * Serializes the model in the model file format.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum KsvStatus ksv_model_to_json(const struct KsvModel *model, char **out);

/**
 * Number of contexts and distinct assignment symbols.
 *
 * # Safety
 * `model` must be a live handle; the out-pointers must be valid for writes.
 */
enum KsvStatus ksv_model_shape(const struct KsvModel *model, size_t *contexts, size_t *symbols);

/**
 * Whether a noncontextual ±1 assignment exists.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum KsvStatus ksv_model_ks_feasible(const struct KsvModel *model, bool *out);

/**
 * Exact classical bound using up to `threads` workers (0 means 1).
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum KsvStatus ksv_model_classical_bound(const struct KsvModel *model,
                                         uint32_t threads,
                                         double *out);

/**
 * `<B>` on the model's state. Fails with `KSV_STATUS_DOMAIN` for
 * state-independent models.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum KsvStatus ksv_model_quantum_value(const struct KsvModel *model, double *out);

/**
 * Largest eigenvalue of the Bell operator.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum KsvStatus ksv_model_spectral_max(const struct KsvModel *model, double *out);

/**
 * Bound of the reduced operator under the removed terms' identities, and
 * its term count.
 *
 * # Safety
 * `model` must be a live handle; the out-pointers must be valid for writes.
 */
enum KsvStatus ksv_model_reduced_bound(const struct KsvModel *model,
                                       double *out_bound,
                                       size_t *out_terms);

/**
 * Whether the reduced Bell operators of two models are equivalent.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be valid for writes.
 */
enum KsvStatus ksv_equivalent(const struct KsvModel *a, const struct KsvModel *b, bool *out);

/**
 * Parses CSV (or the JSON mirror) measurement data. `mode` is a
 * [`KsvErrorMode`] value.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum KsvStatus ksv_dataset_from_csv(const char *text, uint32_t mode, struct KsvDataSet **out);

/**
 * # Safety
 * `data` must be null or a handle from this library, not yet freed.
 */
void ksv_dataset_free(struct KsvDataSet *data);

/**
 * GHZ-Mermin value with its uncertainty.
 *
 * # Safety
 * `data` must be a live handle; `out` must be valid for writes.
 */
enum KsvStatus ksv_dataset_mermin(const struct KsvDataSet *data, struct KsvValue *out);

/**
 * GHZ fidelity with its uncertainty.
 *
 * # Safety
 * `data` must be a live handle; `out` must be valid for writes.
 */
enum KsvStatus ksv_dataset_fidelity(const struct KsvDataSet *data, struct KsvValue *out);

/**
 * Product of two words in text form, e.g. `"XY" * "YX" = "ZZ"`.
 *
 * # Safety
 * `a` and `b` must be NUL-terminated strings; `out` must be valid for writes.
 */
enum KsvStatus ksv_pauli_multiply(const char *a, const char *b, char **out);

/**
 * # Safety
 * `a` and `b` must be NUL-terminated strings; `out` must be valid for writes.
 */
enum KsvStatus ksv_pauli_commutes(const char *a, const char *b, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KSVERIFY_H */
