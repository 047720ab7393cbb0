#ifndef MQO_H
#define MQO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MqoStatus {
  MQO_STATUS_OK = 0,
  MQO_STATUS_NULL_ARGUMENT = 1,
  MQO_STATUS_INVALID_UTF8 = 2,
  MQO_STATUS_JSON = 3,
  MQO_STATUS_WORKLOAD = 4,
  MQO_STATUS_INVALID_ARGUMENT = 5,
  MQO_STATUS_MISSING_COST = 6,
  MQO_STATUS_TOO_LARGE = 7,
  MQO_STATUS_DOMAIN = 8,
  MQO_STATUS_IO = 9,
  MQO_STATUS_OUT_OF_RANGE = 10,
  MQO_STATUS_INTERNAL = 11,
} MqoStatus;

/**
 * Algorithm codes accepted by [`mqo_optimize`].
 */
typedef enum MqoAlgorithm {
  MQO_ALGORITHM_MARGINAL = 0,
  MQO_ALGORITHM_LAZY = 1,
  MQO_ALGORITHM_ROY = 2,
  MQO_ALGORITHM_EXHAUSTIVE = 3,
  MQO_ALGORITHM_NO_MATERIALIZATION = 4,
} MqoAlgorithm;

/**
 * The outcome of one optimization run.
 */
typedef struct MqoResult MqoResult;

/**
 * A parsed and validated workload.
 */
typedef struct MqoWorkload MqoWorkload;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * Valid until the next call into the library on the same thread.
 */
const char *mqo_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mqo_version(void);

/**
 * Parses a workload from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `handle` a valid pointer.
 */
enum MqoStatus mqo_workload_from_json(const char *json, struct MqoWorkload **handle);

/**
 * Reads a workload from a JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `handle` a valid pointer.
 */
enum MqoStatus mqo_workload_from_path(const char *path, struct MqoWorkload **handle);

/**
 * The bundled two-query example workload.
 *
 * # Safety
 * `handle` must be a valid pointer.
 */
enum MqoStatus mqo_workload_example(struct MqoWorkload **handle);

/**
 * Releases a workload. Null is ignored.
 *
 * # Safety
 * `workload` must come from this library and not be used afterwards.
 */
void mqo_workload_free(struct MqoWorkload *workload);

/**
 * Number of shareable nodes, the candidates for materialization.
 *
 * # Safety
 * `workload` must be a live handle and `count` a valid pointer.
 */
enum MqoStatus mqo_workload_shareable_count(const struct MqoWorkload *workload, size_t *count);

/**
 * Label of shareable node `index`, such as `B⋈C`. The caller frees the string.
 *
 * # Safety
 * `workload` must be a live handle and `label` a valid pointer.
 */
enum MqoStatus mqo_workload_shareable_label(const struct MqoWorkload *workload,
                                            size_t index,
                                            char **label);

/**
 * Best combined plan cost when the listed shareable nodes are materialized.
 * `indices` may be null when `len` is 0.
 *
 * # Safety
 * `indices` must point to `len` values, `workload` must be a live handle and
 * `cost` a valid pointer.
 */
enum MqoStatus mqo_workload_best_cost(const struct MqoWorkload *workload,
                                      const size_t *indices,
                                      size_t len,
                                      double *cost);

/**
 * Runs one algorithm on a fresh copy of the workload's oracle, so call
 * counts do not depend on earlier runs. `k` = 0 means no cardinality cap.
 *
 * # Safety
 * `workload` must be a live handle and `result` a valid pointer.
 */
enum MqoStatus mqo_optimize(const struct MqoWorkload *workload,
                            uint32_t algorithm,
                            size_t k,
                            bool prune,
                            struct MqoResult **result);

/**
 * Releases a result. Null is ignored.
 *
 * # Safety
 * `result` must come from this library and not be used afterwards.
 */
void mqo_result_free(struct MqoResult *result);

/**
 * Plan cost with the chosen nodes materialized.
 *
 * # Safety
 * `result` must be a live handle and `cost` a valid pointer.
 */
enum MqoStatus mqo_result_plan_cost(const struct MqoResult *result, double *cost);

/**
 * Plan cost without any materialization.
 *
 * # Safety
 * `result` must be a live handle and `cost` a valid pointer.
 */
enum MqoStatus mqo_result_baseline_cost(const struct MqoResult *result, double *cost);

/**
 * Number of materialized nodes.
 *
 * # Safety
 * `result` must be a live handle and `count` a valid pointer.
 */
enum MqoStatus mqo_result_materialized_count(const struct MqoResult *result, size_t *count);

/**
 * Label of the `index`-th materialized node. The caller frees the string.
 *
 * # Safety
 * `result` must be a live handle and `label` a valid pointer.
 */
enum MqoStatus mqo_result_materialized_label(const struct MqoResult *result,
                                             size_t index,
                                             char **label);

/**
 * Number of distinct materialized sets whose cost the run requested.
 *
 * # Safety
 * `result` must be a live handle and `calls` a valid pointer.
 */
enum MqoStatus mqo_result_oracle_calls(const struct MqoResult *result, size_t *calls);

/**
 * The full outcome as JSON. The caller frees the string.
 *
 * # Safety
 * `result` must be a live handle and `json` a valid pointer.
 */
enum MqoStatus mqo_result_to_json(const struct MqoResult *result, char **json);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void mqo_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MQO_H */
