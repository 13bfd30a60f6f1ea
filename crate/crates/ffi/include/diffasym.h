#ifndef DIFFASYM_H
#define DIFFASYM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DaAlgorithm {
  DA_ALGORITHM_DLMS = 0,
  DA_ALGORITHM_DSELMS = 1,
  DA_ALGORITHM_DLLAD = 2,
  DA_ALGORITHM_DLLCLMS = 3,
  DA_ALGORITHM_DQQCLMS = 4,
  DA_ALGORITHM_DLECLMS = 5,
} DaAlgorithm;

typedef enum DaStatus {
  DA_STATUS_OK = 0,
  DA_STATUS_NULL_POINTER = 1,
  DA_STATUS_INVALID_ARGUMENT = 2,
  DA_STATUS_CONFIG = 3,
  DA_STATUS_DISCONNECTED = 4,
  DA_STATUS_ALL_DIVERGED = 5,
  DA_STATUS_IO = 6,
  DA_STATUS_BUFFER_TOO_SMALL = 7,
  DA_STATUS_UTF8 = 8,
  DA_STATUS_INTERNAL = 9,
} DaStatus;

typedef enum DaCost {
  DA_COST_LLC = 0,
  DA_COST_QQC = 1,
  DA_COST_LEC = 2,
} DaCost;

typedef enum DaComplexityKind {
  DA_COMPLEXITY_KIND_DSELMS_ADAPTATION = 0,
  DA_COMPLEXITY_KIND_DLLAD_ADAPTATION = 1,
  DA_COMPLEXITY_KIND_DLLCLMS_ADAPTATION = 2,
  DA_COMPLEXITY_KIND_DQQCLMS_ADAPTATION = 3,
  DA_COMPLEXITY_KIND_DLECLMS_ADAPTATION = 4,
  DA_COMPLEXITY_KIND_COMBINATION = 5,
} DaComplexityKind;

// Parsed and validated experiment config.
typedef struct DaConfig DaConfig;

// Result of a run: curves, CSV and manifest.
typedef struct DaRunResult DaRunResult;

typedef struct DaTopology DaTopology;

typedef struct DaComplexityRow {
  enum DaComplexityKind kind;
  uint64_t multiplications;
  uint64_t additions;
  uint64_t sign_ops;
  uint64_t exp_ops;
  uint64_t abs_ops;
} DaComplexityRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after success.
// The pointer stays valid until the next `da_*` call on the same thread.
const char *da_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *da_version(void);

// Static NUL-terminated name such as `"DLECLMS"`.
const char *da_algorithm_name(enum DaAlgorithm algorithm);

// Evaluates an asymmetric cost at error `e`. `exp_clamp` only affects LEC.
//
// # Safety
// `out` must be a valid pointer to a `double`.
enum DaStatus da_cost(enum DaCost cost,
                      double e,
                      double a,
                      double b,
                      double exp_clamp,
                      double *out);

// Mean-stability step-size limits. Pass `NaN` for `chi_v` when it is
// unknown. `*has_limits` is 0 for algorithms without a limit.
//
// # Safety
// `positive`, `negative` and `has_limits` must be valid pointers.
enum DaStatus da_step_bound(enum DaAlgorithm algorithm,
                            double mu,
                            double a,
                            double b,
                            double rho_max,
                            double chi_v,
                            double *positive,
                            double *negative,
                            int32_t *has_limits);

// Fills up to `capacity` rows of the operation-count table for `taps` and
// `nodes`. `*count` receives the full row count even when `rows` is too
// small, in which case `DA_STATUS_BUFFER_TOO_SMALL` is returned.
//
// # Safety
// `rows` must point to `capacity` writable rows (or be null with
// `capacity == 0`); `count` must be valid.
enum DaStatus da_complexity(uint64_t taps,
                            uint64_t nodes,
                            struct DaComplexityRow *rows,
                            size_t capacity,
                            size_t *count);

// Parses a TOML config. When `has_seed` is nonzero, `seed` replaces
// `run.master_seed`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum DaStatus da_config_parse(const char *text,
                              int32_t has_seed,
                              uint64_t seed,
                              struct DaConfig **out);

// # Safety
// `config` must come from [`da_config_parse`] or be null.
void da_config_free(struct DaConfig *config);

// Runs the experiment. A run where some algorithm diverged in every trial
// still succeeds; query it with [`da_run_is_partial`].
//
// # Safety
// `config` must be a live handle and `out` a valid pointer.
enum DaStatus da_run(const struct DaConfig *config, struct DaRunResult **out);

// # Safety
// `result` must come from [`da_run`] or be null.
void da_run_free(struct DaRunResult *result);

// Number of algorithms, or 0 for a null handle.
//
// # Safety
// `result` must be a live handle or null.
size_t da_run_algorithm_count(const struct DaRunResult *result);

// Iterations per curve, or 0 for a null handle.
//
// # Safety
// `result` must be a live handle or null.
size_t da_run_iterations(const struct DaRunResult *result);

// 1 if some algorithm diverged in every trial, 0 otherwise.
//
// # Safety
// `result` must be a live handle.
int32_t da_run_is_partial(const struct DaRunResult *result);

// Algorithm of series `index`.
//
// # Safety
// `result` must be a live handle and `out` a valid pointer.
enum DaStatus da_run_algorithm(const struct DaRunResult *result,
                               size_t index,
                               enum DaAlgorithm *out);

// Copies the MSD curve (dB) of series `index` into `values`, which must
// hold [`da_run_iterations`] doubles. Fails with `DA_STATUS_ALL_DIVERGED`
// when the series has no finite curve.
//
// # Safety
// `result` must be a live handle; `values` must point to `len` doubles.
enum DaStatus da_run_curve(const struct DaRunResult *result,
                           size_t index,
                           double *values,
                           size_t len);

// The run's CSV. Owned by the handle.
//
// # Safety
// `result` must be a live handle or null.
const char *da_run_csv(const struct DaRunResult *result);

// The run manifest as JSON. Owned by the handle.
//
// # Safety
// `result` must be a live handle or null.
const char *da_run_manifest_json(const struct DaRunResult *result);

// Connected random graph with edge probability `p`.
//
// # Safety
// `out` must be a valid pointer.
enum DaStatus da_topology_probability(size_t nodes,
                                      double p,
                                      uint64_t seed,
                                      struct DaTopology **out);

// Connected random geometric graph on the unit square.
//
// # Safety
// `out` must be a valid pointer.
enum DaStatus da_topology_radius(size_t nodes,
                                 double radius,
                                 uint64_t seed,
                                 struct DaTopology **out);

// # Safety
// `topology` must come from a `da_topology_*` constructor or be null.
void da_topology_free(struct DaTopology *topology);

// # Safety
// `topology` must be a live handle or null.
size_t da_topology_node_count(const struct DaTopology *topology);

// Neighbourhood size including the node itself; 0 for bad arguments.
//
// # Safety
// `topology` must be a live handle or null.
size_t da_topology_degree(const struct DaTopology *topology, size_t node);

// 1 when `l` and `n` are neighbours (every node neighbours itself).
//
// # Safety
// `topology` must be a live handle or null.
int32_t da_topology_is_neighbor(const struct DaTopology *topology, size_t l, size_t n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIFFASYM_H */
