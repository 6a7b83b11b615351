/*
 * cv2xsim C interface.
 *
 * Opaque handles own all memory; every *_free accepts NULL. Functions that can
 * fail return a cv2x_status and leave a message retrievable with
 * cv2x_last_error() on the calling thread. Strings returned inside row structs
 * stay valid for the lifetime of the owning table handle.
 *
 * Metric values that are undefined for a run (no receiver pairs, empty
 * histograms) are reported as NaN.
 */
#ifndef CV2XSIM_H
#define CV2XSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CV2XSIM_BUILDING)
#    define CV2XSIM_API __declspec(dllexport)
#  else
#    define CV2XSIM_API __declspec(dllimport)
#  endif
#else
#  define CV2XSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cv2x_status {
  CV2X_OK = 0,
  CV2X_ERR_ARGUMENT = 1, /* null handle, index out of range, unknown name */
  CV2X_ERR_CONFIG = 2,   /* parse or validation failure */
  CV2X_ERR_IO = 3,       /* unreadable input or unwritable output */
  CV2X_ERR_INTERNAL = 4
} cv2x_status;

typedef struct cv2x_config cv2x_config;
typedef struct cv2x_sweep cv2x_sweep;
typedef struct cv2x_table cv2x_table;

#define CV2X_METRIC_COUNT 11

typedef struct cv2x_summary {
  double pdr;
  double ipg_tail_1e5_ms;
  double ipg_tail_1e4_ms;
  double prob_ipg_100ms;
  double aoi_tail_1e5_ms;
  double aoi_tail_1e4_ms;
  double prob_aoi_0ms;
  uint64_t n_ipg;
  uint64_t n_aoi;
  uint64_t r;
  uint64_t t;
} cv2x_summary;

typedef struct cv2x_row {
  const char* sweep;
  const char* axis_field;
  const char* axis_value;
  const char* variant;
  int replication;
  cv2x_summary summary;
} cv2x_row;

/* values[] follows the metric column order of the CSV output. */
typedef struct cv2x_aggregate {
  const char* sweep;
  const char* axis_field;
  const char* axis_value;
  const char* variant;
  const char* statistic; /* "mean" or "stddev" */
  double values[CV2X_METRIC_COUNT];
} cv2x_aggregate;

CV2XSIM_API const char* cv2x_version(void);
CV2XSIM_API const char* cv2x_last_error(void);
CV2XSIM_API void cv2x_string_free(char* s);

/* Scenario configuration. Overrides accumulate unvalidated; validation runs
 * in cv2x_config_validate and before every simulation. */
CV2XSIM_API cv2x_status cv2x_config_new(cv2x_config** out);
CV2XSIM_API cv2x_status cv2x_config_from_json(const char* text, cv2x_config** out);
CV2XSIM_API cv2x_status cv2x_config_load(const char* path, cv2x_config** out);
CV2XSIM_API cv2x_status cv2x_config_set(cv2x_config* cfg, const char* key, const char* value);
CV2XSIM_API cv2x_status cv2x_config_set_assignment(cv2x_config* cfg, const char* key_equals_value);
CV2XSIM_API cv2x_status cv2x_config_validate(const cv2x_config* cfg);
/* Validated config with every field filled; release with cv2x_string_free. */
CV2XSIM_API cv2x_status cv2x_config_to_json(const cv2x_config* cfg, char** out);
CV2XSIM_API void cv2x_config_free(cv2x_config* cfg);

/* One replication; replication_id selects the derived random streams. */
CV2XSIM_API cv2x_status cv2x_run_replication(const cv2x_config* cfg, uint64_t replication_id, cv2x_summary* out);

/* All configured replications. trace_path may be NULL; pooled may be NULL.
 * parallelism <= 0 means hardware concurrency. */
CV2XSIM_API cv2x_status cv2x_simulate(const cv2x_config* cfg, const char* trace_path, int parallelism,
                                      cv2x_table** out, cv2x_summary* pooled);

/* Built-in sweep presets. */
CV2XSIM_API size_t cv2x_preset_count(void);
CV2XSIM_API const char* cv2x_preset_name(size_t index);
CV2XSIM_API const char* cv2x_preset_description(size_t index);

CV2XSIM_API cv2x_status cv2x_sweep_preset(const char* name, cv2x_sweep** out);
CV2XSIM_API cv2x_status cv2x_sweep_load(const char* path, cv2x_sweep** out);
/* Overrides the sweep's base config (applied before variants and axis). */
CV2XSIM_API cv2x_status cv2x_sweep_set_assignment(cv2x_sweep* sweep, const char* key_equals_value);
CV2XSIM_API cv2x_status cv2x_sweep_set_replications(cv2x_sweep* sweep, int replications);
CV2XSIM_API cv2x_status cv2x_sweep_set_seed(cv2x_sweep* sweep, uint64_t master_seed);
CV2XSIM_API cv2x_status cv2x_sweep_run(const cv2x_sweep* sweep, int parallelism, cv2x_table** out);
CV2XSIM_API const char* cv2x_sweep_name(const cv2x_sweep* sweep);
CV2XSIM_API void cv2x_sweep_free(cv2x_sweep* sweep);

CV2XSIM_API size_t cv2x_table_row_count(const cv2x_table* table);
CV2XSIM_API cv2x_status cv2x_table_row(const cv2x_table* table, size_t index, cv2x_row* out);
CV2XSIM_API size_t cv2x_table_aggregate_count(const cv2x_table* table);
CV2XSIM_API cv2x_status cv2x_table_aggregate(const cv2x_table* table, size_t index, cv2x_aggregate* out);
/* format: "csv" (per-replication rows) or "json" (rows and aggregates). */
CV2XSIM_API cv2x_status cv2x_table_write(const cv2x_table* table, const char* format, const char* path);
CV2XSIM_API cv2x_status cv2x_table_write_aggregates(const cv2x_table* table, const char* path);
/* Rows as CSV text; release with cv2x_string_free. */
CV2XSIM_API cv2x_status cv2x_table_to_csv(const cv2x_table* table, char** out);
CV2XSIM_API void cv2x_table_free(cv2x_table* table);

#ifdef __cplusplus
}
#endif

#endif /* CV2XSIM_H */
