#pragma once

/* C interface to the noncross shared library. Opaque handle, status codes,
 * and a thread-local message for the most recent failure. Every function is
 * safe to call from C; no exceptions cross this boundary. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ncx_experiment ncx_experiment;

typedef enum ncx_status {
  NCX_OK = 0,
  NCX_ERR_CONFIG = 1,
  NCX_ERR_DIMENSION = 2,
  NCX_ERR_CONTRACT = 3,
  NCX_ERR_INDEX = 4,
  NCX_ERR_NUMERIC = 5,
  NCX_ERR_IO = 6,
  NCX_ERR_DIVERGED = 7,
  NCX_ERR_UNKNOWN = 8
} ncx_status;

/* Stable short name for a status code, e.g. "config". Never NULL. */
const char* ncx_status_name(ncx_status s);

/* Message of the most recent failure on this thread; empty string if none. */
const char* ncx_last_error(void);

/* Load a config file (JSON) and validate it. On success *out owns the
 * experiment and must be released with ncx_experiment_close. */
ncx_status ncx_experiment_open(const char* config_path, ncx_experiment** out);

/* Same, but parse the config from an in-memory JSON string. */
ncx_status ncx_experiment_open_json(const char* json_text, ncx_experiment** out);

/* NULL is accepted and ignored. */
void ncx_experiment_close(ncx_experiment* e);

/* Override the config's seed or output directory before running verbs. */
ncx_status ncx_set_seed(ncx_experiment* e, unsigned long long seed);
ncx_status ncx_set_out_dir(ncx_experiment* e, const char* out_dir);

/* Canonical config digest: 16 hex characters plus a terminating NUL, so buf
 * must hold at least 17 bytes. */
ncx_status ncx_config_hash(const ncx_experiment* e, char* buf, size_t buf_len);

/* Pipeline verbs. train writes checkpoints and logs; sample and eval load the
 * trained checkpoints and write samples.csv / metrics.{csv,json}; sweep runs
 * train + sample + eval + plot; probe writes the continuity probe artifacts;
 * plot renders SVGs from artifacts already on disk. */
ncx_status ncx_run_train(ncx_experiment* e);
ncx_status ncx_run_sample(ncx_experiment* e);
ncx_status ncx_run_eval(ncx_experiment* e);
ncx_status ncx_run_sweep(ncx_experiment* e);
ncx_status ncx_run_probe(ncx_experiment* e);
ncx_status ncx_run_plot(ncx_experiment* e);

#ifdef __cplusplus
} /* extern "C" */
#endif
