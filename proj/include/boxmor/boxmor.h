/* Copyright (c) 2026 the boxmor authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the boxmor parametric model-reduction library.
 *
 * Every fallible call returns a status code and leaves a human-readable
 * message for the calling thread in boxmor_last_error(). Handles are opaque;
 * free them with the matching *_free / *_close call. String results are
 * copied into caller-supplied buffers and always NUL-terminated (truncated
 * if the buffer is too small).
 */
#ifndef BOXMOR_H
#define BOXMOR_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(BOXMOR_BUILD)
#define BOXMOR_API __declspec(dllexport)
#else
#define BOXMOR_API __declspec(dllimport)
#endif
#else
#define BOXMOR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; also used verbatim as process exit codes by the CLI. */
enum {
  BOXMOR_OK = 0,          /* success */
  BOXMOR_ERR_CONFIG = 2,  /* invalid configuration, file, or request */
  BOXMOR_ERR_NUMERIC = 3  /* numerical failure inside a stage */
};

/* A parsed, validated study configuration. */
typedef struct boxmor_config boxmor_config;
/* A trained artifact directory opened for evaluation. */
typedef struct boxmor_artifact boxmor_artifact;

/* Library version as "major.minor.patch". */
BOXMOR_API const char* boxmor_version(void);

/* Message from the most recent failing call on this thread, "" if none. */
BOXMOR_API const char* boxmor_last_error(void);

/* ---- configuration ----------------------------------------------------- */

BOXMOR_API int boxmor_config_load(const char* path, boxmor_config** out);
BOXMOR_API int boxmor_config_parse(const char* json_text, boxmor_config** out);

/* Redirects where training writes its artifact (command-line --out). */
BOXMOR_API int boxmor_config_set_output_dir(boxmor_config* config,
                                            const char* dir);

/* Output directory currently configured for the study. */
BOXMOR_API int boxmor_config_output_dir(const boxmor_config* config, char* buf,
                                        size_t len);

/* 16-hex-digit digest of the semantic configuration (storage paths and
 * worker counts do not participate). */
BOXMOR_API int boxmor_config_fingerprint(const boxmor_config* config,
                                         char* buf, size_t len);

BOXMOR_API void boxmor_config_free(boxmor_config* config);

/* ---- offline stage ------------------------------------------------------ */

/* Reduces every training point, builds the interpolation sets, and persists
 * the artifact into the configured output directory. `workers` bounds the
 * threads used for independent per-point work (minimum 1). */
BOXMOR_API int boxmor_train(const boxmor_config* config, int workers);

/* ---- online stage -------------------------------------------------------- */

BOXMOR_API int boxmor_artifact_open(const char* dir, boxmor_artifact** out);
BOXMOR_API void boxmor_artifact_close(boxmor_artifact* artifact);

/* Any of the outputs may be NULL when not wanted. `full_order` is the
 * original state dimension, `outputs` the number of observed quantities,
 * `dims` the number of design parameters. */
BOXMOR_API int boxmor_artifact_info(const boxmor_artifact* artifact,
                                    int* full_order, int* outputs, int* dims,
                                    char* fingerprint_buf,
                                    size_t fingerprint_len);

/* Interpolates a reduced system at `query` (length `query_len`), simulates
 * it, and writes trajectory files into `out_dir`. With `with_reference`
 * nonzero the full-order model is solved too and the configured error
 * metric is computed; the aggregate lands in *aggregate_error (may be
 * NULL). Pass dt_override/t_end_override <= 0 to keep the configured
 * values. */
BOXMOR_API int boxmor_evaluate(boxmor_artifact* artifact, const double* query,
                               size_t query_len, const char* out_dir,
                               int with_reference, double dt_override,
                               double t_end_override, double* aggregate_error);

/* Sweeps the configured validation design, writing surface.csv and a JSON
 * summary into `out_dir`. `seed_override` replaces the configured sampling
 * seed when nonzero. Per-point failures are recorded in the table, not
 * returned as errors; *failures (may be NULL) receives their count and
 * *mean_error (may be NULL) the mean over the successful points. */
BOXMOR_API int boxmor_surface(boxmor_artifact* artifact, const char* out_dir,
                              int workers, unsigned long long seed_override,
                              double* mean_error, int* failures);

/* ---- benchmarking and interchange ---------------------------------------- */

/* Times the offline stages and the per-step cost of the full-order and
 * reduced simulations at the centre of the training hull, writing
 * timing.json into `out_dir`. Medians over `repetitions` runs. */
BOXMOR_API int boxmor_bench(const boxmor_config* config, const char* out_dir,
                            int repetitions, double* speedup,
                            long long* break_even_steps);

/* Assembles the full-order system at `query` (NULL/0 for the first training
 * point) and writes it as Matrix Market files plus a manifest. */
BOXMOR_API int boxmor_export_fom(const boxmor_config* config,
                                 const double* query, size_t query_len,
                                 const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* BOXMOR_H */
