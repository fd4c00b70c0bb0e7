// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "boxmor/boxmor.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>

#include "errors.hpp"
#include "pipeline.hpp"

namespace {

thread_local std::string g_last_error;

void copy_out(const std::string& text, char* buf, size_t len) {
  if (!buf || len == 0) return;
  const size_t n = std::min(text.size(), len - 1);
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
}

boxmor::ParameterPoint to_point(const double* query, size_t len) {
  boxmor::ParameterPoint p(static_cast<Eigen::Index>(len));
  for (size_t i = 0; i < len; ++i) p[static_cast<Eigen::Index>(i)] = query[i];
  return p;
}

// Runs `fn`, translating exceptions into status codes + the thread message.
template <class Fn>
int guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return BOXMOR_OK;
  } catch (const boxmor::ConfigError& e) {
    g_last_error = e.what();
    return BOXMOR_ERR_CONFIG;
  } catch (const boxmor::NumericError& e) {
    g_last_error = e.what();
    return BOXMOR_ERR_NUMERIC;
  } catch (const std::filesystem::filesystem_error& e) {
    // Unusable paths are bad requests, not numerical breakdowns.
    g_last_error = e.what();
    return BOXMOR_ERR_CONFIG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BOXMOR_ERR_NUMERIC;
  }
}

int null_argument(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return BOXMOR_ERR_CONFIG;
}

}  // namespace

struct boxmor_config {
  boxmor::PipelineConfig cfg;
};

struct boxmor_artifact {
  explicit boxmor_artifact(boxmor::Artifact a) : artifact(std::move(a)) {}
  boxmor::Artifact artifact;
};

extern "C" {

const char* boxmor_version(void) { return "1.0.0"; }

const char* boxmor_last_error(void) { return g_last_error.c_str(); }

int boxmor_config_load(const char* path, boxmor_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new boxmor_config{boxmor::PipelineConfig::from_file(path)};
  });
}

int boxmor_config_parse(const char* json_text, boxmor_config** out) {
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new boxmor_config{boxmor::PipelineConfig::from_json_text(json_text)};
  });
}

int boxmor_config_set_output_dir(boxmor_config* config, const char* dir) {
  if (!config) return null_argument("config");
  if (!dir || !*dir) return null_argument("dir");
  return guarded([&] { config->cfg.output_dir = dir; });
}

int boxmor_config_output_dir(const boxmor_config* config, char* buf,
                             size_t len) {
  if (!config) return null_argument("config");
  return guarded([&] { copy_out(config->cfg.output_dir, buf, len); });
}

int boxmor_config_fingerprint(const boxmor_config* config, char* buf,
                              size_t len) {
  if (!config) return null_argument("config");
  return guarded([&] { copy_out(config->cfg.fingerprint(), buf, len); });
}

void boxmor_config_free(boxmor_config* config) { delete config; }

int boxmor_train(const boxmor_config* config, int workers) {
  if (!config) return null_argument("config");
  return guarded([&] { boxmor::train(config->cfg, std::max(1, workers)); });
}

int boxmor_artifact_open(const char* dir, boxmor_artifact** out) {
  if (!dir) return null_argument("dir");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new boxmor_artifact(boxmor::Artifact::open(dir));
  });
}

void boxmor_artifact_close(boxmor_artifact* artifact) { delete artifact; }

int boxmor_artifact_info(const boxmor_artifact* artifact, int* full_order,
                         int* outputs, int* dims, char* fingerprint_buf,
                         size_t fingerprint_len) {
  if (!artifact) return null_argument("artifact");
  return guarded([&] {
    if (full_order) *full_order = artifact->artifact.full_order();
    if (outputs) *outputs = artifact->artifact.outputs();
    if (dims)
      *dims = static_cast<int>(artifact->artifact.config().axes.size());
    copy_out(artifact->artifact.fingerprint(), fingerprint_buf,
             fingerprint_len);
  });
}

int boxmor_evaluate(boxmor_artifact* artifact, const double* query,
                    size_t query_len, const char* out_dir, int with_reference,
                    double dt_override, double t_end_override,
                    double* aggregate_error) {
  if (!artifact) return null_argument("artifact");
  if (!query && query_len > 0) return null_argument("query");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const boxmor::EvaluateResult result = artifact->artifact.evaluate(
        to_point(query, query_len), out_dir, with_reference != 0, dt_override,
        t_end_override);
    if (aggregate_error) *aggregate_error = result.aggregate_error;
  });
}

int boxmor_surface(boxmor_artifact* artifact, const char* out_dir, int workers,
                   unsigned long long seed_override, double* mean_error,
                   int* failures) {
  if (!artifact) return null_argument("artifact");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const auto rows = artifact->artifact.surface(out_dir, std::max(1, workers),
                                                 seed_override);
    int failed = 0;
    double sum = 0.0;
    for (const auto& row : rows) {
      if (std::isnan(row.value))
        ++failed;
      else
        sum += row.value;
    }
    const auto valid = static_cast<int>(rows.size()) - failed;
    if (mean_error)
      *mean_error = valid > 0 ? sum / valid
                              : std::numeric_limits<double>::quiet_NaN();
    if (failures) *failures = failed;
  });
}

int boxmor_bench(const boxmor_config* config, const char* out_dir,
                 int repetitions, double* speedup,
                 long long* break_even_steps) {
  if (!config) return null_argument("config");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const boxmor::TimingReport report =
        boxmor::bench(config->cfg, out_dir, repetitions);
    if (speedup) *speedup = report.speedup;
    if (break_even_steps) *break_even_steps = report.break_even_steps;
  });
}

int boxmor_export_fom(const boxmor_config* config, const double* query,
                      size_t query_len, const char* out_dir) {
  if (!config) return null_argument("config");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    boxmor::ParameterPoint at;
    if (query && query_len > 0) at = to_point(query, query_len);
    boxmor::export_fom(config->cfg, at, out_dir);
  });
}

}  // extern "C"
