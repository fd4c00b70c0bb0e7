// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library exclusively through the
// public C interface; exit codes mirror its status codes (0 ok, 2 bad
// configuration or request, 3 numerical failure).

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <boxmor/boxmor.h>

namespace {

struct ConfigHandle {
  boxmor_config* ptr = nullptr;
  ~ConfigHandle() { boxmor_config_free(ptr); }
};

struct ArtifactHandle {
  boxmor_artifact* ptr = nullptr;
  ~ArtifactHandle() { boxmor_artifact_close(ptr); }
};

int report_failure(int status) {
  std::fprintf(stderr, "error: %s\n", boxmor_last_error());
  return status;
}

// "v1,v2,..." -> numbers; leaves `ok` false on any malformed entry.
std::vector<double> parse_query(const std::string& text, bool& ok) {
  std::vector<double> values;
  ok = false;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find(',', begin);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(begin, end - begin);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(item[used])) ++used;
      if (used != item.size()) return values;
    } catch (const std::exception&) {
      return values;
    }
    begin = end + 1;
  }
  ok = !values.empty();
  return values;
}

int load_config(const std::string& path, const std::string& out_dir,
                ConfigHandle& config) {
  if (const int rc = boxmor_config_load(path.c_str(), &config.ptr))
    return report_failure(rc);
  if (!out_dir.empty())
    if (const int rc = boxmor_config_set_output_dir(config.ptr, out_dir.c_str()))
      return report_failure(rc);
  return BOXMOR_OK;
}

// The workspace is where train persists and the other commands look for the
// artifact: --out when given, the configured output_dir otherwise.
std::string workspace_of(const ConfigHandle& config) {
  char buf[4096] = {0};
  boxmor_config_output_dir(config.ptr, buf, sizeof buf);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric model reduction with box-wise interpolation"};
  app.set_version_flag("--version", std::string(boxmor_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string query_text;
  bool with_reference = false;
  int workers = 1;
  unsigned long long seed = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Study configuration (JSON)")
        ->required();
    cmd->add_option("--out", out_dir,
                    "Workspace directory (defaults to the configured "
                    "output_dir)");
  };

  CLI::App* train = app.add_subcommand(
      "train", "Reduce all training points and persist the artifact");
  add_common(train);
  train->add_option("--workers", workers, "Threads for independent work");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Interpolate and simulate the reduced model at a point");
  add_common(evaluate);
  evaluate->add_option("--query", query_text, "Parameter point \"v1,v2,...\"")
      ->required();
  evaluate->add_flag("--reference", with_reference,
                     "Also solve the full-order model and report the error");

  CLI::App* surface = app.add_subcommand(
      "surface", "Sweep the validation design and tabulate errors");
  add_common(surface);
  surface->add_option("--workers", workers, "Threads for independent work");
  surface->add_option("--seed", seed,
                      "Override the sampling seed for LHS validation");

  CLI::App* bench = app.add_subcommand(
      "bench", "Time offline and online stages against the full model");
  add_common(bench);

  CLI::App* export_fom = app.add_subcommand(
      "export-fom", "Write the assembled full-order system to files");
  add_common(export_fom);
  export_fom->add_option("--query", query_text,
                         "Parameter point (defaults to the first grid point)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ConfigHandle config;
  if (const int rc = load_config(config_path, out_dir, config)) return rc;
  const std::string workspace = workspace_of(config);

  char fingerprint[32] = {0};
  boxmor_config_fingerprint(config.ptr, fingerprint, sizeof fingerprint);

  if (train->parsed()) {
    if (const int rc = boxmor_train(config.ptr, workers))
      return report_failure(rc);
    std::printf("trained %s (fingerprint %s)\n", workspace.c_str(), fingerprint);
    return 0;
  }

  if (bench->parsed()) {
    double speedup = 0.0;
    long long break_even = -1;
    if (const int rc =
            boxmor_bench(config.ptr, workspace.c_str(), 5, &speedup, &break_even))
      return report_failure(rc);
    std::printf("speedup: %.3gx per step\n", speedup);
    if (break_even >= 0)
      std::printf("break-even: %lld steps\n", break_even);
    else
      std::printf("break-even: never (reduced step not faster)\n");
    std::printf("report: %s/timing.json\n", workspace.c_str());
    return 0;
  }

  if (export_fom->parsed()) {
    bool ok = true;
    std::vector<double> query;
    if (!query_text.empty()) {
      query = parse_query(query_text, ok);
      if (!ok) {
        std::fprintf(stderr,
                     "error: --query must be a comma-separated list of numbers\n");
        return 2;
      }
    }
    const std::string dir = workspace + "/fom";
    if (const int rc = boxmor_export_fom(
            config.ptr, query.empty() ? nullptr : query.data(), query.size(),
            dir.c_str()))
      return report_failure(rc);
    std::printf("exported %s\n", dir.c_str());
    return 0;
  }

  // evaluate and surface read a previously trained artifact.
  ArtifactHandle artifact;
  if (const int rc = boxmor_artifact_open(workspace.c_str(), &artifact.ptr))
    return report_failure(rc);

  if (evaluate->parsed()) {
    bool ok = false;
    const std::vector<double> query = parse_query(query_text, ok);
    if (!ok) {
      std::fprintf(stderr,
                   "error: --query must be a comma-separated list of numbers\n");
      return 2;
    }
    const std::string dir = workspace + "/evaluate";
    double aggregate = 0.0;
    if (const int rc =
            boxmor_evaluate(artifact.ptr, query.data(), query.size(),
                            dir.c_str(), with_reference ? 1 : 0, 0.0, 0.0,
                            &aggregate))
      return report_failure(rc);
    if (with_reference) std::printf("aggregate error: %.6g\n", aggregate);
    std::printf("wrote %s\n", dir.c_str());
    return 0;
  }

  if (surface->parsed()) {
    const std::string dir = workspace + "/surface";
    double mean = 0.0;
    int failures = 0;
    if (const int rc = boxmor_surface(artifact.ptr, dir.c_str(), workers, seed,
                                      &mean, &failures))
      return report_failure(rc);
    std::printf("mean error: %.6g (%d failed points)\n", mean, failures);
    std::printf("wrote %s/surface.csv\n", dir.c_str());
    return 0;
  }

  return 2;  // unreachable: a subcommand is required
}
