// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "fom.hpp"
#include "interpolation.hpp"
#include "krylov.hpp"
#include "metrics.hpp"
#include "param_space.hpp"
#include "time_integration.hpp"

namespace boxmor {

// Which full-order model the pipeline builds per training point. Imported
// systems are fixed (no parameter bindings), so their training grid must be
// a single point.
struct FomConfig {
  enum class Kind { Beam, Lattice, Import };
  Kind kind = Kind::Beam;
  BeamSpec beam;
  LatticeSpec lattice;
  std::string import_dir;
};

struct IntegrationConfig {
  double dt = 0.0;
  double t_end = 0.0;
  LoadSignal signal;
};

struct ValidationConfig {
  enum class Kind { Grid, Lhs };
  Kind kind = Kind::Lhs;
  std::vector<std::vector<double>> axes;  // grid: one list per dimension
  int count = 20;                         // lhs
  std::uint64_t seed = 1;
};

struct MetricConfig {
  enum class Kind { Nrmse, Msre };
  Kind kind = Kind::Nrmse;
  // NRMSE normalization DoF; -1 picks the model default (beam tip).
  int dof = -1;
  // MSRE mask: lattice body id, or -1 for every DoF.
  int mask_body = -1;
};

// Parsed, validated run description. `canonical()` serializes every
// semantic field (defaults resolved, keys sorted) — the string hashed into
// the artifact fingerprint; output directory and worker counts are
// execution details and excluded.
struct PipelineConfig {
  FomConfig fom;
  std::vector<std::vector<double>> axes;
  std::vector<std::string> axis_names;
  std::vector<std::string> bindings;  // one FOM scalar target per axis
  int r = 0;
  double s0 = 0.0;
  Strategy strategy;
  IntegrationConfig integration;
  ValidationConfig validation;
  MetricConfig metric;
  std::string output_dir = "boxmor_out";

  static PipelineConfig from_file(const std::string& path);
  static PipelineConfig from_json_text(const std::string& text);

  TrainingGrid grid() const;
  FomFactory factory() const;
  std::string canonical() const;
  std::string fingerprint() const;  // 16 hex digits, FNV-1a of canonical()

  std::vector<ParameterPoint> validation_points(
      std::uint64_t seed_override = 0) const;
  // Resolved NRMSE normalization DoF (n = full-order dimension).
  int metric_dof(int n) const;
  // Resolved MSRE mask; empty = all DoFs.
  std::vector<int> metric_mask() const;
};

struct TrainSummary {
  std::string dir;
  std::string fingerprint;
  int points = 0;
  int sets = 0;
  double reduction_s = 0.0;
  double basis_change_s = 0.0;
};

// Offline stage: reduces every training point, runs the configured basis
// changes, and persists the artifact into config.output_dir. The manifest
// is deterministic (stage timings go to a separate timings.json).
TrainSummary train(const PipelineConfig& config, int workers = 1);

struct EvaluateResult {
  TransientSolution reduced;
  double aggregate_error = std::numeric_limits<double>::quiet_NaN();
  bool has_reference = false;
};

// A trained model restored from disk. Self-contained: the manifest embeds
// the semantic config, so evaluation and validation runs need no other
// input. Artifacts trimmed down to their basis-change sets (points/ removed)
// still evaluate anywhere a stored set applies, and fail with a diagnostic
// where a new set would be needed.
class Artifact {
public:
  static Artifact open(const std::string& dir);

  const std::string& dir() const { return dir_; }
  const PipelineConfig& config() const { return config_; }
  const std::string& fingerprint() const { return fingerprint_; }
  int full_order() const { return n_; }
  int outputs() const { return m_; }
  InterpolationEngine& engine() { return *engine_; }

  // Interpolates and integrates at `query`; writes trajectory.csv and
  // summary.json (plus reference.csv and error.csv when a full-order
  // reference run is requested) into out_dir. Non-positive overrides fall
  // back to the configured integration.
  EvaluateResult evaluate(const ParameterPoint& query,
                          const std::string& out_dir, bool with_reference,
                          double dt_override = 0.0, double t_end_override = 0.0);

  // Error per configured validation point against the full-order model;
  // writes surface.csv and surface_summary.json into out_dir.
  std::vector<SurfaceRow> surface(const std::string& out_dir, int workers = 1,
                                  std::uint64_t seed_override = 0);

  // Aggregate configured metric of a reduced solution vs its reference.
  double aggregate_error(const TransientSolution& reference,
                         const TransientSolution& full_predicted) const;

private:
  Artifact() = default;

  std::string dir_;
  PipelineConfig config_;
  std::string fingerprint_;
  SystemKind kind_ = SystemKind::FirstOrder;
  int n_ = 0;
  int m_ = 0;
  std::unique_ptr<InterpolationEngine> engine_;
};

// Offline/online cost measurement at the hull midpoint: every stage is
// repeated `repetitions` times and the median taken. Online per-step cost
// is the reduced transient solve (stepping plus reduced outputs) divided by
// the step count; interpolation setup and full-field back-projection are
// per-evaluation costs outside it. Writes timing.json into out_dir.
TimingReport bench(const PipelineConfig& config, const std::string& out_dir,
                   int repetitions = 5);

// Writes the full-order system at `query` (empty: first training point)
// in exchange format into out_dir.
void export_fom(const PipelineConfig& config, const ParameterPoint& query,
                const std::string& out_dir);

}  // namespace boxmor
