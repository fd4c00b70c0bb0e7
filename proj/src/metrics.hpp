// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "param_space.hpp"
#include "time_integration.hpp"

namespace boxmor {

// Per-step error curve plus its time mean.
struct ErrorSeries {
  Eigen::VectorXd times;
  Eigen::VectorXd values;
  double aggregate = 0.0;
};

// Space-RMS error per step, normalized by the reference output at the
// normalization DoF: sqrt(sum_i (u_s - u_r)^2 / n) / |u_s[dof]|. The
// denominator is floored at 1e-3 of the DoF's trajectory maximum so zero
// crossings do not blow up the series.
ErrorSeries nrmse(const TransientSolution& reference,
                  const TransientSolution& predicted, int normalization_dof);

// RMS of entrywise relative errors per step over the masked DoFs:
// sqrt(mean_i ((u_s - u_r) / u_s)^2), denominators floored at 1e-9 of the
// masked trajectory maximum. Empty mask = all DoFs.
ErrorSeries msre(const TransientSolution& reference,
                 const TransientSolution& predicted,
                 const std::vector<int>& mask = {});

// One validation point of an error surface; a failed evaluation records the
// diagnostic instead of aborting the sweep.
struct SurfaceRow {
  ParameterPoint mu;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

std::vector<SurfaceRow> error_surface(
    const std::vector<ParameterPoint>& points,
    const std::function<double(const ParameterPoint&)>& point_error,
    int workers = 1);

std::string surface_to_csv(const std::vector<SurfaceRow>& rows,
                           const std::vector<std::string>& names);

// Offline/online cost summary. break_even_steps is the smallest step count
// N with offline + N * online <= N * fom; -1 means the reduced model never
// amortizes (online >= fom per step).
struct TimingReport {
  double reduction_s = 0.0;
  double basis_change_s = 0.0;
  double offline_total_s = 0.0;
  double online_per_step_s = 0.0;
  double fom_per_step_s = 0.0;
  double speedup = 0.0;
  std::int64_t break_even_steps = -1;
};

std::int64_t break_even(double offline_s, double online_per_step_s,
                        double fom_per_step_s);

double median(std::vector<double> samples);

// Monotonic wall-clock stopwatch.
class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }
  void reset() { start_ = std::chrono::steady_clock::now(); }

private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace boxmor
