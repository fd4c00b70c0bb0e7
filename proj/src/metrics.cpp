// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"

namespace boxmor {

namespace {

void check_aligned(const TransientSolution& reference,
                   const TransientSolution& predicted) {
  if (reference.states.cols() != predicted.states.cols() ||
      reference.states.rows() != predicted.states.rows())
    throw ConfigError("reference and predicted trajectories have different shapes");
  if (reference.times.size() != predicted.times.size() ||
      (reference.times - predicted.times).cwiseAbs().maxCoeff() >
          1e-12 * std::max(1.0, reference.times.cwiseAbs().maxCoeff()))
    throw ConfigError("reference and predicted time grids are misaligned");
}

}  // namespace

ErrorSeries nrmse(const TransientSolution& reference,
                  const TransientSolution& predicted, int normalization_dof) {
  check_aligned(reference, predicted);
  const Eigen::Index n = reference.states.rows();
  const Eigen::Index steps = reference.states.cols();
  if (normalization_dof < 0 || normalization_dof >= n)
    throw ConfigError("normalization DoF out of range");

  const double peak =
      reference.states.row(normalization_dof).cwiseAbs().maxCoeff();
  if (!(peak > 0.0))
    throw NumericError("reference trajectory is identically zero at the normalization DoF");
  const double floor = 1e-3 * peak;

  ErrorSeries series;
  series.times = reference.times;
  series.values.resize(steps);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const double rms =
        std::sqrt((reference.states.col(k) - predicted.states.col(k))
                      .squaredNorm() /
                  static_cast<double>(n));
    const double den =
        std::max(std::abs(reference.states(normalization_dof, k)), floor);
    series.values[k] = rms / den;
  }
  series.aggregate = series.values.mean();
  return series;
}

ErrorSeries msre(const TransientSolution& reference,
                 const TransientSolution& predicted,
                 const std::vector<int>& mask) {
  check_aligned(reference, predicted);
  const Eigen::Index n = reference.states.rows();
  const Eigen::Index steps = reference.states.cols();

  std::vector<int> dofs = mask;
  if (dofs.empty()) {
    dofs.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) dofs[i] = static_cast<int>(i);
  }
  for (int dof : dofs)
    if (dof < 0 || dof >= n) throw ConfigError("mask DoF out of range");

  double peak = 0.0;
  for (int dof : dofs)
    peak = std::max(peak, reference.states.row(dof).cwiseAbs().maxCoeff());
  if (!(peak > 0.0))
    throw NumericError("reference trajectory is identically zero on the mask");
  const double floor = 1e-9 * peak;

  ErrorSeries series;
  series.times = reference.times;
  series.values.resize(steps);
  for (Eigen::Index k = 0; k < steps; ++k) {
    double sum = 0.0;
    for (int dof : dofs) {
      const double den = std::max(std::abs(reference.states(dof, k)), floor);
      const double rel = (reference.states(dof, k) - predicted.states(dof, k)) / den;
      sum += rel * rel;
    }
    series.values[k] = std::sqrt(sum / static_cast<double>(dofs.size()));
  }
  series.aggregate = series.values.mean();
  return series;
}

std::vector<SurfaceRow> error_surface(
    const std::vector<ParameterPoint>& points,
    const std::function<double(const ParameterPoint&)>& point_error,
    int workers) {
  std::vector<SurfaceRow> rows(points.size());
  parallel_for(static_cast<int>(points.size()), workers, [&](int i) {
    rows[i].mu = points[i];
    try {
      rows[i].value = point_error(points[i]);
    } catch (const std::exception& e) {
      rows[i].note = e.what();  // recorded, not fatal
    }
  });
  return rows;
}

std::string surface_to_csv(const std::vector<SurfaceRow>& rows,
                           const std::vector<std::string>& names) {
  std::ostringstream out;
  for (const auto& name : names) out << name << ',';
  out << "error,note\n";
  char buf[40];
  for (const auto& row : rows) {
    if (row.mu.size() != static_cast<Eigen::Index>(names.size()))
      throw ConfigError("surface row has " + std::to_string(row.mu.size()) +
                        " coordinates but " + std::to_string(names.size()) +
                        " column names were given");
    for (Eigen::Index d = 0; d < row.mu.size(); ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", row.mu[d]);
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", row.value);
    out << buf << ',';
    std::string note = row.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    out << note << '\n';
  }
  return out.str();
}

std::int64_t break_even(double offline_s, double online_per_step_s,
                        double fom_per_step_s) {
  if (offline_s <= 0.0) return 0;
  if (online_per_step_s >= fom_per_step_s) return -1;  // never amortizes
  return static_cast<std::int64_t>(
      std::ceil(offline_s / (fom_per_step_s - online_per_step_s)));
}

double median(std::vector<double> samples) {
  if (samples.empty()) throw ConfigError("median of an empty sample set");
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  if (samples.size() % 2 == 1) return samples[mid];
  return 0.5 * (samples[mid - 1] + samples[mid]);
}

}  // namespace boxmor
