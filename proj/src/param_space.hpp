// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace boxmor {

using ParameterPoint = Eigen::VectorXd;

// Rectilinear training grid: one strictly increasing axis per design
// dimension. Point indices are row-major with the first axis varying
// fastest: a 2-D grid enumerates (x0,y0), (x1,y0), ..., (x0,y1), (x1,y1), ...
class TrainingGrid {
public:
  TrainingGrid(std::vector<std::vector<double>> axes,
               std::vector<std::string> names = {});

  int dims() const { return static_cast<int>(axes_.size()); }
  int size() const { return size_; }
  const std::vector<double>& axis(int dim) const { return axes_.at(dim); }
  const std::vector<std::string>& names() const { return names_; }

  ParameterPoint point(int index) const;
  std::vector<ParameterPoint> points() const;
  std::vector<int> multi_index(int index) const;
  int point_index(const std::vector<int>& multi) const;

  // Axis-aligned hull (lo, hi) spanned by the grid.
  std::pair<ParameterPoint, ParameterPoint> hull() const;
  bool contains(const ParameterPoint& query) const;

  // Number of grid cells, prod(axis_len - 1).
  int cell_count() const;
  // Lower-corner multi-index of cell `cell` (cells indexed first axis
  // fastest, like points).
  std::vector<int> cell_lower_corner(int cell) const;

  std::string to_csv() const;

private:
  std::vector<std::vector<double>> axes_;
  std::vector<std::string> names_;
  int size_ = 0;
};

// Bracketing grid box around a query point. In a degenerate dimension
// (query on a grid value) lo == hi and the corner set collapses, so
// corner_indices has 2^q entries for q non-degenerate dimensions.
struct ParameterBox {
  ParameterPoint lo;
  ParameterPoint hi;
  std::vector<int> corner_indices;  // ascending training-point indices
};

// Per-dimension nearest smaller / nearest larger grid values around the
// query; exact hits (within 1e-12 of the axis range) collapse a dimension.
// Throws ConfigError for queries outside the hull. No coordinate
// normalization is involved, so the selection is invariant under per-axis
// affine rescaling.
ParameterBox box_corners(const TrainingGrid& grid, const ParameterPoint& query);

enum class Normalization { None, MinMax, ZScore };

// Indices of the k nearest points by Euclidean distance, optionally after
// per-dimension normalization derived from the point set itself. Ties are
// broken toward the lower point index. Result is ordered by (distance,
// index).
std::vector<int> knn_select(const std::vector<ParameterPoint>& points,
                            const ParameterPoint& query, int k,
                            Normalization normalization = Normalization::None);

// Latin hypercube sampling over [lo, hi]: per dimension, each of `count`
// equal-width strata receives exactly one sample, placed at the stratum
// midpoint plus a uniform jitter. Deterministic for a given seed.
std::vector<ParameterPoint> sample_lhs(const ParameterPoint& lo,
                                       const ParameterPoint& hi, int count,
                                       std::uint64_t seed);

}  // namespace boxmor
