// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "param_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "errors.hpp"

namespace boxmor {

namespace {

// Exact-hit tolerance for axis comparisons, relative to the axis range.
double axis_eps(const std::vector<double>& axis) {
  const double range = axis.back() - axis.front();
  if (range > 0.0) return 1e-12 * range;
  return 1e-12 * std::max(1.0, std::abs(axis.front()));
}

// Portable uniform draw in [0, 1); mt19937_64 output is identical across
// platforms, unlike std::uniform_real_distribution.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased draw in [0, bound) via rejection.
int next_below(std::mt19937_64& rng, int bound) {
  const auto b = static_cast<std::uint64_t>(bound);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<int>(x % b);
}

}  // namespace

TrainingGrid::TrainingGrid(std::vector<std::vector<double>> axes,
                           std::vector<std::string> names)
    : axes_(std::move(axes)), names_(std::move(names)) {
  if (axes_.empty()) throw ConfigError("training grid needs at least one axis");
  size_ = 1;
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const auto& axis = axes_[d];
    if (axis.empty())
      throw ConfigError("training grid axis " + std::to_string(d + 1) +
                        " is empty");
    for (std::size_t i = 1; i < axis.size(); ++i)
      if (!(axis[i] > axis[i - 1]))
        throw ConfigError("training grid axis " + std::to_string(d + 1) +
                          " must be strictly increasing");
    size_ *= static_cast<int>(axis.size());
  }
  if (names_.empty())
    for (std::size_t d = 0; d < axes_.size(); ++d)
      names_.push_back("x" + std::to_string(d + 1));
  if (names_.size() != axes_.size())
    throw ConfigError("axis name count does not match axis count");
}

ParameterPoint TrainingGrid::point(int index) const {
  const auto multi = multi_index(index);
  ParameterPoint p(dims());
  for (int d = 0; d < dims(); ++d) p[d] = axes_[d][multi[d]];
  return p;
}

std::vector<ParameterPoint> TrainingGrid::points() const {
  std::vector<ParameterPoint> out;
  out.reserve(size_);
  for (int i = 0; i < size_; ++i) out.push_back(point(i));
  return out;
}

std::vector<int> TrainingGrid::multi_index(int index) const {
  if (index < 0 || index >= size_)
    throw ConfigError("grid point index " + std::to_string(index) +
                      " out of range");
  std::vector<int> multi(dims());
  for (int d = 0; d < dims(); ++d) {
    const int len = static_cast<int>(axes_[d].size());
    multi[d] = index % len;
    index /= len;
  }
  return multi;
}

int TrainingGrid::point_index(const std::vector<int>& multi) const {
  if (static_cast<int>(multi.size()) != dims())
    throw ConfigError("multi-index dimension mismatch");
  int index = 0;
  int stride = 1;
  for (int d = 0; d < dims(); ++d) {
    const int len = static_cast<int>(axes_[d].size());
    if (multi[d] < 0 || multi[d] >= len)
      throw ConfigError("multi-index out of range in dimension " +
                        std::to_string(d + 1));
    index += multi[d] * stride;
    stride *= len;
  }
  return index;
}

std::pair<ParameterPoint, ParameterPoint> TrainingGrid::hull() const {
  ParameterPoint lo(dims()), hi(dims());
  for (int d = 0; d < dims(); ++d) {
    lo[d] = axes_[d].front();
    hi[d] = axes_[d].back();
  }
  return {lo, hi};
}

bool TrainingGrid::contains(const ParameterPoint& query) const {
  if (query.size() != dims()) return false;
  for (int d = 0; d < dims(); ++d) {
    const double eps = axis_eps(axes_[d]);
    if (query[d] < axes_[d].front() - eps || query[d] > axes_[d].back() + eps)
      return false;
  }
  return true;
}

int TrainingGrid::cell_count() const {
  int count = 1;
  for (const auto& axis : axes_)
    count *= std::max(0, static_cast<int>(axis.size()) - 1);
  return count;
}

std::vector<int> TrainingGrid::cell_lower_corner(int cell) const {
  const int total = cell_count();
  if (cell < 0 || cell >= total)
    throw ConfigError("grid cell index " + std::to_string(cell) +
                      " out of range");
  std::vector<int> multi(dims());
  for (int d = 0; d < dims(); ++d) {
    const int cells = static_cast<int>(axes_[d].size()) - 1;
    multi[d] = cell % cells;
    cell /= cells;
  }
  return multi;
}

std::string TrainingGrid::to_csv() const {
  std::ostringstream out;
  out << "index";
  for (const auto& name : names_) out << ',' << name;
  out << '\n';
  char buf[32];
  for (int i = 0; i < size_; ++i) {
    const auto p = point(i);
    out << i;
    for (int d = 0; d < dims(); ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[d]);
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

ParameterBox box_corners(const TrainingGrid& grid, const ParameterPoint& query) {
  if (query.size() != grid.dims())
    throw ConfigError("query dimension " + std::to_string(query.size()) +
                      " does not match grid dimension " +
                      std::to_string(grid.dims()));

  const int p = grid.dims();
  ParameterBox box;
  box.lo.resize(p);
  box.hi.resize(p);
  // Per-dimension axis positions of the bracketing values (one entry when
  // the dimension is degenerate).
  std::vector<std::vector<int>> slots(p);
  for (int d = 0; d < p; ++d) {
    const auto& axis = grid.axis(d);
    const double eps = axis_eps(axis);
    const double q = query[d];
    if (q < axis.front() - eps || q > axis.back() + eps)
      throw ConfigError("query coordinate " + std::to_string(q) +
                        " lies outside the training hull in dimension " +
                        std::to_string(d + 1) + "; no extrapolation");

    const auto it = std::upper_bound(axis.begin(), axis.end(), q);
    int hi = static_cast<int>(it - axis.begin());
    int lo = hi - 1;
    if (hi >= static_cast<int>(axis.size())) hi = lo;  // at/above last value
    if (lo < 0) lo = hi;                               // at/below first value
    if (std::abs(q - axis[lo]) <= eps)
      slots[d] = {lo};
    else if (std::abs(q - axis[hi]) <= eps)
      slots[d] = {hi};
    else
      slots[d] = {lo, hi};
    box.lo[d] = axis[slots[d].front()];
    box.hi[d] = axis[slots[d].back()];
  }

  // Cartesian product of the per-dimension slots.
  std::vector<std::vector<int>> multis(1);
  multis[0].reserve(p);
  for (int d = 0; d < p; ++d) {
    std::vector<std::vector<int>> next;
    next.reserve(multis.size() * slots[d].size());
    for (const auto& m : multis)
      for (int s : slots[d]) {
        auto copy = m;
        copy.push_back(s);
        next.push_back(std::move(copy));
      }
    multis = std::move(next);
  }
  for (const auto& m : multis) box.corner_indices.push_back(grid.point_index(m));
  std::sort(box.corner_indices.begin(), box.corner_indices.end());
  return box;
}

std::vector<int> knn_select(const std::vector<ParameterPoint>& points,
                            const ParameterPoint& query, int k,
                            Normalization normalization) {
  const int count = static_cast<int>(points.size());
  if (k < 1 || k > count)
    throw ConfigError("kNN selection size " + std::to_string(k) +
                      " must be between 1 and the point count " +
                      std::to_string(count));
  const int p = static_cast<int>(query.size());
  for (const auto& pt : points)
    if (pt.size() != p) throw ConfigError("kNN point dimension mismatch");

  // Per-dimension shift/scale derived from the point set itself.
  ParameterPoint shift = ParameterPoint::Zero(p);
  ParameterPoint scale = ParameterPoint::Ones(p);
  if (normalization == Normalization::MinMax) {
    for (int d = 0; d < p; ++d) {
      double lo = points[0][d], hi = points[0][d];
      for (const auto& pt : points) {
        lo = std::min(lo, pt[d]);
        hi = std::max(hi, pt[d]);
      }
      shift[d] = lo;
      scale[d] = (hi > lo) ? (hi - lo) : 1.0;
    }
  } else if (normalization == Normalization::ZScore) {
    for (int d = 0; d < p; ++d) {
      double mean = 0.0;
      for (const auto& pt : points) mean += pt[d];
      mean /= count;
      double var = 0.0;
      for (const auto& pt : points) var += (pt[d] - mean) * (pt[d] - mean);
      var /= count;
      shift[d] = mean;
      scale[d] = (var > 0.0) ? std::sqrt(var) : 1.0;
    }
  }

  std::vector<std::pair<double, int>> order(count);
  for (int i = 0; i < count; ++i) {
    double d2 = 0.0;
    for (int d = 0; d < p; ++d) {
      const double diff = (points[i][d] - shift[d]) / scale[d] -
                          (query[d] - shift[d]) / scale[d];
      d2 += diff * diff;
    }
    order[i] = {d2, i};
  }
  // Ties resolve toward the lower point index.
  std::sort(order.begin(), order.end());

  std::vector<int> selected(k);
  for (int i = 0; i < k; ++i) selected[i] = order[i].second;
  return selected;
}

std::vector<ParameterPoint> sample_lhs(const ParameterPoint& lo,
                                       const ParameterPoint& hi, int count,
                                       std::uint64_t seed) {
  const int p = static_cast<int>(lo.size());
  if (hi.size() != p) throw ConfigError("LHS bounds dimension mismatch");
  for (int d = 0; d < p; ++d)
    if (!(hi[d] > lo[d]))
      throw ConfigError("LHS bounds must satisfy lo < hi in dimension " +
                        std::to_string(d + 1));
  if (count < 1) throw ConfigError("LHS sample count must be positive");

  std::mt19937_64 rng(seed);
  std::vector<ParameterPoint> samples(count, ParameterPoint(p));
  for (int d = 0; d < p; ++d) {
    // Fisher-Yates permutation of the strata, spelled out so the result is
    // identical across standard library implementations.
    std::vector<int> perm(count);
    for (int i = 0; i < count; ++i) perm[i] = i;
    for (int i = count - 1; i > 0; --i)
      std::swap(perm[i], perm[next_below(rng, i + 1)]);
    for (int i = 0; i < count; ++i) {
      const double jitter = next_unit(rng) - 0.5;  // stratum midpoint +- 1/2
      const double u = (perm[i] + 0.5 + jitter) / count;
      samples[i][d] = lo[d] + u * (hi[d] - lo[d]);
    }
  }
  return samples;
}

}  // namespace boxmor
