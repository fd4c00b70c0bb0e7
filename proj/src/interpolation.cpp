// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace boxmor {

namespace {

void check_selection(const std::vector<ParameterPoint>& selected,
                     const std::vector<int>& indices,
                     const ParameterPoint& query) {
  if (selected.empty()) throw ConfigError("weight selection is empty");
  if (selected.size() != indices.size())
    throw ConfigError("weight selection points and indices disagree");
  for (const auto& p : selected)
    if (p.size() != query.size())
      throw ConfigError("weight selection dimension mismatch");
}

}  // namespace

WeightVector euclidean_weights(const std::vector<ParameterPoint>& selected,
                               const std::vector<int>& indices,
                               const ParameterPoint& query,
                               Normalization normalization) {
  check_selection(selected, indices, query);
  const int count = static_cast<int>(selected.size());
  const int dims = static_cast<int>(query.size());

  // Per-dimension shift/scale from the selected subset.
  ParameterPoint shift = ParameterPoint::Zero(dims);
  ParameterPoint scale = ParameterPoint::Ones(dims);
  if (normalization == Normalization::MinMax) {
    for (int d = 0; d < dims; ++d) {
      double lo = selected[0][d], hi = selected[0][d];
      for (const auto& p : selected) {
        lo = std::min(lo, p[d]);
        hi = std::max(hi, p[d]);
      }
      shift[d] = lo;
      scale[d] = hi > lo ? hi - lo : 1.0;
    }
  } else if (normalization == Normalization::ZScore) {
    for (int d = 0; d < dims; ++d) {
      double mean = 0.0;
      for (const auto& p : selected) mean += p[d];
      mean /= count;
      double var = 0.0;
      for (const auto& p : selected) var += (p[d] - mean) * (p[d] - mean);
      var /= count;
      shift[d] = mean;
      scale[d] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
  }
  auto mapped = [&](const ParameterPoint& p) {
    return ParameterPoint(((p - shift).array() / scale.array()).matrix());
  };

  const ParameterPoint q = mapped(query);
  Eigen::VectorXd dist(count);
  // Bounding-box diagonal of the mapped subset and query, the scale for
  // the exact-hit test.
  ParameterPoint lo = q, hi = q;
  for (int i = 0; i < count; ++i) {
    const ParameterPoint p = mapped(selected[i]);
    dist[i] = (p - q).norm();
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double diag = (hi - lo).norm();
  const double hit_tol = 1e-12 * std::max(diag, 1e-300);

  WeightVector wv;
  wv.indices = indices;
  wv.weights = Eigen::VectorXd::Zero(count);
  for (int i = 0; i < count; ++i)
    if (dist[i] <= hit_tol) {
      wv.weights[i] = 1.0;  // exact hit: indicator on the first hit point
      return wv;
    }
  for (int i = 0; i < count; ++i) wv.weights[i] = 1.0 / dist[i];
  wv.weights /= wv.weights.sum();
  return wv;
}

WeightVector tensor_product_weights(const std::vector<ParameterPoint>& selected,
                                    const std::vector<int>& indices,
                                    const ParameterPoint& query) {
  check_selection(selected, indices, query);
  const int count = static_cast<int>(selected.size());
  const int dims = static_cast<int>(query.size());

  Eigen::VectorXd product = Eigen::VectorXd::Ones(count);
  Eigen::VectorXd axis_w(count);
  for (int d = 0; d < dims; ++d) {
    double lo = selected[0][d], hi = selected[0][d];
    for (const auto& p : selected) {
      lo = std::min(lo, p[d]);
      hi = std::max(hi, p[d]);
    }
    const double range = hi - lo;
    const double eps =
        1e-12 * (range > 0.0 ? range : std::max(1.0, std::abs(lo)));

    int hits = 0;
    for (int i = 0; i < count; ++i)
      if (std::abs(query[d] - selected[i][d]) <= eps) ++hits;

    if (hits > 0) {
      // Exact hit: indicator over the hitting points in this dimension.
      for (int i = 0; i < count; ++i)
        axis_w[i] =
            std::abs(query[d] - selected[i][d]) <= eps ? 1.0 / hits : 0.0;
    } else {
      for (int i = 0; i < count; ++i)
        axis_w[i] = 1.0 / std::abs(query[d] - selected[i][d]);
      axis_w /= axis_w.sum();
    }
    product.array() *= axis_w.array();
  }

  const double total = product.sum();
  if (!(total > 0.0))
    throw NumericError(
        "tensor-product weights vanish for this selection; the selected "
        "points share no corner matching the query's exact hits");

  WeightVector wv;
  wv.indices = indices;
  wv.weights = product / total;
  return wv;
}

DenseSystem interpolate_system(const GlobalRomSet& set,
                               const WeightVector& weights) {
  if (weights.indices.empty()) throw ConfigError("empty interpolation weights");
  if (static_cast<Eigen::Index>(weights.indices.size()) != weights.weights.size())
    throw ConfigError("weight vector indices and values disagree");
  const double sum = weights.weights.sum();
  if (std::abs(sum - 1.0) > 1e-9)
    throw NumericError("interpolation weights sum to " + std::to_string(sum) +
                       ", expected 1");

  DenseSystem out;
  bool first = true;
  for (Eigen::Index k = 0; k < weights.weights.size(); ++k) {
    const int point = weights.indices[k];
    const auto member = std::find_if(
        set.members.begin(), set.members.end(),
        [&](const TransformedMember& m) { return m.point_index == point; });
    if (member == set.members.end())
      throw ConfigError("training point " + std::to_string(point) +
                        " is outside this global set's scope");
    const double w = weights.weights[k];
    if (first) {
      out.kind = member->sys.kind;
      out.E = w * member->sys.E;
      out.A = w * member->sys.A;
      out.f = w * member->sys.f;
      out.D = w * member->sys.D;
      first = false;
      continue;
    }
    if (member->sys.kind != out.kind)
      throw ConfigError("interpolation mixes system kinds");
    if (member->sys.E.rows() != out.E.rows())
      throw ConfigError("interpolation mixes reduced sizes");
    out.E += w * member->sys.E;
    out.A += w * member->sys.A;
    out.f += w * member->sys.f;
    out.D += w * member->sys.D;
  }
  return out;
}

namespace {

void check_strategy(const Strategy& strategy, int grid_size) {
  if (strategy.kind == Strategy::Kind::Classical) {
    if (strategy.clustering != Clustering::All)
      throw ConfigError("the classical strategy interpolates over all training points");
  } else {
    if (strategy.clustering == Clustering::All)
      throw ConfigError("box strategies need a clustering rule (box or knn)");
  }
  if (strategy.clustering == Clustering::NearestNeighbors &&
      (strategy.knn_count < 1 || strategy.knn_count > grid_size))
    throw ConfigError("knn count must lie in [1, training point count]");
}

}  // namespace

InterpolationEngine::InterpolationEngine(TrainingGrid grid,
                                         std::vector<LocalRom> roms,
                                         Strategy strategy)
    : grid_(std::move(grid)), roms_(std::move(roms)), strategy_(strategy) {
  if (static_cast<int>(roms_.size()) != grid_.size())
    throw ConfigError("training grid and reduced-model count disagree");
  reduced_order_ = static_cast<int>(roms_.front().sys.A.rows());
  check_strategy(strategy_, grid_.size());

  // Classical and box-interpolation share one all-points basis change.
  if (strategy_.kind != Strategy::Kind::BoxReduction) {
    std::vector<int> all(grid_.size());
    std::iota(all.begin(), all.end(), 0);
    all_set_ = std::make_shared<const GlobalRomSet>(build_global_set(roms_, all));
  }
}

InterpolationEngine::InterpolationEngine(
    TrainingGrid grid, std::vector<LocalRom> roms, Strategy strategy,
    int reduced_order, std::shared_ptr<const GlobalRomSet> all_points,
    std::map<std::vector<int>, std::shared_ptr<const GlobalRomSet>> box_sets)
    : grid_(std::move(grid)),
      roms_(std::move(roms)),
      strategy_(strategy),
      reduced_order_(reduced_order),
      all_set_(std::move(all_points)),
      box_sets_(std::move(box_sets)) {
  if (!roms_.empty() && static_cast<int>(roms_.size()) != grid_.size())
    throw ConfigError("training grid and reduced-model count disagree");
  if (reduced_order_ < 1) throw ConfigError("reduced order must be positive");
  check_strategy(strategy_, grid_.size());
  if (strategy_.kind != Strategy::Kind::BoxReduction && !all_set_)
    throw ConfigError("this strategy needs the all-points basis change");
}

std::vector<int> InterpolationEngine::select(const ParameterPoint& query) const {
  switch (strategy_.clustering) {
    case Clustering::All: {
      std::vector<int> all(grid_.size());
      std::iota(all.begin(), all.end(), 0);
      return all;
    }
    case Clustering::Box:
      return box_corners(grid_, query).corner_indices;
    case Clustering::NearestNeighbors:
      return knn_select(grid_.points(), query, strategy_.knn_count,
                        strategy_.knn_normalization);
  }
  throw ConfigError("unknown clustering rule");
}

WeightVector InterpolationEngine::weights_for(const ParameterPoint& query) const {
  if (static_cast<int>(query.size()) != grid_.dims())
    throw ConfigError("query has " + std::to_string(query.size()) +
                      " coordinate(s) but the model has " +
                      std::to_string(grid_.dims()) + " parameter(s)");
  for (double q : query)
    if (!std::isfinite(q))
      throw ConfigError("query coordinates must be finite numbers");
  if (!grid_.contains(query))
    throw ConfigError("query lies outside the training hull; no extrapolation");
  const std::vector<int> indices = select(query);
  std::vector<ParameterPoint> points;
  points.reserve(indices.size());
  for (int idx : indices) points.push_back(grid_.point(idx));
  if (strategy_.weight_fn == WeightFunction::TensorProduct)
    return tensor_product_weights(points, indices, query);
  return euclidean_weights(points, indices, query,
                           strategy_.weight_normalization);
}

std::shared_ptr<const GlobalRomSet> InterpolationEngine::set_for(
    std::vector<int> scope) {
  std::sort(scope.begin(), scope.end());
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = box_sets_.find(scope);
  if (it == box_sets_.end()) {
    if (roms_.empty()) {
      std::string corners;
      for (int idx : scope) corners += (corners.empty() ? "" : ", ") + std::to_string(idx);
      throw ConfigError("no stored basis change covers training points {" +
                        corners +
                        "} and the artifact kept no local bases to build one");
    }
    auto set = std::make_shared<const GlobalRomSet>(build_global_set(roms_, scope));
    it = box_sets_.emplace(std::move(scope), std::move(set)).first;
  }
  return it->second;
}

InterpolationEngine::Result InterpolationEngine::evaluate(
    const ParameterPoint& query) {
  Result result;
  result.weights = weights_for(query);
  result.set = strategy_.kind == Strategy::Kind::BoxReduction
                   ? set_for(result.weights.indices)
                   : all_set_;
  result.sys = interpolate_system(*result.set, result.weights);
  return result;
}

void InterpolationEngine::precompute_boxes(int workers) {
  if (strategy_.kind != Strategy::Kind::BoxReduction) return;
  if (strategy_.clustering != Clustering::Box) return;  // knn sets are query-driven

  const int cells = grid_.cell_count();
  std::vector<std::vector<int>> scopes(cells);
  for (int c = 0; c < cells; ++c) {
    const auto lower = grid_.cell_lower_corner(c);
    std::vector<int> corners;
    const int p = grid_.dims();
    for (int mask = 0; mask < (1 << p); ++mask) {
      auto multi = lower;
      for (int d = 0; d < p; ++d)
        if (mask & (1 << d)) ++multi[d];
      corners.push_back(grid_.point_index(multi));
    }
    std::sort(corners.begin(), corners.end());
    scopes[c] = std::move(corners);
  }

  std::vector<std::shared_ptr<const GlobalRomSet>> sets(cells);
  parallel_for(cells, workers, [&](int c) {
    sets[c] = std::make_shared<const GlobalRomSet>(build_global_set(roms_, scopes[c]));
  });
  std::lock_guard<std::mutex> lock(cache_mutex_);
  for (int c = 0; c < cells; ++c)
    box_sets_.emplace(std::move(scopes[c]), std::move(sets[c]));
}

int InterpolationEngine::cached_box_sets() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return static_cast<int>(box_sets_.size());
}

std::vector<std::pair<std::vector<int>, std::shared_ptr<const GlobalRomSet>>>
InterpolationEngine::cached_sets() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return {box_sets_.begin(), box_sets_.end()};
}

}  // namespace boxmor
