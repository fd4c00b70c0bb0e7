// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "global_basis.hpp"
#include "krylov.hpp"
#include "param_space.hpp"

namespace boxmor {

// Convex interpolation weights over a subset of training points.
struct WeightVector {
  std::vector<int> indices;  // training-point indices
  Eigen::VectorXd weights;   // same length; non-negative, sums to 1
};

enum class WeightFunction { Euclidean, TensorProduct };
enum class Clustering { All, Box, NearestNeighbors };

// How a query is turned into a reduced system:
//  - Classical: weights over all training points, one shared basis change.
//  - BoxInterpolation: weights over a local selection (grid box by default),
//    still using the all-points basis change.
//  - BoxReduction: like BoxInterpolation, but the basis change itself is
//    restricted to the selection, with one global set per grid box.
struct Strategy {
  enum class Kind { Classical, BoxInterpolation, BoxReduction };
  Kind kind = Kind::Classical;
  WeightFunction weight_fn = WeightFunction::TensorProduct;
  Clustering clustering = Clustering::All;
  int knn_count = 4;
  Normalization knn_normalization = Normalization::None;
  // Euclidean weights may normalize coordinates first (the tensor-product
  // weights are invariant under per-axis rescaling and never need it).
  Normalization weight_normalization = Normalization::None;
};

// Inverse-distance weights, optionally in per-dimension normalized
// coordinates derived from the selected subset. An exact hit (distance
// within 1e-12 of the subset's bounding-box diagonal) collapses the weights
// to an indicator on the hit point.
WeightVector euclidean_weights(const std::vector<ParameterPoint>& selected,
                               const std::vector<int>& indices,
                               const ParameterPoint& query,
                               Normalization normalization = Normalization::None);

// Tensor-product weights: per dimension, inverse-distance weights are
// normalized over the selected subset; a point's weight is the product of
// its per-dimension weights, renormalized to sum to one. An exact hit in a
// dimension (within 1e-12 of that dimension's subset range) turns that
// dimension's weights into an indicator over the hitting points. The result
// is invariant under independent positive affine rescaling of each axis.
WeightVector tensor_product_weights(const std::vector<ParameterPoint>& selected,
                                    const std::vector<int>& indices,
                                    const ParameterPoint& query);

// Entrywise weighted sum of the transformed members named by `weights`.
// All members must live in `set` and share one kind and size.
DenseSystem interpolate_system(const GlobalRomSet& set,
                               const WeightVector& weights);

// Ties the pieces together for one trained model: selection, weights,
// basis-change scope, interpolation. Box-reduction sets are built per grid
// box on demand and cached (precompute_boxes builds every full cell up
// front); the cache key is the sorted selection, so degenerate boxes get
// their own consistent sets.
class InterpolationEngine {
public:
  InterpolationEngine(TrainingGrid grid, std::vector<LocalRom> roms,
                      Strategy strategy);

  // Rehydrates a trained engine from persisted basis-change results. `roms`
  // may be empty for artifacts that dropped the local bases; such an engine
  // serves the supplied sets but cannot build sets for new scopes.
  InterpolationEngine(
      TrainingGrid grid, std::vector<LocalRom> roms, Strategy strategy,
      int reduced_order, std::shared_ptr<const GlobalRomSet> all_points,
      std::map<std::vector<int>, std::shared_ptr<const GlobalRomSet>> box_sets);

  struct Result {
    DenseSystem sys;
    std::shared_ptr<const GlobalRomSet> set;  // basis for back-projection
    WeightVector weights;
  };

  // Rejects queries outside the training hull (no extrapolation).
  Result evaluate(const ParameterPoint& query);

  // Selection + weights only (no matrix work).
  WeightVector weights_for(const ParameterPoint& query) const;

  // Builds the per-cell sets of the box-reduction strategy eagerly.
  void precompute_boxes(int workers = 1);

  const TrainingGrid& grid() const { return grid_; }
  const std::vector<LocalRom>& roms() const { return roms_; }
  const Strategy& strategy() const { return strategy_; }
  int reduced_order() const { return reduced_order_; }
  // Shared all-points set (classical and box-interpolation strategies).
  std::shared_ptr<const GlobalRomSet> all_points_set() const { return all_set_; }
  // Number of cached box sets (diagnostics).
  int cached_box_sets() const;
  // Snapshot of the cached box sets, ordered by scope.
  std::vector<std::pair<std::vector<int>, std::shared_ptr<const GlobalRomSet>>>
  cached_sets() const;

private:
  std::vector<int> select(const ParameterPoint& query) const;
  std::shared_ptr<const GlobalRomSet> set_for(std::vector<int> scope);

  TrainingGrid grid_;
  std::vector<LocalRom> roms_;
  Strategy strategy_;
  int reduced_order_ = 0;
  std::shared_ptr<const GlobalRomSet> all_set_;
  std::map<std::vector<int>, std::shared_ptr<const GlobalRomSet>> box_sets_;
  mutable std::mutex cache_mutex_;
};

}  // namespace boxmor
