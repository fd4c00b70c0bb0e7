// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "krylov.hpp"
#include "param_space.hpp"

namespace boxmor {

// One training point's reduced model expressed in the shared coordinates of
// a global basis R: with W = (V^T R)^{-1} and T = R^T V, the matrices
// become X~ = W X_r T^{-1}, f~ = W f_r, D~ = D_r T^{-1}. The transform
// preserves the member's transfer function, which makes the subsequent
// entrywise interpolation meaningful.
struct TransformedMember {
  DenseSystem sys;
  Eigen::MatrixXd w_map;  // W, r x r
  Eigen::MatrixXd t_map;  // T, r x r
  int point_index = -1;
};

// Shared reduced space over a subset of training points.
struct GlobalRomSet {
  Eigen::MatrixXd basis;                   // R, n x r, orthonormal
  std::vector<TransformedMember> members;  // ordered like `scope`
  std::vector<int> scope;                  // training-point indices
};

// Horizontal concatenation [V_i ...] of the selected projection bases.
Eigen::MatrixXd assemble_joint_basis(const std::vector<LocalRom>& roms,
                                     const std::vector<int>& selection);

// First r left singular vectors of the joint basis, computed from the
// explicit dense block. Deterministic sign convention: each column's
// largest-magnitude entry (lowest index on ties) is made positive.
// Throws NumericError when the joint basis has rank below r.
Eigen::MatrixXd dominant_subspace(const Eigen::MatrixXd& joint, int r);

// Re-expresses one local ROM in the coordinates of R. Fails with a
// diagnostic naming the training point when V^T R is ill-conditioned
// (cond > 1e12) or the local basis was truncated below r.
TransformedMember transform_member(const LocalRom& rom,
                                   const Eigen::MatrixXd& basis);

// Joint basis + SVD + member transforms over `scope` (ascending point
// indices); r defaults to the members' reduced order.
GlobalRomSet build_global_set(const std::vector<LocalRom>& roms,
                              std::vector<int> scope);

}  // namespace boxmor
