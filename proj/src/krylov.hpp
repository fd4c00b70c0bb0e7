// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "param_space.hpp"
#include "systems.hpp"

namespace boxmor {

// Orthonormal projection basis spanning a rational Krylov subspace about
// the expansion point.
struct ProjectionBasis {
  Eigen::MatrixXd V;            // n x rank, V^T V = I
  double expansion_point = 0.0; // s0
  bool truncated = false;       // breakdown before the requested order
};

// Reduced model of one training point: the Galerkin projection of its
// full-order system onto span(V).
struct LocalRom {
  DenseSystem sys;
  ProjectionBasis basis;
  int point_index = -1;
};

// Arnoldi on the shifted-inverted operator: for a first-order system the
// subspace is Kr_r((s0 E - A)^{-1} E, (s0 E - A)^{-1} f); a second-order
// system is treated in the frequency variable s^2, replacing s0 by s0^2.
// The one-sided Galerkin projection then matches the first r transfer
// function moments about s0. Orthogonalization is modified Gram-Schmidt
// with one re-orthogonalization pass; breakdown (new direction below
// 1e-12 of the start vector norm) truncates the basis and sets the flag.
// The shifted operator is factorized once and reused for every solve.
ProjectionBasis arnoldi_basis(const SparseSystem& fom, int r, double s0 = 0.0);

// E_r = V^T E V, A_r = V^T A V, f_r = V^T f, D_r = D V.
DenseSystem project_system(const SparseSystem& fom, const Eigen::MatrixXd& V);

using FomFactory = std::function<SparseSystem(const ParameterPoint&)>;

// Reduces every training point with a shared (r, s0); points must yield
// systems of one kind and one dimension. Runs on a bounded worker pool;
// results are ordered by point index regardless of scheduling.
std::vector<LocalRom> reduce_training_set(const FomFactory& factory,
                                          const std::vector<ParameterPoint>& points,
                                          int r, double s0 = 0.0,
                                          int workers = 1);

}  // namespace boxmor
