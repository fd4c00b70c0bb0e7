// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "krylov.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "errors.hpp"
#include "parallel.hpp"

namespace boxmor {

ProjectionBasis arnoldi_basis(const SparseSystem& fom, int r, double s0) {
  const Eigen::Index n = fom.n();
  if (r < 1) throw ConfigError("reduced order must be at least 1");
  if (r > n)
    throw ConfigError("reduced order " + std::to_string(r) +
                      " exceeds the system dimension " + std::to_string(n));
  if (fom.f.size() != n) throw ConfigError("load vector dimension mismatch");

  // Second-order systems are reduced in the frequency variable s^2.
  const double shift =
      fom.kind == SystemKind::SecondOrder ? s0 * s0 : s0;
  const SpMat op = (shift * fom.E - fom.A).pruned();
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(op);
  if (lu.info() != Eigen::Success)
    throw NumericError("shifted operator (s0 E - A) singular at s0 = " +
                       std::to_string(s0));

  Eigen::VectorXd w = lu.solve(fom.f);
  const double start_norm = w.norm();
  if (!(start_norm > 0.0))
    throw NumericError("Krylov start vector is zero; load vector vanishes");
  const double breakdown_tol = 1e-12 * start_norm;

  ProjectionBasis basis;
  basis.expansion_point = s0;
  basis.V.resize(n, r);
  basis.V.col(0) = w / start_norm;

  int rank = 1;
  for (int j = 1; j < r; ++j) {
    w = lu.solve(fom.E * basis.V.col(j - 1));
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < rank; ++i)
        w -= basis.V.col(i).dot(w) * basis.V.col(i);
    const double norm = w.norm();
    if (norm <= breakdown_tol) {
      basis.truncated = true;
      break;
    }
    basis.V.col(j) = w / norm;
    ++rank;
  }
  basis.V.conservativeResize(n, rank);
  return basis;
}

DenseSystem project_system(const SparseSystem& fom, const Eigen::MatrixXd& V) {
  if (V.rows() != fom.n())
    throw ConfigError("projection basis height does not match the system dimension");
  DenseSystem rom;
  rom.kind = fom.kind;
  rom.E = V.transpose() * fom.E * V;
  rom.A = V.transpose() * fom.A * V;
  rom.f = V.transpose() * fom.f;
  rom.D = fom.D * V;
  return rom;
}

std::vector<LocalRom> reduce_training_set(const FomFactory& factory,
                                          const std::vector<ParameterPoint>& points,
                                          int r, double s0, int workers) {
  if (points.empty()) throw ConfigError("training set is empty");
  std::vector<LocalRom> roms(points.size());
  parallel_for(static_cast<int>(points.size()), workers, [&](int i) {
    const SparseSystem fom = factory(points[i]);
    LocalRom rom;
    rom.basis = arnoldi_basis(fom, r, s0);
    rom.sys = project_system(fom, rom.basis.V);
    rom.point_index = i;
    roms[i] = std::move(rom);
  });

  const SystemKind kind = roms.front().sys.kind;
  const Eigen::Index n = roms.front().basis.V.rows();
  for (const auto& rom : roms) {
    if (rom.sys.kind != kind)
      throw ConfigError("training set mixes first- and second-order systems");
    if (rom.basis.V.rows() != n)
      throw ConfigError("training set mixes full-order dimensions");
  }
  return roms;
}

}  // namespace boxmor
