// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "global_basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "errors.hpp"

namespace boxmor {

Eigen::MatrixXd assemble_joint_basis(const std::vector<LocalRom>& roms,
                                     const std::vector<int>& selection) {
  if (selection.empty()) throw ConfigError("joint basis selection is empty");
  const auto count = static_cast<int>(roms.size());
  Eigen::Index n = 0, width = 0;
  for (int idx : selection) {
    if (idx < 0 || idx >= count)
      throw ConfigError("joint basis selection index " + std::to_string(idx) +
                        " out of range");
    const auto& v = roms[idx].basis.V;
    if (n == 0) n = v.rows();
    if (v.rows() != n)
      throw ConfigError("joint basis mixes full-order dimensions");
    width += v.cols();
  }
  Eigen::MatrixXd joint(n, width);
  Eigen::Index col = 0;
  for (int idx : selection) {
    const auto& v = roms[idx].basis.V;
    joint.middleCols(col, v.cols()) = v;
    col += v.cols();
  }
  return joint;
}

Eigen::MatrixXd dominant_subspace(const Eigen::MatrixXd& joint, int r) {
  if (r < 1 || r > joint.cols() || r > joint.rows())
    throw ConfigError("requested subspace size " + std::to_string(r) +
                      " exceeds the joint basis extent");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(joint, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const double tol = std::max(joint.rows(), joint.cols()) *
                     std::numeric_limits<double>::epsilon() * sigma[0];
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > tol) ++rank;
  if (rank < r)
    throw NumericError("joint basis rank " + std::to_string(rank) +
                       " is below the requested subspace size " +
                       std::to_string(r) +
                       "; local bases are linearly dependent");

  Eigen::MatrixXd basis = svd.matrixU().leftCols(r);
  // Sign convention: make the largest-magnitude entry of each column
  // positive (lowest index on ties) so reruns are bit-identical.
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index imax = 0;
    double vmax = std::abs(basis(0, j));
    for (Eigen::Index i = 1; i < basis.rows(); ++i)
      if (std::abs(basis(i, j)) > vmax) {
        vmax = std::abs(basis(i, j));
        imax = i;
      }
    if (basis(imax, j) < 0.0) basis.col(j) = -basis.col(j);
  }
  return basis;
}

TransformedMember transform_member(const LocalRom& rom,
                                   const Eigen::MatrixXd& basis) {
  const Eigen::Index r = basis.cols();
  if (rom.basis.V.rows() != basis.rows())
    throw ConfigError("member basis height does not match the global basis");
  if (rom.basis.V.cols() != r)
    throw NumericError(
        "training point " + std::to_string(rom.point_index) + " basis has " +
        std::to_string(rom.basis.V.cols()) + " columns, expected " +
        std::to_string(r) +
        (rom.basis.truncated ? " (Krylov breakdown truncated it)" : ""));

  // G = V^T R; W = G^{-1} and T^{-1} = G^{-T} both reuse one factorization.
  const Eigen::MatrixXd gram = rom.basis.V.transpose() * basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> gsvd(gram);
  const double smin = gsvd.singularValues().minCoeff();
  const double smax = gsvd.singularValues().maxCoeff();
  if (!(smin > 0.0) || smax / smin > 1e12)
    throw NumericError(
        "member transform for training point " +
        std::to_string(rom.point_index) +
        " is ill-conditioned (cond(V^T R) = " +
        std::to_string(smin > 0.0 ? smax / smin
                                  : std::numeric_limits<double>::infinity()) +
        "); the global basis barely overlaps this local subspace");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(gram);
  auto left = [&](const Eigen::MatrixXd& x) {  // W x = G^{-1} x
    return Eigen::MatrixXd(lu.solve(x));
  };
  auto right = [&](const Eigen::MatrixXd& x) {  // x T^{-1} = (G^{-1} x^T)^T
    return Eigen::MatrixXd(lu.solve(x.transpose()).transpose());
  };

  TransformedMember member;
  member.point_index = rom.point_index;
  member.t_map = gram.transpose();
  member.w_map = left(Eigen::MatrixXd::Identity(r, r));
  member.sys.kind = rom.sys.kind;
  member.sys.E = right(left(rom.sys.E));
  member.sys.A = right(left(rom.sys.A));
  member.sys.f = left(rom.sys.f);
  member.sys.D = right(rom.sys.D);
  return member;
}

GlobalRomSet build_global_set(const std::vector<LocalRom>& roms,
                              std::vector<int> scope) {
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  if (scope.empty()) throw ConfigError("global set scope is empty");

  const int r = static_cast<int>(roms.at(scope.front()).basis.V.cols());
  GlobalRomSet set;
  set.scope = scope;
  set.basis = dominant_subspace(assemble_joint_basis(roms, scope), r);
  set.members.reserve(scope.size());
  for (int idx : scope) set.members.push_back(transform_member(roms[idx], set.basis));
  return set;
}

}  // namespace boxmor
