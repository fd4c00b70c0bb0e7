// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "types.hpp"

namespace boxmor {

enum class SystemKind { FirstOrder, SecondOrder };

// Descriptor-form dynamical system.
//   first order:   E u' = A u + f s(t),   y = D u
//   second order:  E u'' = A u + f s(t),  y = D u
// The state matrix A sits on the right-hand side, so for a structural model
// it equals minus the conventional stiffness (and is typically negative
// definite) while E is the mass/capacity matrix and positive definite.
template <class Matrix>
struct DescriptorSystem {
  SystemKind kind = SystemKind::FirstOrder;
  Matrix E;           // n x n
  Matrix A;           // n x n
  Eigen::VectorXd f;  // n
  Matrix D;           // m x n
  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return D.rows(); }
};

using SparseSystem = DescriptorSystem<SpMat>;
using DenseSystem = DescriptorSystem<Eigen::MatrixXd>;

}  // namespace boxmor
