// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace boxmor {

using SpMat = Eigen::SparseMatrix<double>;

}  // namespace boxmor
