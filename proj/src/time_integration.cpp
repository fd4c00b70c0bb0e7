// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "time_integration.hpp"

namespace boxmor {

TransientSolution back_project(const TransientSolution& reduced,
                               const Eigen::MatrixXd& basis,
                               const SpMat* output_matrix) {
  if (basis.cols() != reduced.states.rows())
    throw ConfigError("back-projection basis width does not match the reduced state dimension");
  TransientSolution full;
  full.dt = reduced.dt;
  full.times = reduced.times;
  full.states = basis * reduced.states;
  full.outputs = output_matrix ? Eigen::MatrixXd(*output_matrix * full.states)
                               : reduced.outputs;
  return full;
}

}  // namespace boxmor
