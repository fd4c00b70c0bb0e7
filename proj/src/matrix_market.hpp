// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "types.hpp"

namespace boxmor {

// Matrix Market writers. Doubles are printed with 17 significant digits so
// a write/read cycle reproduces every value bit-identically.
void write_matrix_market(const std::string& path, const SpMat& m);
void write_matrix_market(const std::string& path, const Eigen::MatrixXd& m);
void write_matrix_market(const std::string& path, const Eigen::VectorXd& v);

// Readers accept real coordinate (general or symmetric) and real array
// banners. Parse failures throw ConfigError citing the offending line.
SpMat read_sparse_matrix_market(const std::string& path);
Eigen::MatrixXd read_dense_matrix_market(const std::string& path);
Eigen::VectorXd read_vector_matrix_market(const std::string& path);

}  // namespace boxmor
