// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace boxmor {

// Invalid user input: malformed config, bad bindings, query outside the
// training hull, missing files. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numerical failure: singular operators, rank-deficient bases,
// ill-conditioned member transforms, solver breakdown. Maps to CLI exit
// code 3.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace boxmor
