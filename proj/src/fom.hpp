// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "param_space.hpp"
#include "systems.hpp"
#include "types.hpp"

namespace boxmor {

// Scalar signal s(t) scaling the spatial load vector.
struct LoadSignal {
  enum class Kind { Step, Ramp, Sine };
  Kind kind = Kind::Step;
  double amplitude = 1.0;
  double rise_time = 0.0;  // ramp: linear ramp-up, constant afterwards
  double frequency = 0.0;  // sine: Hz
  double operator()(double t) const;
};

// Cantilever beam, axis along x, clamped at x = 0, 2-node shear-deformable
// elements with 6 DoF per node (ux, uy, uz, rx, ry, rz). Unit tip force in
// z; output = tip z displacement.
struct BeamSpec {
  double length = 1.0;            // m
  double thickness = 0.01;        // m, section size along y
  double height = 0.01;           // m, section size along z
  double density = 7600.0;        // kg/m^3
  double youngs_modulus = 2.1e11; // Pa
  double poisson = 0.3;
  int elements = 100;
};

SparseSystem build_timoshenko_beam(const BeamSpec& spec);

// Index of the tip z-displacement DoF in the clamped system.
int beam_tip_transverse_dof(const BeamSpec& spec);

// Free-free assembly (no clamping), for rigid-body diagnostics. Returns
// (E, A) in the same sign convention as SparseSystem.
std::pair<SpMat, SpMat> beam_matrices_unclamped(const BeamSpec& spec);

// Voxel heat model: uniform cells, finite-volume conduction with harmonic
// interface conductances, convection on the bottom face (z = 0), unit total
// power spread over the cells of `heated_body`. Output = mean heated-cell
// temperature. Bodies are axis-aligned cell boxes painted in order over the
// background body 0.
struct LatticeBody {
  int id = 1;
  std::array<int, 3> from{0, 0, 0};  // inclusive cell indices
  std::array<int, 3> to{0, 0, 0};    // exclusive
};

struct LatticeSpec {
  int nx = 30, ny = 20, nz = 10;
  double cell_size = 1e-3;  // m
  // Indexed by body id; body 0 is the background.
  std::vector<double> conductivity = {237.0, 150.0, 150.0};  // W/(m K)
  std::vector<double> capacity = {2.42e6, 1.66e6, 3.0e6};    // J/(m^3 K)
  double convection = 2000.0;  // W/(m^2 K) on z = 0
  std::vector<LatticeBody> bodies = {
      {2, {0, 0, 4}, {30, 20, 8}},    // interposer layer
      {1, {3, 3, 8}, {12, 9, 10}},    // four heat-source blocks on top
      {1, {18, 3, 8}, {27, 9, 10}},
      {1, {3, 11, 8}, {12, 17, 10}},
      {1, {18, 11, 8}, {27, 17, 10}},
  };
  int heated_body = 1;
};

SparseSystem build_heat_lattice(const LatticeSpec& spec);

// Cell indices (DoF indices) belonging to a body; used for masked metrics.
std::vector<int> lattice_body_cells(const LatticeSpec& spec, int body);

// Matrix Market + JSON manifest persistence for full-order systems. Writes
// E.mtx/A.mtx (or M.mtx/K.mtx for second order), f.mtx, D.mtx and
// manifest.json into `dir`. Round-trips bit-identically.
void export_system(const SparseSystem& system, const std::string& dir,
                   const std::vector<std::string>& param_names = {},
                   const ParameterPoint& param_values = {});
SparseSystem import_system(const std::string& dir);

}  // namespace boxmor
