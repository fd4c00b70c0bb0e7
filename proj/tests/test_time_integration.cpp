// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "time_integration.hpp"

#include <cmath>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "errors.hpp"
#include "fom.hpp"

using namespace boxmor;

namespace {

DenseSystem scalar_first_order(double e, double a) {
  DenseSystem sys;
  sys.kind = SystemKind::FirstOrder;
  sys.E = Eigen::MatrixXd::Constant(1, 1, e);
  sys.A = Eigen::MatrixXd::Constant(1, 1, a);
  sys.f = Eigen::VectorXd::Zero(1);
  sys.D = Eigen::MatrixXd::Identity(1, 1);
  return sys;
}

}  // namespace

TEST_CASE("implicit Euler reproduces the scalar closed form exactly") {
  // E = 1, A = -1, f = 0, z0 = 1  =>  z_k = (1 + dt)^{-k}.
  const DenseSystem sys = scalar_first_order(1.0, -1.0);
  const double dt = 0.1;
  SolveStats stats;
  const TransientSolution sol = implicit_euler(
      sys, LoadSignal{}, dt, 5.0, Eigen::VectorXd::Ones(1), &stats);
  REQUIRE(sol.states.cols() == 51);
  for (int k = 0; k <= 50; ++k) {
    const double oracle = std::pow(1.0 + dt, -k);
    CHECK(std::abs(sol.states(0, k) - oracle) <= 1e-12 * oracle);
  }
  CHECK(stats.step_factorizations == 1);
}

TEST_CASE("implicit Euler converges at first order on a two-cell rod") {
  LatticeSpec spec;
  spec.nx = spec.ny = 1;
  spec.nz = 2;
  spec.cell_size = 0.01;
  spec.conductivity = {50.0};
  spec.capacity = {2.0e6};
  spec.convection = 1000.0;
  spec.bodies.clear();
  spec.heated_body = 0;
  const SparseSystem rod = build_heat_lattice(spec);

  // Closed form for constant load: u(t) = B^{-1} (exp(B t) - I) E^{-1} f.
  const Eigen::MatrixXd e = Eigen::MatrixXd(rod.E);
  const Eigen::MatrixXd b = e.partialPivLu().solve(Eigen::MatrixXd(rod.A));
  const Eigen::VectorXd c = e.partialPivLu().solve(rod.f);
  const double t_end = 40.0;
  const Eigen::MatrixXd phi = (b * t_end).exp();
  const Eigen::VectorXd exact =
      b.partialPivLu().solve((phi - Eigen::MatrixXd::Identity(2, 2)) * c);

  auto error_at = [&](double dt) {
    const TransientSolution sol = implicit_euler(rod, LoadSignal{}, dt, t_end);
    return (sol.states.col(sol.states.cols() - 1) - exact).norm() / exact.norm();
  };
  const double coarse = error_at(0.5);
  const double fine = error_at(0.25);
  CHECK(coarse / fine == doctest::Approx(2.0).epsilon(0.25));
  CHECK(fine < 0.05);
}

TEST_CASE("Newmark conserves the oscillator energy over ten thousand steps") {
  // Free vibration of m = k = 1 from u0 = 1: the average-acceleration rule
  // preserves the discrete energy 0.5 v^2 + 0.5 u^2 exactly.
  DenseSystem sys = scalar_first_order(1.0, -1.0);
  sys.kind = SystemKind::SecondOrder;
  const double dt = 1e-3;
  Eigen::MatrixXd velocities;
  SolveStats stats;
  const TransientSolution sol =
      newmark(sys, LoadSignal{.amplitude = 0.0}, dt, 10.0, 0.25, 0.5,
              Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), &stats,
              &velocities);
  REQUIRE(sol.states.cols() == 10001);
  CHECK(stats.step_factorizations == 1);

  const double e0 = 0.5;
  for (Eigen::Index k = 0; k < sol.states.cols(); k += 100) {
    const double energy = 0.5 * velocities(0, k) * velocities(0, k) +
                          0.5 * sol.states(0, k) * sol.states(0, k);
    CHECK(std::abs(energy - e0) <= 1e-6 * e0);
  }
}

TEST_CASE("Newmark step response oscillates around the static deflection") {
  BeamSpec spec;
  spec.elements = 20;
  const SparseSystem beam = build_timoshenko_beam(spec);
  const int tip = beam_tip_transverse_dof(spec);

  // Static tip deflection via 0 = A u + f.
  Eigen::SparseLU<SpMat> lu(SpMat(-beam.A));
  REQUIRE(lu.info() == Eigen::Success);
  const double u_static = lu.solve(beam.f)[tip];

  const TransientSolution sol = newmark(beam, LoadSignal{}, 5e-4, 6.0);
  const double mean = sol.states.row(tip).mean();
  CHECK(mean == doctest::Approx(u_static).epsilon(0.01));
  // Undamped step response peaks near twice the static value.
  CHECK(sol.states.row(tip).maxCoeff() < 2.2 * u_static);
  CHECK(sol.states.row(tip).maxCoeff() > 1.8 * u_static);
}

TEST_CASE("implicit Euler relaxes the lattice to its steady state") {
  LatticeSpec spec;
  spec.nx = 6;
  spec.ny = 4;
  spec.nz = 3;
  spec.conductivity = {100.0};
  spec.capacity = {1.6e6};
  spec.convection = 1000.0;
  spec.bodies.clear();
  spec.heated_body = 0;
  const SparseSystem sys = build_heat_lattice(spec);

  Eigen::SparseLU<SpMat> lu(SpMat(-sys.A));
  REQUIRE(lu.info() == Eigen::Success);
  const Eigen::VectorXd steady = lu.solve(sys.f);

  const TransientSolution sol = implicit_euler(sys, LoadSignal{}, 0.05, 30.0);
  const Eigen::VectorXd last = sol.states.col(sol.states.cols() - 1);
  CHECK((last - steady).norm() <= 0.01 * steady.norm());
  // Monotone heating: temperatures never overshoot the steady state.
  CHECK(last.maxCoeff() <= steady.maxCoeff() * (1 + 1e-9));
}

TEST_CASE("back projection lifts reduced states and recomputes outputs") {
  TransientSolution reduced;
  reduced.dt = 0.1;
  reduced.times = Eigen::VectorXd::LinSpaced(4, 0.0, 0.3);
  reduced.states = Eigen::MatrixXd::Random(3, 4);
  reduced.outputs = Eigen::MatrixXd::Random(1, 4);

  const Eigen::MatrixXd basis = Eigen::MatrixXd::Random(10, 3);
  SpMat d(2, 10);
  d.insert(0, 0) = 1.0;
  d.insert(1, 7) = -2.0;

  const TransientSolution full = back_project(reduced, basis, &d);
  CHECK(full.states.rows() == 10);
  CHECK((full.states - basis * reduced.states).cwiseAbs().maxCoeff() == 0.0);
  // (D V) z == D (V z).
  const Eigen::MatrixXd dv = Eigen::MatrixXd(d) * basis;
  CHECK((full.outputs - dv * reduced.states).cwiseAbs().maxCoeff() <= 1e-14);

  const TransientSolution keep = back_project(reduced, basis);
  CHECK((keep.outputs - reduced.outputs).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(back_project(reduced, Eigen::MatrixXd::Random(10, 4)),
                  ConfigError);
}

TEST_CASE("steppers reject mismatched kinds and bad steps") {
  const DenseSystem first = scalar_first_order(1.0, -1.0);
  DenseSystem second = first;
  second.kind = SystemKind::SecondOrder;

  CHECK_THROWS_AS(implicit_euler(second, LoadSignal{}, 0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(newmark(first, LoadSignal{}, 0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(implicit_euler(first, LoadSignal{}, -0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(implicit_euler(first, LoadSignal{}, 0.1, 0.0), ConfigError);

  // Singular step operator: E = 0 and A = 0.
  const DenseSystem degenerate = scalar_first_order(0.0, 0.0);
  CHECK_THROWS_AS(implicit_euler(degenerate, LoadSignal{}, 0.1, 1.0),
                  NumericError);
}
