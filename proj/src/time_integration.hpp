// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "errors.hpp"
#include "fom.hpp"
#include "systems.hpp"

namespace boxmor {

// Uniformly sampled trajectory: column k holds the state/output at t = k dt.
struct TransientSolution {
  Eigen::VectorXd times;
  Eigen::MatrixXd states;
  Eigen::MatrixXd outputs;
  double dt = 0.0;
};

// step_factorizations counts factorizations of the recurring step operator;
// the factor-once contract requires it to be exactly 1 per solve.
struct SolveStats {
  int step_factorizations = 0;
};

namespace detail {

// Factor-once linear solver, specialized for sparse and dense operators.
template <class Matrix>
class OperatorSolver;

template <>
class OperatorSolver<SpMat> {
public:
  void factorize(const SpMat& op, const std::string& what) {
    lu_.compute(op);
    if (lu_.info() != Eigen::Success)
      throw NumericError("singular " + what + " operator");
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }

private:
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
};

template <>
class OperatorSolver<Eigen::MatrixXd> {
public:
  void factorize(const Eigen::MatrixXd& op, const std::string& what) {
    lu_.compute(op);
    if (!lu_.isInvertible())
      throw NumericError("singular " + what + " operator");
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }

private:
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

inline Eigen::Index step_count(double dt, double t_end) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(t_end > 0.0)) throw ConfigError("end time must be positive");
  const auto steps = static_cast<Eigen::Index>(std::llround(t_end / dt));
  if (steps < 1) throw ConfigError("end time shorter than one step");
  return steps;
}

}  // namespace detail

// Backward Euler for E u' = A u + f s(t):
//   (E - dt A) u_{k+1} = E u_k + dt f s(t_{k+1}).
// The step operator is factorized once and reused for every step.
template <class Matrix>
TransientSolution implicit_euler(const DescriptorSystem<Matrix>& sys,
                                 const LoadSignal& signal, double dt,
                                 double t_end,
                                 const Eigen::VectorXd& initial_state = {},
                                 SolveStats* stats = nullptr) {
  if (sys.kind != SystemKind::FirstOrder)
    throw ConfigError("implicit Euler integrates first-order systems");
  const Eigen::Index n = sys.n();
  const Eigen::Index steps = detail::step_count(dt, t_end);

  Eigen::VectorXd u = initial_state.size() == 0
                          ? Eigen::VectorXd::Zero(n).eval()
                          : initial_state;
  if (u.size() != n) throw ConfigError("initial state dimension mismatch");

  detail::OperatorSolver<Matrix> solver;
  const Matrix op = sys.E - dt * sys.A;
  solver.factorize(op, "implicit Euler step (E - dt A)");
  if (stats) stats->step_factorizations += 1;

  TransientSolution sol;
  sol.dt = dt;
  sol.times.resize(steps + 1);
  sol.states.resize(n, steps + 1);
  sol.states.col(0) = u;
  for (Eigen::Index k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Eigen::VectorXd rhs = sys.E * u + dt * signal(t) * sys.f;
    u = solver.solve(rhs);
    sol.states.col(k) = u;
  }
  for (Eigen::Index k = 0; k <= steps; ++k)
    sol.times[k] = static_cast<double>(k) * dt;
  sol.outputs = sys.D * sol.states;
  return sol;
}

// Newmark-beta for E u'' = A u + f s(t) (average acceleration by default).
// The step operator (E - beta dt^2 A) is factorized once; the mass
// factorization for the initial acceleration is part of setup.
template <class Matrix>
TransientSolution newmark(const DescriptorSystem<Matrix>& sys,
                          const LoadSignal& signal, double dt, double t_end,
                          double beta = 0.25, double gamma = 0.5,
                          const Eigen::VectorXd& initial_state = {},
                          const Eigen::VectorXd& initial_velocity = {},
                          SolveStats* stats = nullptr,
                          Eigen::MatrixXd* velocities = nullptr) {
  if (sys.kind != SystemKind::SecondOrder)
    throw ConfigError("Newmark integrates second-order systems");
  if (!(beta > 0.0) || !(gamma > 0.0))
    throw ConfigError("Newmark parameters must be positive");
  const Eigen::Index n = sys.n();
  const Eigen::Index steps = detail::step_count(dt, t_end);

  Eigen::VectorXd u = initial_state.size() == 0
                          ? Eigen::VectorXd::Zero(n).eval()
                          : initial_state;
  Eigen::VectorXd v = initial_velocity.size() == 0
                          ? Eigen::VectorXd::Zero(n).eval()
                          : initial_velocity;
  if (u.size() != n || v.size() != n)
    throw ConfigError("initial state dimension mismatch");

  detail::OperatorSolver<Matrix> mass;
  mass.factorize(sys.E, "mass");
  Eigen::VectorXd a = mass.solve(sys.A * u + signal(0.0) * sys.f);

  detail::OperatorSolver<Matrix> solver;
  const Matrix op = sys.E - (beta * dt * dt) * sys.A;
  solver.factorize(op, "Newmark step (E - beta dt^2 A)");
  if (stats) stats->step_factorizations += 1;

  TransientSolution sol;
  sol.dt = dt;
  sol.times.resize(steps + 1);
  sol.states.resize(n, steps + 1);
  sol.states.col(0) = u;
  if (velocities) {
    velocities->resize(n, steps + 1);
    velocities->col(0) = v;
  }
  for (Eigen::Index k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Eigen::VectorXd u_pred = u + dt * v + (0.5 - beta) * dt * dt * a;
    const Eigen::VectorXd v_pred = v + (1.0 - gamma) * dt * a;
    a = solver.solve(sys.A * u_pred + signal(t) * sys.f);
    u = u_pred + beta * dt * dt * a;
    v = v_pred + gamma * dt * a;
    sol.states.col(k) = u;
    if (velocities) velocities->col(k) = v;
  }
  for (Eigen::Index k = 0; k <= steps; ++k)
    sol.times[k] = static_cast<double>(k) * dt;
  sol.outputs = sys.D * sol.states;
  return sol;
}

// Integrates with the stepper matching the system kind.
template <class Matrix>
TransientSolution solve_transient(const DescriptorSystem<Matrix>& sys,
                                  const LoadSignal& signal, double dt,
                                  double t_end, SolveStats* stats = nullptr) {
  if (sys.kind == SystemKind::FirstOrder)
    return implicit_euler(sys, signal, dt, t_end, {}, stats);
  return newmark(sys, signal, dt, t_end, 0.25, 0.5, {}, {}, stats);
}

// Lifts a reduced trajectory to full coordinates: u = basis z. Outputs are
// recomputed as D u when an output matrix is supplied, otherwise copied.
TransientSolution back_project(const TransientSolution& reduced,
                               const Eigen::MatrixXd& basis,
                               const SpMat* output_matrix = nullptr);

}  // namespace boxmor
