/*
 Copyright 2026 The ergodraw Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Projection-based trajectory optimization. Gradient descent in the space of
// state/control curves: each iteration solves a linear-quadratic subproblem
// for a descent direction, takes an Armijo step along it and projects the
// result back onto dynamically feasible trajectories with a Riccati feedback.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

#include "ergodraw/dynamics.hpp"
#include "ergodraw/spectral.hpp"
#include "ergodraw/trajectory.hpp"

namespace ergodraw {

struct SpiralInit {
  double radius = 0.3;   // final radius, domain units
  double period = 10.0;  // seconds per revolution
};

struct PtoConfig {
  double duration = 60.0;
  double dt = 0.01;
  Eigen::Matrix2d control_weight = 0.05 * Eigen::Matrix2d::Identity();  // R
  std::optional<Eigen::MatrixXd> state_metric;  // Q_z, identity when unset
  Eigen::Matrix2d control_metric = Eigen::Matrix2d::Identity();  // R_v
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 20;
  double tolerance = 1e-6;
  int max_iterations = 100;
  std::optional<Eigen::Matrix2Xd> initial_controls;  // 2 x N, overrides the spiral
  SpiralInit spiral;
  double metric_stride = 0.1;

  void validate(int state_dim) const;
  int steps() const;
};

/// Dynamically consistent pair of curves on the uniform grid: states are the
/// N samples x_0..x_{N-1}, controls u_0..u_{N-1}.
struct TrajectoryIterate {
  Eigen::MatrixXd states;   // n x N
  Eigen::Matrix2Xd controls;
  double cost = 0;
};

/// Deterministic outward spiral from the domain center, expressed as velocity
/// (single) or force (double, spring) commands.
Eigen::Matrix2Xd spiral_controls(const DynamicsModel& model, int steps, double dt, const SpiralInit& spiral);

/// Open-loop rollout of a control schedule from the model's start state.
TrajectoryIterate simulate(const DynamicsModel& model, const Eigen::Matrix2Xd& controls, double dt);

double ergodic_cost(const TrajectoryIterate& it, const DynamicsModel& model, const CoefficientGrid<>& phi);
double effort_cost(const TrajectoryIterate& it, const Eigen::Matrix2d& R, double dt);

/// J = ergodic metric + int 1/2 u^T R u dt.
double total_cost(const TrajectoryIterate& it, const DynamicsModel& model, const CoefficientGrid<>& phi,
                  const PtoConfig& cfg);

/// Pointwise derivative of the ergodic term with respect to the state,
/// a(t) = sum_k Lambda_k 2 (c_k - phi_k) / T grad F_k(pen(t)), lifted to state space.
Eigen::MatrixXd ergodic_gradient(const TrajectoryIterate& it, const DynamicsModel& model,
                                 const CoefficientGrid<>& phi, double dt);

/// min int a^T z + b^T v + 1/2 (z^T Q z + v^T R v) dt  s.t.  z' = A z + B v, z(0) = 0.
struct LqProblem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  Eigen::MatrixXd a;  // n x N
  Eigen::MatrixXd b;  // m x N
  double dt = 0.01;
  /// Discrete map z_{i+1} = propagate(z_i, v_i); RK4 on (A, B) when empty.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> propagate;
};

struct LqSolution {
  Eigen::MatrixXd z;                  // n x N
  Eigen::MatrixXd v;                  // m x N
  std::vector<Eigen::MatrixXd> gain;  // R^-1 B^T P(t_i), m x n each
  double directional_derivative = 0;  // int a^T z + b^T v dt
};

/// First-order backward Riccati/affine sweep on the grid, then a forward pass.
LqSolution solve_lq_descent(const LqProblem& problem);

/// Descent direction of total_cost at the iterate.
LqSolution descent_direction(const TrajectoryIterate& it, const DynamicsModel& model, const CoefficientGrid<>& phi,
                             const PtoConfig& cfg);

/// u = mu + K (alpha - x) rolled through the true dynamics from alpha_0.
/// `reflections` (optional) receives the number of samples where the rollout
/// had to be folded back into the workspace.
TrajectoryIterate project(const Eigen::MatrixXd& alpha, const Eigen::Matrix2Xd& mu,
                          const std::vector<Eigen::MatrixXd>& gains, const DynamicsModel& model, double dt,
                          int* reflections = nullptr);

struct PtoResult {
  Trajectory trajectory;
  RunReport report;
  TrajectoryIterate iterate;
  std::vector<double> directional_derivatives;  // one per descent_direction call
};

PtoResult run_pto(const CoefficientGrid<>& phi, const DynamicsModel& model, const PtoConfig& cfg = {});

}  // namespace ergodraw
