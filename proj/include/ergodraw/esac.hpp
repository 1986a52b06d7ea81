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

// Ergodic iterative sequential action control. Each step rolls the current
// control tape forward over a short horizon, solves the adjoint of the
// history-plus-horizon ergodic cost, and inserts at most one saturated action
// where the mode-insertion gradient is most negative.

#pragma once

#include <Eigen/Dense>

#include <optional>

#include "ergodraw/dynamics.hpp"
#include "ergodraw/spectral.hpp"
#include "ergodraw/trajectory.hpp"

namespace ergodraw {

struct EsacConfig {
  std::optional<double> horizon;  // T_h in seconds; unset picks horizon_for(kind)
  double dt = 0.01;
  double duration = 60.0;
  Eigen::Matrix2d control_weight = 1e-7 * Eigen::Matrix2d::Identity();  // R
  double gamma = -5.0;        // alpha_d = gamma * J
  double max_duration = 0.1;  // lambda_max, seconds
  double shrink = 0.5;        // beta
  std::optional<double> saturation;  // falls back to the model's control bound
  Eigen::Vector2d fallback{1.0, 0.0};  // tried when the costate vanishes
  double degenerate_costate = 1e-10;   // max |rho| treated as zero
  double metric_stride = 0.1;

  void validate() const;
  double horizon_for(DynamicsKind kind) const;
  int horizon_steps(DynamicsKind kind) const;
};

/// Controls over the horizon, one column per dt, column 0 applies now.
using ControlTape = Eigen::Matrix2Xd;

struct Rollout {
  Eigen::MatrixXd states;  // n x (H + 1)
  Eigen::Matrix2Xd pens;   // 2 x H, pen at the start of each interval
};

Rollout rollout(const DynamicsModel& model, const Eigen::VectorXd& x0, const ControlTape& tape, double dt);

/// Coefficients of history [0, t] joined with the predicted pen path, averaged
/// over t + H dt.
Table<> combined_coefficients(const BasisAccumulator<>& history, const Eigen::Matrix2Xd& pens, double dt);

/// Lambda-weighted distance between combined coefficients and phi.
double horizon_cost(const BasisAccumulator<>& history, const Eigen::Matrix2Xd& pens, double dt,
                    const CoefficientGrid<>& phi);

/// Backward sweep rho_j = rho_{j+1} + dt (g_j + A^T rho_{j+1}), rho_H = 0.
/// `gradients` is n x H. Returns n x (H + 1).
Eigen::MatrixXd integrate_adjoint(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gradients, double dt);

/// Adjoint of the horizon cost along a rollout.
Eigen::MatrixXd adjoint_solve(const Rollout& path, const CoefficientGrid<>& phi, const Table<>& combined,
                              double averaging_time, const DynamicsModel& model, double dt);

/// u* = (Lambda + R^T)^-1 (Lambda u_nom + B^T rho alpha_d), Lambda = B^T rho rho^T B.
Eigen::VectorXd sac_action(const Eigen::MatrixXd& B, const Eigen::VectorXd& rho, const Eigen::VectorXd& u_nom,
                           const Eigen::MatrixXd& R, double alpha_d);

struct ActionSchedule {
  Eigen::Matrix2Xd action;          // u*(tau), 2 x H
  Eigen::VectorXd mode_insertion;   // dJ/dlambda(tau), H
};

ActionSchedule optimal_action_schedule(const DynamicsModel& model, const Rollout& path, const Eigen::MatrixXd& rho,
                                       const ControlTape& nominal, const EsacConfig& cfg, double alpha_d);

struct EsacStep {
  Eigen::Vector2d applied = Eigen::Vector2d::Zero();
  bool null_step = true;
  bool fallback = false;      // costate vanished; fixed direction was tried
  double mode_insertion = 0;  // dJ/dlambda at the chosen time (0 on null steps)
  double nominal_cost = 0;
  double accepted_cost = 0;
  int action_index = -1;      // tau* in horizon samples
  int action_steps = 0;       // accepted duration in samples
  int trials = 0;
};

/// Plans one action, writes it into the tape, pops the first column as the
/// applied control and recedes the tape by one step.
EsacStep esac_step(const Eigen::VectorXd& state, const BasisAccumulator<>& history, ControlTape& tape,
                   const CoefficientGrid<>& phi, const DynamicsModel& model, const EsacConfig& cfg);

struct EsacResult {
  Trajectory trajectory;
  RunReport report;
};

EsacResult run_esac(const CoefficientGrid<>& phi, const DynamicsModel& model, const EsacConfig& cfg = {});

}  // namespace ergodraw
