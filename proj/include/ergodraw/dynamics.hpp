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

// Planar drawing systems. All three models are linear time-invariant,
// xdot = A x + B u, with a two-dimensional control:
//
//   single:  x = (p)                 pdot = u
//   double:  x = (p, v)              pdot = v, vdot = u
//   spring:  x = (p_c, v_c, p_d, v_d) carrier p_c is forced, the pen p_d hangs
//            off it through a damped spring.
//
// Positions are kept inside the workspace by reflection.

#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

#include "ergodraw/spectral.hpp"

namespace ergodraw {

enum class DynamicsKind { single_integrator, double_integrator, spring };

DynamicsKind parse_dynamics_kind(std::string_view name);
std::string_view to_string(DynamicsKind kind);

/// Index of the first pen coordinate within the state vector.
int pen_offset(DynamicsKind kind);
int state_dimension(DynamicsKind kind);

struct SpringParams {
  double stiffness = 0;    ///< k_s, force per length
  double damping = 0;      ///< b, force time per length
  double carrier_mass = 1;
  double pen_mass = 1;

  /// Parameters from natural frequency (rad/s) and damping ratio of the pen.
  static SpringParams from_modal(double natural_frequency, double damping_ratio, double pen_mass = 1.0,
                                 double carrier_mass = 1.0);
  static SpringParams defaults() { return from_modal(2.0 * std::numbers::pi, 0.1); }
};

struct Linearization {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
};

class DynamicsModel {
 public:
  static DynamicsModel single_integrator(Domain<> domain = {}, double control_bound = 0.4);
  static DynamicsModel double_integrator(Domain<> domain = {}, double control_bound = 1.0);
  static DynamicsModel spring(Domain<> domain = {}, SpringParams params = SpringParams::defaults(),
                              double control_bound = 1.0);
  /// Default bound per kind: 0.4 (velocity) for single, 1.0 (force) otherwise.
  static DynamicsModel make(DynamicsKind kind, Domain<> domain = {});

  DynamicsKind kind() const { return kind_; }
  int state_dim() const { return static_cast<int>(a_.rows()); }
  static constexpr int control_dim() { return 2; }
  const Domain<>& domain() const { return domain_; }
  double control_bound() const { return control_bound_; }
  const SpringParams& spring_params() const { return spring_; }

  /// Time derivative of the state under a constant control.
  Eigen::VectorXd drift_and_input(const Eigen::VectorXd& x, const Eigen::Vector2d& u) const;

  /// One RK4 step with u held over [0, dt], followed by boundary reflection.
  /// Stiff oscillatory models take several equal RK4 substeps inside dt.
  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt) const;

  /// Same as step() but without the boundary reflection.
  Eigen::VectorXd step_free(const Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt) const;

  Linearization linearize(const Eigen::VectorXd& x, const Eigen::Vector2d& u) const;
  const Eigen::MatrixXd& A() const { return a_; }
  const Eigen::MatrixXd& B() const { return b_; }

  Eigen::Vector2d pen_of(const Eigen::VectorXd& x) const;

  /// Embeds a gradient with respect to the pen position into state space.
  Eigen::VectorXd lift_pen_gradient(const Eigen::Vector2d& g) const;

  /// Velocity of the drawn point (zero for the single integrator).
  Eigen::Vector2d pen_velocity(const Eigen::VectorXd& x) const;

  /// Pen at the domain center, everything at rest.
  Eigen::VectorXd initial_state() const;

  /// Reflects positions back into the workspace, negating velocities.
  void reflect(Eigen::VectorXd& x) const;

 private:
  DynamicsModel(DynamicsKind kind, Domain<> domain, double control_bound, SpringParams spring);
  void check_dims(const Eigen::VectorXd& x) const;
  int substeps(double dt) const;

  DynamicsKind kind_;
  Domain<> domain_;
  double control_bound_;
  SpringParams spring_;
  double max_frequency_ = 0;  // rad/s, drives RK4 substepping
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
};

/// Componentwise clamp to [-bound, bound].
Eigen::Vector2d saturate(const Eigen::Vector2d& u, double bound);

}  // namespace ergodraw
