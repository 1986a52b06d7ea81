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

// Closed-form ergodic control: an infinitesimal-horizon feedback law. At each
// step the control points against the gradient of the accumulated coverage
// deviation and always has the full magnitude u_max.

#pragma once

#include <Eigen/Dense>

#include <optional>

#include "ergodraw/dynamics.hpp"
#include "ergodraw/spectral.hpp"
#include "ergodraw/trajectory.hpp"

namespace ergodraw {

struct CfecConfig {
  std::optional<double> u_max;  // falls back to the model's control bound
  Eigen::Vector2d fallback{1.0, 0.0};
  double damping = 0.0;  // velocity term of the second-order law
  double dt = 0.01;
  double duration = 60.0;
  double metric_stride = 0.1;

  void validate() const;
};

/// S_k(t) = int_0^t F_k(x(tau)) dtau - t phi_k.
class ErgodicDeviation {
 public:
  explicit ErgodicDeviation(const CoefficientGrid<>& phi);

  /// One left-Riemann increment (F_k(pen) - phi_k) dt.
  void accumulate(const Eigen::Vector2d& pen, double dt);

  const Table<>& values() const { return s_; }
  double elapsed() const { return elapsed_; }
  const CosineBasis<>& basis() const { return basis_; }

 private:
  CosineBasis<> basis_;
  Table<> phi_;
  Table<> s_;
  double elapsed_ = 0;
};

struct CfecControl {
  Eigen::Vector2d u;
  bool fallback = false;
};

/// order 1: u = -u_max B/|B|; order 2: u = -u_max (B + c_d v)/|B + c_d v|,
/// with B = sum_k Lambda_k S_k grad F_k(pen).
CfecControl cfec_direction(const ErgodicDeviation& deviation, const Eigen::Vector2d& pen,
                           const Eigen::Vector2d& velocity, int order, double u_max, const CfecConfig& cfg);

struct CfecResult {
  Trajectory trajectory;
  RunReport report;
  ErgodicDeviation deviation;
};

/// Throws UnsupportedDynamicsError for the spring model.
CfecResult run_cfec(const CoefficientGrid<>& phi, const DynamicsModel& model, const CfecConfig& cfg = {});

}  // namespace ergodraw
