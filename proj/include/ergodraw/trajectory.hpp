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

#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "ergodraw/dynamics.hpp"
#include "ergodraw/spectral.hpp"

namespace ergodraw {

/// Uniformly sampled run: row i holds the state at t = i * dt and the control
/// applied over [t, t + dt). The run covers samples() * dt seconds.
struct Trajectory {
  DynamicsKind kind = DynamicsKind::single_integrator;
  double dt = 0.01;
  Eigen::MatrixXd states;    // N x n
  Eigen::MatrixXd controls;  // N x 2

  int samples() const { return static_cast<int>(states.rows()); }
  double duration() const { return samples() * dt; }
  Eigen::Matrix2Xd pen_path() const;
};

/// Collects rows during a run and packs them into a Trajectory.
class TrajectoryBuilder {
 public:
  TrajectoryBuilder(DynamicsKind kind, double dt, int expected_samples = 0);
  void push(const Eigen::VectorXd& state, const Eigen::Vector2d& control);
  int samples() const { return count_; }
  Trajectory finish() const;

 private:
  DynamicsKind kind_;
  double dt_;
  int dim_;
  int count_ = 0;
  std::vector<double> states_;
  std::vector<double> controls_;
};

CoefficientGrid<> trajectory_coeffs(const Trajectory& traj, int order, const Domain<>& domain);

/// Ergodic metric sampled at a fixed stride, first sample one stride in.
struct MetricSeries {
  std::vector<double> t;
  std::vector<double> epsilon;

  bool empty() const { return t.empty(); }
  double front() const { return epsilon.front(); }
  double back() const { return epsilon.back(); }
};

/// Feeds pen samples into a running accumulator and records the metric every
/// `stride` seconds of accumulated time.
class MetricRecorder {
 public:
  MetricRecorder(const CoefficientGrid<>& phi, double dt, double stride = 0.1);

  void add(const Eigen::Vector2d& pen);
  const MetricSeries& series() const { return series_; }
  const BasisAccumulator<>& accumulator() const { return acc_; }
  double current_metric() const;

 private:
  const CoefficientGrid<>* phi_;
  BasisAccumulator<> acc_;
  double dt_;
  int stride_steps_;
  long count_ = 0;
  MetricSeries series_;
};

/// Number of integration steps per metric sample; throws unless dt divides the stride.
int stride_steps(double stride, double dt);

struct RunReport {
  std::string method;
  MetricSeries metric;
  int fallback_events = 0;         // closed-form control: degenerate direction
  int null_steps = 0;              // SAC: no acceptable action this step
  int line_search_trials = 0;      // SAC durations / PTO step lengths tried
  std::vector<double> mode_insertion;  // SAC: chosen dJ/dlambda per step (0 on null steps)
  std::vector<double> iteration_costs; // PTO: J of the initial and each accepted iterate
  int iterations = 0;              // PTO: accepted iterations
  std::string termination;         // PTO: why the descent loop stopped

  double final_metric() const { return metric.back(); }
};

}  // namespace ergodraw
