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

#include "ergodraw/trajectory.hpp"

#include <cmath>

#include "ergodraw/errors.hpp"

namespace ergodraw {

TrajectoryBuilder::TrajectoryBuilder(DynamicsKind kind, double dt, int expected_samples)
    : kind_(kind), dt_(dt), dim_(state_dimension(kind)) {
  if (!(dt > 0)) throw ValidationError("trajectory time step must be positive");
  states_.reserve(static_cast<std::size_t>(std::max(0, expected_samples)) * dim_);
  controls_.reserve(static_cast<std::size_t>(std::max(0, expected_samples)) * 2);
}

void TrajectoryBuilder::push(const Eigen::VectorXd& state, const Eigen::Vector2d& control) {
  if (state.size() != dim_) throw ValidationError("state dimension does not match trajectory");
  states_.insert(states_.end(), state.data(), state.data() + dim_);
  controls_.insert(controls_.end(), control.data(), control.data() + 2);
  ++count_;
}

Trajectory TrajectoryBuilder::finish() const {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Trajectory out;
  out.kind = kind_;
  out.dt = dt_;
  out.states = Eigen::Map<const RowMajor>(states_.data(), count_, dim_);
  out.controls = Eigen::Map<const RowMajor>(controls_.data(), count_, 2);
  return out;
}

Eigen::Matrix2Xd Trajectory::pen_path() const {
  return states.middleCols<2>(pen_offset(kind)).transpose();
}

CoefficientGrid<> trajectory_coeffs(const Trajectory& traj, int order, const Domain<>& domain) {
  if (traj.samples() < 1) throw ValidationError("trajectory is empty");
  return trajectory_coeffs<double>(traj.pen_path(), traj.dt, order, domain);
}

int stride_steps(double stride, double dt) {
  if (!(dt > 0) || !(stride > 0)) throw ValidationError("metric stride and time step must be positive");
  const double ratio = stride / dt;
  const long steps = std::lround(ratio);
  if (steps < 1 || std::abs(ratio - steps) > 1e-6 * ratio) {
    throw ValidationError("time step must divide the metric sampling stride");
  }
  return static_cast<int>(steps);
}

MetricRecorder::MetricRecorder(const CoefficientGrid<>& phi, double dt, double stride)
    : phi_(&phi), acc_(CosineBasis<>(phi.order(), phi.domain())), dt_(dt), stride_steps_(stride_steps(stride, dt)) {}

void MetricRecorder::add(const Eigen::Vector2d& pen) {
  acc_.add(pen, dt_);
  ++count_;
  if (count_ % stride_steps_ == 0) {
    series_.t.push_back(static_cast<double>(count_) * dt_);
    series_.epsilon.push_back(current_metric());
  }
}

double MetricRecorder::current_metric() const {
  return weighted_distance(acc_.basis().lambda(), acc_.coefficients().values(), phi_->values());
}

}  // namespace ergodraw
