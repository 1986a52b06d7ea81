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

#include "ergodraw/cfec.hpp"

#include <cmath>

#include "ergodraw/errors.hpp"

namespace ergodraw {

void CfecConfig::validate() const {
  if (u_max && !(*u_max > 0)) throw ValidationError("cfec: u_max must be positive");
  if (std::abs(fallback.norm() - 1.0) > 1e-12) throw ValidationError("cfec: fallback direction must have unit norm");
  if (!(damping >= 0)) throw ValidationError("cfec: damping must be non-negative");
  if (!(dt > 0)) throw ValidationError("cfec: dt must be positive");
  if (!(duration >= metric_stride)) throw ValidationError("cfec: duration is shorter than the first metric sample");
  stride_steps(metric_stride, dt);
}

ErgodicDeviation::ErgodicDeviation(const CoefficientGrid<>& phi)
    : basis_(phi.order(), phi.domain()), phi_(phi.values()), s_(Table<>::Zero(phi_.rows(), phi_.cols())) {}

void ErgodicDeviation::accumulate(const Eigen::Vector2d& pen, double dt) {
  s_ += (basis_.evaluate(pen) - phi_) * dt;
  elapsed_ += dt;
}

CfecControl cfec_direction(const ErgodicDeviation& deviation, const Eigen::Vector2d& pen,
                           const Eigen::Vector2d& velocity, int order, double u_max, const CfecConfig& cfg) {
  if (order != 1 && order != 2) throw ValidationError("cfec: order must be 1 or 2");
  const auto& basis = deviation.basis();
  Eigen::Vector2d b = basis.weighted_gradient(pen, basis.lambda() * deviation.values());
  if (order == 2) b += cfg.damping * velocity;
  const double norm = b.norm();
  if (!(norm >= 1e-12)) return {u_max * cfg.fallback, true};
  return {-u_max * b / norm, false};
}

CfecResult run_cfec(const CoefficientGrid<>& phi, const DynamicsModel& model, const CfecConfig& cfg) {
  cfg.validate();
  int order = 0;
  switch (model.kind()) {
    case DynamicsKind::single_integrator:
      order = 1;
      break;
    case DynamicsKind::double_integrator:
      order = 2;
      break;
    case DynamicsKind::spring:
      throw UnsupportedDynamicsError(
          "cfec: closed-form ergodic control only supports linear first- and second-order (single/double) dynamics");
  }
  if (!(phi.domain() == model.domain())) throw ValidationError("cfec: distribution and model domains differ");

  const double u_max = cfg.u_max.value_or(model.control_bound());
  const int steps = static_cast<int>(std::lround(cfg.duration / cfg.dt));

  ErgodicDeviation deviation(phi);
  MetricRecorder recorder(phi, cfg.dt, cfg.metric_stride);
  TrajectoryBuilder builder(model.kind(), cfg.dt, steps);
  RunReport report;
  report.method = "cfec";

  Eigen::VectorXd x = model.initial_state();
  for (int i = 0; i < steps; ++i) {
    const Eigen::Vector2d pen = model.pen_of(x);
    const CfecControl control = cfec_direction(deviation, pen, model.pen_velocity(x), order, u_max, cfg);
    if (control.fallback) ++report.fallback_events;
    builder.push(x, control.u);
    recorder.add(pen);
    deviation.accumulate(pen, cfg.dt);
    x = model.step(x, control.u, cfg.dt);
  }
  report.metric = recorder.series();
  return {builder.finish(), std::move(report), std::move(deviation)};
}

}  // namespace ergodraw
