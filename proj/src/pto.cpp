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

#include "ergodraw/pto.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ergodraw/errors.hpp"

namespace ergodraw {

namespace {

bool is_spd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || !m.allFinite() || !(m - m.transpose()).isZero(1e-12)) return false;
  return Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success;
}

Eigen::Matrix2Xd pen_rows(const TrajectoryIterate& it, const DynamicsModel& model) {
  return it.states.middleRows<2>(pen_offset(model.kind()));
}

}  // namespace

void PtoConfig::validate(int state_dim) const {
  if (!(dt > 0)) throw ValidationError("pto: dt must be positive");
  if (!(duration >= metric_stride)) throw ValidationError("pto: duration is shorter than the first metric sample");
  stride_steps(metric_stride, dt);
  if (!is_spd(control_weight)) throw ValidationError("pto: control weight R must be symmetric positive-definite");
  if (!is_spd(control_metric)) throw ValidationError("pto: descent metric R_v must be symmetric positive-definite");
  if (state_metric && (state_metric->rows() != state_dim || !is_spd(*state_metric))) {
    throw ValidationError("pto: descent metric Q_z must be symmetric positive-definite of state dimension");
  }
  if (!(armijo_c1 > 0 && armijo_c1 < 1)) throw ValidationError("pto: Armijo c1 must lie in (0, 1)");
  if (!(shrink > 0 && shrink < 1)) throw ValidationError("pto: shrink factor must lie in (0, 1)");
  if (max_backtracks < 1) throw ValidationError("pto: max_backtracks must be at least 1");
  if (!(tolerance > 0)) throw ValidationError("pto: tolerance must be positive");
  if (max_iterations < 0) throw ValidationError("pto: max_iterations must be non-negative");
  if (initial_controls && initial_controls->cols() != steps()) {
    throw ValidationError("pto: initial control schedule must have one column per time step");
  }
  if (!(spiral.radius >= 0) || !(spiral.period > 0)) throw ValidationError("pto: invalid spiral parameters");
}

int PtoConfig::steps() const { return static_cast<int>(std::lround(duration / dt)); }

Eigen::Matrix2Xd spiral_controls(const DynamicsModel& model, int steps, double dt, const SpiralInit& spiral) {
  Eigen::Matrix2Xd u(2, steps);
  const double total = steps * dt;
  const double omega = 2.0 * std::numbers::pi / spiral.period;
  const double growth = spiral.radius / total;
  const double mass = model.kind() == DynamicsKind::spring ? model.spring_params().carrier_mass : 1.0;
  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    const double theta = omega * t;
    const double r = growth * t;
    const Eigen::Vector2d radial(std::cos(theta), std::sin(theta));
    const Eigen::Vector2d tangent(-std::sin(theta), std::cos(theta));
    if (model.kind() == DynamicsKind::single_integrator) {
      u.col(i) = growth * radial + r * omega * tangent;
    } else {
      u.col(i) = mass * (2.0 * growth * omega * tangent - r * omega * omega * radial);
    }
  }
  return u;
}

TrajectoryIterate simulate(const DynamicsModel& model, const Eigen::Matrix2Xd& controls, double dt) {
  TrajectoryIterate it{Eigen::MatrixXd(model.state_dim(), controls.cols()), controls, 0.0};
  if (controls.cols() < 1) throw ValidationError("control schedule is empty");
  it.states.col(0) = model.initial_state();
  for (Eigen::Index i = 0; i + 1 < controls.cols(); ++i) {
    it.states.col(i + 1) = model.step(it.states.col(i), controls.col(i), dt);
  }
  return it;
}

double ergodic_cost(const TrajectoryIterate& it, const DynamicsModel& model, const CoefficientGrid<>& phi) {
  const double dt = 1.0;  // uniform weights; the average does not depend on dt
  return ergodic_metric(trajectory_coeffs<double>(pen_rows(it, model), dt, phi.order(), phi.domain()), phi);
}

double effort_cost(const TrajectoryIterate& it, const Eigen::Matrix2d& R, double dt) {
  return 0.5 * dt * (it.controls.array() * (R * it.controls).array()).sum();
}

double total_cost(const TrajectoryIterate& it, const DynamicsModel& model, const CoefficientGrid<>& phi,
                  const PtoConfig& cfg) {
  return ergodic_cost(it, model, phi) + effort_cost(it, cfg.control_weight, cfg.dt);
}

Eigen::MatrixXd ergodic_gradient(const TrajectoryIterate& it, const DynamicsModel& model,
                                 const CoefficientGrid<>& phi, double dt) {
  const Eigen::Matrix2Xd pens = pen_rows(it, model);
  const auto n = pens.cols();
  const CosineBasis<> basis(phi.order(), phi.domain());
  const CoefficientGrid<> c = trajectory_coeffs<double>(pens, 1.0, phi.order(), phi.domain());
  const double total = static_cast<double>(n) * dt;
  const Table<> weights = basis.lambda() * 2.0 * (c.values() - phi.values()) / total;
  Eigen::MatrixXd a(model.state_dim(), n);
  for (Eigen::Index i = 0; i < n; ++i) a.col(i) = model.lift_pen_gradient(basis.weighted_gradient(pens.col(i), weights));
  return a;
}

LqSolution solve_lq_descent(const LqProblem& p) {
  const auto n = p.A.rows();
  const auto m = p.B.cols();
  const auto steps = p.a.cols();
  if (p.A.cols() != n || p.B.rows() != n || p.Q.rows() != n || p.R.rows() != m || p.a.rows() != n ||
      p.b.rows() != m || p.b.cols() != steps) {
    throw ValidationError("lq: inconsistent problem dimensions");
  }
  const Eigen::MatrixXd r_inv = p.R.inverse();
  const Eigen::MatrixXd s = p.B * r_inv * p.B.transpose();
  const Eigen::MatrixXd at = p.A.transpose();

  LqSolution out;
  out.gain.resize(static_cast<std::size_t>(steps));
  Eigen::MatrixXd affine(n, steps);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = steps - 1; i >= 0; --i) {
    const Eigen::MatrixXd P_next = P;
    r = r + p.dt * ((p.A - s * P_next).transpose() * r + p.a.col(i) - P_next * p.B * r_inv * p.b.col(i));
    P = P_next + p.dt * (at * P_next + P_next * p.A - P_next * s * P_next + p.Q);
    if (!P.allFinite() || !r.allFinite()) {
      std::ostringstream msg;
      msg << "Riccati sweep diverged at t = " << i * p.dt;
      throw NumericalError(msg.str());
    }
    out.gain[static_cast<std::size_t>(i)] = r_inv * p.B.transpose() * P;
    affine.col(i) = r;
  }

  const auto rk4 = [&](const Eigen::VectorXd& z, const Eigen::VectorXd& v) {
    const Eigen::VectorXd f = p.B * v;
    const Eigen::VectorXd k1 = p.A * z + f;
    const Eigen::VectorXd k2 = p.A * (z + 0.5 * p.dt * k1) + f;
    const Eigen::VectorXd k3 = p.A * (z + 0.5 * p.dt * k2) + f;
    const Eigen::VectorXd k4 = p.A * (z + p.dt * k3) + f;
    return Eigen::VectorXd(z + (p.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };

  out.z = Eigen::MatrixXd::Zero(n, steps);
  out.v = Eigen::MatrixXd::Zero(m, steps);
  double derivative = 0;
  for (Eigen::Index i = 0; i < steps; ++i) {
    const auto& gain = out.gain[static_cast<std::size_t>(i)];
    out.v.col(i) = -(gain * out.z.col(i) + r_inv * (p.B.transpose() * affine.col(i) + p.b.col(i)));
    derivative += p.dt * (p.a.col(i).dot(out.z.col(i)) + p.b.col(i).dot(out.v.col(i)));
    if (i + 1 < steps) {
      out.z.col(i + 1) = p.propagate ? p.propagate(out.z.col(i), out.v.col(i)) : rk4(out.z.col(i), out.v.col(i));
    }
  }
  out.directional_derivative = derivative;
  return out;
}

LqSolution descent_direction(const TrajectoryIterate& it, const DynamicsModel& model, const CoefficientGrid<>& phi,
                             const PtoConfig& cfg) {
  LqProblem p;
  p.A = model.A();
  p.B = model.B();
  p.Q = cfg.state_metric.value_or(Eigen::MatrixXd::Identity(model.state_dim(), model.state_dim()));
  p.R = cfg.control_metric;
  p.a = ergodic_gradient(it, model, phi, cfg.dt);
  p.b = cfg.control_weight * it.controls;
  p.dt = cfg.dt;
  // Perturbations follow the same discrete map as the states (no reflection).
  p.propagate = [&model, dt = cfg.dt](const Eigen::VectorXd& z, const Eigen::VectorXd& v) {
    return model.step_free(z, v, dt);
  };
  return solve_lq_descent(p);
}

TrajectoryIterate project(const Eigen::MatrixXd& alpha, const Eigen::Matrix2Xd& mu,
                          const std::vector<Eigen::MatrixXd>& gains, const DynamicsModel& model, double dt,
                          int* reflections) {
  const auto steps = mu.cols();
  if (alpha.cols() != steps || alpha.rows() != model.state_dim() ||
      static_cast<Eigen::Index>(gains.size()) != steps) {
    throw ValidationError("project: reference curves and gains must share the time grid");
  }
  TrajectoryIterate out{Eigen::MatrixXd(model.state_dim(), steps), Eigen::Matrix2Xd(2, steps), 0.0};
  Eigen::VectorXd x = alpha.col(0);
  model.reflect(x);
  int folded = 0;
  for (Eigen::Index i = 0; i < steps; ++i) {
    out.states.col(i) = x;
    const Eigen::Vector2d u = mu.col(i) + gains[static_cast<std::size_t>(i)] * (alpha.col(i) - x);
    out.controls.col(i) = u;
    if (i + 1 < steps) {
      Eigen::VectorXd next = model.step_free(x, u, dt);
      const Eigen::VectorXd free = next;
      model.reflect(next);
      if (next != free) ++folded;
      x = std::move(next);
    }
  }
  if (reflections) *reflections = folded;
  return out;
}

PtoResult run_pto(const CoefficientGrid<>& phi, const DynamicsModel& model, const PtoConfig& cfg) {
  cfg.validate(model.state_dim());
  if (!(phi.domain() == model.domain())) throw ValidationError("pto: distribution and model domains differ");
  const int steps = cfg.steps();

  PtoResult result;
  RunReport& report = result.report;
  report.method = "pto";

  const Eigen::Matrix2Xd initial =
      cfg.initial_controls ? *cfg.initial_controls : spiral_controls(model, steps, cfg.dt, cfg.spiral);
  TrajectoryIterate it = simulate(model, initial, cfg.dt);
  it.cost = total_cost(it, model, phi, cfg);
  report.iteration_costs.push_back(it.cost);
  report.termination = "max iterations";

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    const LqSolution dir = descent_direction(it, model, phi, cfg);
    result.directional_derivatives.push_back(dir.directional_derivative);
    if (std::abs(dir.directional_derivative) < cfg.tolerance) {
      report.termination = "converged";
      break;
    }
    if (dir.directional_derivative > 0) {
      report.termination = "not a descent direction";
      break;
    }
    double gamma = 1.0;
    bool accepted = false;
    TrajectoryIterate candidate;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      candidate = project(it.states + gamma * dir.z, it.controls + gamma * dir.v, dir.gain, model, cfg.dt);
      candidate.cost = total_cost(candidate, model, phi, cfg);
      ++report.line_search_trials;
      if (candidate.cost <= it.cost + cfg.armijo_c1 * gamma * dir.directional_derivative) {
        accepted = true;
        break;
      }
      gamma *= cfg.shrink;
    }
    if (!accepted) {
      report.termination = "line search exhausted";
      break;
    }
    it = std::move(candidate);
    ++report.iterations;
    report.iteration_costs.push_back(it.cost);
  }

  TrajectoryBuilder builder(model.kind(), cfg.dt, steps);
  MetricRecorder recorder(phi, cfg.dt, cfg.metric_stride);
  for (int i = 0; i < steps; ++i) {
    builder.push(it.states.col(i), it.controls.col(i));
    recorder.add(model.pen_of(it.states.col(i)));
  }
  report.metric = recorder.series();
  result.trajectory = builder.finish();
  result.iterate = std::move(it);
  return result;
}

}  // namespace ergodraw
