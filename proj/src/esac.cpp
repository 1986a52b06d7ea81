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

#include "ergodraw/esac.hpp"

#include <cmath>

#include "ergodraw/errors.hpp"

namespace ergodraw {

void EsacConfig::validate() const {
  if (!(dt > 0)) throw ValidationError("esac: dt must be positive");
  if (horizon && !(*horizon >= dt)) throw ValidationError("esac: horizon must be at least one time step");
  if (!(gamma < 0)) throw ValidationError("esac: gamma must be negative");
  if (!(max_duration >= dt)) throw ValidationError("esac: max action duration must be at least one time step");
  if (!(shrink > 0 && shrink < 1)) throw ValidationError("esac: line-search shrink factor must lie in (0, 1)");
  if (std::abs(fallback.norm() - 1.0) > 1e-12) throw ValidationError("esac: fallback direction must have unit norm");
  if (saturation && !(*saturation > 0)) throw ValidationError("esac: saturation must be positive");
  const Eigen::LLT<Eigen::Matrix2d> llt(0.5 * (control_weight + control_weight.transpose()));
  if (!control_weight.allFinite() || llt.info() != Eigen::Success ||
      !(control_weight - control_weight.transpose()).isZero(1e-12)) {
    throw ValidationError("esac: control weight R must be symmetric positive-definite");
  }
  if (!(duration >= metric_stride)) throw ValidationError("esac: duration is shorter than the first metric sample");
  stride_steps(metric_stride, dt);
}

// First-order pens react within a fraction of a second; longer windows only
// blur the predicted coverage. Second-order systems need room to turn.
double EsacConfig::horizon_for(DynamicsKind kind) const {
  if (horizon) return *horizon;
  return kind == DynamicsKind::single_integrator ? 0.2 : 0.5;
}

int EsacConfig::horizon_steps(DynamicsKind kind) const {
  return std::max(1, static_cast<int>(std::lround(horizon_for(kind) / dt)));
}

Rollout rollout(const DynamicsModel& model, const Eigen::VectorXd& x0, const ControlTape& tape, double dt) {
  const auto h = tape.cols();
  Rollout out{Eigen::MatrixXd(model.state_dim(), h + 1), Eigen::Matrix2Xd(2, h)};
  out.states.col(0) = x0;
  for (Eigen::Index j = 0; j < h; ++j) {
    out.pens.col(j) = model.pen_of(out.states.col(j));
    out.states.col(j + 1) = model.step(out.states.col(j), tape.col(j), dt);
  }
  return out;
}

Table<> combined_coefficients(const BasisAccumulator<>& history, const Eigen::Matrix2Xd& pens, double dt) {
  const auto& basis = history.basis();
  const auto n = pens.cols();
  Eigen::MatrixXd c1(basis.size(), n);
  Eigen::MatrixXd c2(basis.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    detail::check_inside<double>(pens.col(j), basis.domain());
    c1.col(j) = basis.cosines(0, pens(0, j));
    c2.col(j) = basis.cosines(1, pens(1, j));
  }
  Table<> predicted = (c1 * c2.transpose()).array() * basis.inverse_norm() * dt;
  const double total = history.elapsed() + dt * static_cast<double>(n);
  return (history.integrals() + predicted) / total;
}

double horizon_cost(const BasisAccumulator<>& history, const Eigen::Matrix2Xd& pens, double dt,
                    const CoefficientGrid<>& phi) {
  return weighted_distance(history.basis().lambda(), combined_coefficients(history, pens, dt), phi.values());
}

Eigen::MatrixXd integrate_adjoint(const Eigen::MatrixXd& A, const Eigen::MatrixXd& gradients, double dt) {
  const auto h = gradients.cols();
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(gradients.rows(), h + 1);
  const Eigen::MatrixXd at = A.transpose();
  for (Eigen::Index j = h - 1; j >= 0; --j) {
    rho.col(j) = rho.col(j + 1) + dt * (gradients.col(j) + at * rho.col(j + 1));
  }
  return rho;
}

Eigen::MatrixXd adjoint_solve(const Rollout& path, const CoefficientGrid<>& phi, const Table<>& combined,
                              double averaging_time, const DynamicsModel& model, double dt) {
  const CosineBasis<> basis(phi.order(), phi.domain());
  const Table<> weights = basis.lambda() * 2.0 * (combined - phi.values()) / averaging_time;
  const auto h = path.pens.cols();
  Eigen::MatrixXd gradients(model.state_dim(), h);
  for (Eigen::Index j = 0; j < h; ++j) {
    gradients.col(j) = model.lift_pen_gradient(basis.weighted_gradient(path.pens.col(j), weights));
  }
  return integrate_adjoint(model.A(), gradients, dt);
}

Eigen::VectorXd sac_action(const Eigen::MatrixXd& B, const Eigen::VectorXd& rho, const Eigen::VectorXd& u_nom,
                           const Eigen::MatrixXd& R, double alpha_d) {
  const Eigen::VectorXd btr = B.transpose() * rho;
  const Eigen::MatrixXd lambda = btr * btr.transpose();
  return (lambda + R.transpose()).ldlt().solve(lambda * u_nom + btr * alpha_d);
}

ActionSchedule optimal_action_schedule(const DynamicsModel& model, const Rollout& path, const Eigen::MatrixXd& rho,
                                       const ControlTape& nominal, const EsacConfig& cfg, double alpha_d) {
  const auto h = nominal.cols();
  ActionSchedule out{Eigen::Matrix2Xd(2, h), Eigen::VectorXd(h)};
  for (Eigen::Index j = 0; j < h; ++j) {
    const Linearization lin = model.linearize(path.states.col(j), nominal.col(j));
    const Eigen::VectorXd u = sac_action(lin.B, rho.col(j), nominal.col(j), cfg.control_weight, alpha_d);
    out.action.col(j) = u;
    out.mode_insertion(j) = rho.col(j).dot(lin.B * (u - nominal.col(j)));
  }
  return out;
}

namespace {

void recede(ControlTape& tape) {
  const auto h = tape.cols();
  if (h > 1) tape.leftCols(h - 1) = tape.rightCols(h - 1).eval();
  tape.col(h - 1).setZero();
}

}  // namespace

EsacStep esac_step(const Eigen::VectorXd& state, const BasisAccumulator<>& history, ControlTape& tape,
                   const CoefficientGrid<>& phi, const DynamicsModel& model, const EsacConfig& cfg) {
  const double dt = cfg.dt;
  const auto h = tape.cols();
  const double bound = cfg.saturation.value_or(model.control_bound());
  EsacStep out;

  const Rollout nominal = rollout(model, state, tape, dt);
  const Table<> combined = combined_coefficients(history, nominal.pens, dt);
  out.nominal_cost = weighted_distance(history.basis().lambda(), combined, phi.values());
  out.accepted_cost = out.nominal_cost;

  const double averaging_time = history.elapsed() + dt * static_cast<double>(h);
  const Eigen::MatrixXd rho = adjoint_solve(nominal, phi, combined, averaging_time, model, dt);
  const ActionSchedule schedule =
      optimal_action_schedule(model, nominal, rho, tape, cfg, cfg.gamma * out.nominal_cost);

  Eigen::Index best = 0;
  // minCoeff keeps the first index on ties.
  double best_gradient = schedule.mode_insertion.minCoeff(&best);
  Eigen::Vector2d action = saturate(schedule.action.col(best), bound);
  if (out.nominal_cost > 0 && rho.lpNorm<Eigen::Infinity>() < cfg.degenerate_costate) {
    // Critical point of the horizon cost (e.g. a symmetric image seen from its
    // center): first-order sensitivity vanishes, so try the fixed direction.
    out.fallback = true;
    best = 0;
    best_gradient = 0;
    action = bound * cfg.fallback;
  }
  if (best_gradient < 0 || out.fallback) {
    double lambda = cfg.max_duration;
    for (;;) {
      const int steps = std::max(1, static_cast<int>(std::floor(lambda / dt + 1e-9)));
      const int span = static_cast<int>(std::min<Eigen::Index>(steps, h - best));
      ControlTape candidate = tape;
      candidate.middleCols(best, span).colwise() = action;
      const Rollout trial = rollout(model, state, candidate, dt);
      const double cost = horizon_cost(history, trial.pens, dt, phi);
      ++out.trials;
      if (cost < out.nominal_cost) {
        tape = std::move(candidate);
        out.null_step = false;
        out.mode_insertion = best_gradient;
        out.accepted_cost = cost;
        out.action_index = static_cast<int>(best);
        out.action_steps = span;
        break;
      }
      if (steps == 1) break;
      lambda *= cfg.shrink;
    }
  }

  out.applied = tape.col(0);
  recede(tape);
  return out;
}

EsacResult run_esac(const CoefficientGrid<>& phi, const DynamicsModel& model, const EsacConfig& cfg) {
  cfg.validate();
  if (!(phi.domain() == model.domain())) throw ValidationError("esac: distribution and model domains differ");
  const int steps = static_cast<int>(std::lround(cfg.duration / cfg.dt));

  MetricRecorder recorder(phi, cfg.dt, cfg.metric_stride);
  TrajectoryBuilder builder(model.kind(), cfg.dt, steps);
  RunReport report;
  report.method = "esac";
  report.mode_insertion.reserve(static_cast<std::size_t>(steps));

  ControlTape tape = ControlTape::Zero(2, cfg.horizon_steps(model.kind()));
  Eigen::VectorXd x = model.initial_state();
  for (int i = 0; i < steps; ++i) {
    const EsacStep step = esac_step(x, recorder.accumulator(), tape, phi, model, cfg);
    if (step.null_step) ++report.null_steps;
    if (step.fallback && !step.null_step) ++report.fallback_events;
    report.line_search_trials += step.trials;
    report.mode_insertion.push_back(step.mode_insertion);
    builder.push(x, step.applied);
    recorder.add(model.pen_of(x));
    x = model.step(x, step.applied, cfg.dt);
  }
  report.metric = recorder.series();
  return {builder.finish(), std::move(report)};
}

}  // namespace ergodraw
