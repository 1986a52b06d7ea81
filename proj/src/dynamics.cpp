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

#include "ergodraw/dynamics.hpp"

#include <cmath>

#include "ergodraw/errors.hpp"

namespace ergodraw {

DynamicsKind parse_dynamics_kind(std::string_view name) {
  if (name == "single") return DynamicsKind::single_integrator;
  if (name == "double") return DynamicsKind::double_integrator;
  if (name == "spring") return DynamicsKind::spring;
  throw ValidationError("unknown dynamics '" + std::string(name) + "' (expected single, double or spring)");
}

std::string_view to_string(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::single_integrator:
      return "single";
    case DynamicsKind::double_integrator:
      return "double";
    case DynamicsKind::spring:
      return "spring";
  }
  return "unknown";
}

int pen_offset(DynamicsKind kind) { return kind == DynamicsKind::spring ? 4 : 0; }

int state_dimension(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::single_integrator:
      return 2;
    case DynamicsKind::double_integrator:
      return 4;
    case DynamicsKind::spring:
      return 8;
  }
  return 0;
}

SpringParams SpringParams::from_modal(double natural_frequency, double damping_ratio, double pen_mass,
                                      double carrier_mass) {
  SpringParams p;
  p.pen_mass = pen_mass;
  p.carrier_mass = carrier_mass;
  p.stiffness = natural_frequency * natural_frequency * pen_mass;
  p.damping = 2.0 * damping_ratio * natural_frequency * pen_mass;
  return p;
}

DynamicsModel::DynamicsModel(DynamicsKind kind, Domain<> domain, double control_bound, SpringParams spring)
    : kind_(kind), domain_(domain), control_bound_(control_bound), spring_(spring) {
  if (!(control_bound > 0) || !std::isfinite(control_bound)) throw ValidationError("control bound must be positive");
  const int n = state_dimension(kind);
  a_ = Eigen::MatrixXd::Zero(n, n);
  b_ = Eigen::MatrixXd::Zero(n, 2);
  const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  switch (kind) {
    case DynamicsKind::single_integrator:
      b_ = eye;
      break;
    case DynamicsKind::double_integrator:
      a_.block<2, 2>(0, 2) = eye;
      b_.block<2, 2>(2, 0) = eye;
      break;
    case DynamicsKind::spring: {
      if (!(spring.stiffness > 0) || !(spring.damping > 0) || !(spring.carrier_mass > 0) || !(spring.pen_mass > 0)) {
        throw ValidationError("spring stiffness, damping and masses must be positive");
      }
      const double ks = spring.stiffness / spring.pen_mass;
      const double bs = spring.damping / spring.pen_mass;
      a_.block<2, 2>(0, 2) = eye;  // p_c' = v_c
      a_.block<2, 2>(4, 6) = eye;  // p_d' = v_d
      a_.block<2, 2>(6, 0) = ks * eye;
      a_.block<2, 2>(6, 4) = -ks * eye;
      a_.block<2, 2>(6, 2) = bs * eye;
      a_.block<2, 2>(6, 6) = -bs * eye;
      b_.block<2, 2>(2, 0) = eye / spring.carrier_mass;
      max_frequency_ = std::sqrt(ks) + bs;
      break;
    }
  }
}

DynamicsModel DynamicsModel::single_integrator(Domain<> domain, double control_bound) {
  return DynamicsModel(DynamicsKind::single_integrator, domain, control_bound, {});
}

DynamicsModel DynamicsModel::double_integrator(Domain<> domain, double control_bound) {
  return DynamicsModel(DynamicsKind::double_integrator, domain, control_bound, {});
}

DynamicsModel DynamicsModel::spring(Domain<> domain, SpringParams params, double control_bound) {
  return DynamicsModel(DynamicsKind::spring, domain, control_bound, params);
}

DynamicsModel DynamicsModel::make(DynamicsKind kind, Domain<> domain) {
  switch (kind) {
    case DynamicsKind::single_integrator:
      return single_integrator(domain);
    case DynamicsKind::double_integrator:
      return double_integrator(domain);
    case DynamicsKind::spring:
      return spring(domain);
  }
  throw ValidationError("unknown dynamics kind");
}

void DynamicsModel::check_dims(const Eigen::VectorXd& x) const {
  if (x.size() != state_dim()) {
    throw ValidationError("state has dimension " + std::to_string(x.size()) + ", model '" +
                          std::string(to_string(kind_)) + "' expects " + std::to_string(state_dim()));
  }
}

Eigen::VectorXd DynamicsModel::drift_and_input(const Eigen::VectorXd& x, const Eigen::Vector2d& u) const {
  check_dims(x);
  return a_ * x + b_ * u;
}

int DynamicsModel::substeps(double dt) const {
  // Keep omega * h <= 0.02 so the per-step RK4 error stays near 1e-11.
  return std::max(1, static_cast<int>(std::ceil(max_frequency_ * dt / 0.02)));
}

Eigen::VectorXd DynamicsModel::step_free(const Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt) const {
  check_dims(x);
  if (!(dt > 0)) throw ValidationError("integration step must be positive");
  const int n = substeps(dt);
  const double h = dt / n;
  const Eigen::VectorXd forcing = b_ * u;
  Eigen::VectorXd y = x;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd k1 = a_ * y + forcing;
    const Eigen::VectorXd k2 = a_ * (y + 0.5 * h * k1) + forcing;
    const Eigen::VectorXd k3 = a_ * (y + 0.5 * h * k2) + forcing;
    const Eigen::VectorXd k4 = a_ * (y + h * k3) + forcing;
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y(i))) {
      throw NumericalError("integration produced a non-finite value in state entry " + std::to_string(i));
    }
  }
  return y;
}

Eigen::VectorXd DynamicsModel::step(const Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt) const {
  Eigen::VectorXd y = step_free(x, u, dt);
  reflect(y);
  return y;
}

namespace {

void reflect_axis(double& p, double* v, double length) {
  // Fold repeatedly in case a single step overshoots by more than a side.
  for (int guard = 0; guard < 64 && (p < 0 || p > length); ++guard) {
    p = p < 0 ? -p : 2.0 * length - p;
    if (v) *v = -*v;
  }
  if (p < 0 || p > length) throw NumericalError("boundary reflection did not converge");
}

}  // namespace

void DynamicsModel::reflect(Eigen::VectorXd& x) const {
  const auto fold = [&](int pos, int vel) {
    for (int axis = 0; axis < 2; ++axis) {
      reflect_axis(x(pos + axis), vel >= 0 ? &x(vel + axis) : nullptr, domain_.length(axis));
    }
  };
  switch (kind_) {
    case DynamicsKind::single_integrator:
      fold(0, -1);
      break;
    case DynamicsKind::double_integrator:
      fold(0, 2);
      break;
    case DynamicsKind::spring:
      fold(0, 2);
      fold(4, 6);
      break;
  }
}

Linearization DynamicsModel::linearize(const Eigen::VectorXd& x, const Eigen::Vector2d& /*u*/) const {
  check_dims(x);
  return {a_, b_};
}

Eigen::Vector2d DynamicsModel::pen_of(const Eigen::VectorXd& x) const {
  check_dims(x);
  return x.segment<2>(pen_offset(kind_));
}

Eigen::Vector2d DynamicsModel::pen_velocity(const Eigen::VectorXd& x) const {
  check_dims(x);
  if (kind_ == DynamicsKind::single_integrator) return Eigen::Vector2d::Zero();
  return x.segment<2>(pen_offset(kind_) + 2);
}

Eigen::VectorXd DynamicsModel::lift_pen_gradient(const Eigen::Vector2d& g) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(state_dim());
  out.segment<2>(pen_offset(kind_)) = g;
  return out;
}

Eigen::VectorXd DynamicsModel::initial_state() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(state_dim());
  x.segment<2>(0) = domain_.center();
  if (kind_ == DynamicsKind::spring) x.segment<2>(4) = domain_.center();
  return x;
}

Eigen::Vector2d saturate(const Eigen::Vector2d& u, double bound) {
  if (!(bound > 0)) throw ValidationError("saturation bound must be positive");
  return u.cwiseMax(-bound).cwiseMin(bound);
}

}  // namespace ergodraw
