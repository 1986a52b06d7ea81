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

#include <doctest.h>

#include <random>

#include "ergodraw/canvas.hpp"
#include "ergodraw/errors.hpp"
#include "ergodraw/esac.hpp"
#include "support.hpp"

using namespace ergodraw;

namespace {

CoefficientGrid<> letter_n(int order = 20) {
  return distribution_coeffs(to_distribution(rasterize_letter('N', 64, 64, 3), Domain<>()), order);
}

Eigen::Matrix2Xd random_pens(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::Matrix2Xd p(2, n);
  for (int i = 0; i < n; ++i) p.col(i) = Eigen::Vector2d(u(rng), u(rng));
  return p;
}

}  // namespace

TEST_CASE("horizon cost") {
  const Domain<> unit;
  const auto phi = letter_n(12);
  const CosineBasis<> basis(12, unit);
  SUBCASE("empty history, stationary rollout") {
    const BasisAccumulator<> history(basis);
    const Eigen::Vector2d p(0.4, 0.7);
    const Eigen::Matrix2Xd pens = p.replicate(1, 30);
    const auto c = trajectory_coeffs<double>(p.replicate(1, 1), 0.01, 12, unit);
    CHECK(horizon_cost(history, pens, 0.01, phi) == doctest::Approx(ergodic_metric(c, phi)).epsilon(1e-12));
  }
  SUBCASE("matching coefficients") {
    const BasisAccumulator<> history(basis);
    const Eigen::Matrix2Xd pens = random_pens(40, 2);
    const auto own = trajectory_coeffs(pens, 0.01, 12, unit);
    const CoefficientGrid<> target(own.values(), unit, CoefficientKind::distribution);
    CHECK(horizon_cost(history, pens, 0.01, target) < 1e-25);
  }
  SUBCASE("concatenation oracle") {
    const Eigen::Matrix2Xd past = random_pens(300, 3);
    const Eigen::Matrix2Xd ahead = random_pens(50, 4);
    BasisAccumulator<> history(basis);
    for (int i = 0; i < past.cols(); ++i) history.add(past.col(i), 0.01);
    Eigen::Matrix2Xd all(2, 350);
    all << past, ahead;
    const double oracle = ergodic_metric(trajectory_coeffs(all, 0.01, 12, unit), phi);
    CHECK(horizon_cost(history, ahead, 0.01, phi) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("adjoint") {
  SUBCASE("zero gradient") {
    const auto model = DynamicsModel::make(DynamicsKind::double_integrator);
    const Domain<> unit;
    const Eigen::Matrix2Xd pens = random_pens(25, 5);
    BasisAccumulator<> history(CosineBasis<>(10, unit));
    for (int i = 0; i < 25; ++i) history.add(pens.col(i), 0.01);
    Rollout path{Eigen::MatrixXd::Constant(4, 26, 0.5), pens};
    const CoefficientGrid<> phi(history.coefficients().values(), unit, CoefficientKind::distribution);
    const Eigen::MatrixXd rho = adjoint_solve(path, phi, phi.values(), 0.25, model, 0.01);
    CHECK(rho.cols() == 26);
    CHECK(rho.cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("single integrator with constant gradient") {
    const Eigen::Vector2d g(0.3, -1.2);
    const int h = 50;
    const double dt = 0.01;
    const Eigen::MatrixXd rho = integrate_adjoint(Eigen::MatrixXd::Zero(2, 2), g.replicate(1, h), dt);
    for (int j = 0; j <= h; ++j) CHECK((rho.col(j) - g * (h - j) * dt).norm() < 1e-14);
    CHECK(rho.col(h).norm() == 0.0);
  }
  SUBCASE("discrete duality with the forward sensitivity") {
    // z_{j+1} = z_j + dt (A z_j + w_j), z_0 = 0  =>  sum g_j.z_j = sum rho_{j+1}.w_j
    std::mt19937 rng(8);
    std::normal_distribution<double> n01;
    for (auto kind : {DynamicsKind::double_integrator, DynamicsKind::spring}) {
      const auto model = DynamicsModel::make(kind);
      const int n = model.state_dim();
      const int h = 60;
      const double dt = 0.01;
      Eigen::MatrixXd g(n, h), w(n, h);
      for (auto& v : g.reshaped()) v = n01(rng);
      for (auto& v : w.reshaped()) v = n01(rng);
      const Eigen::MatrixXd rho = integrate_adjoint(model.A(), g, dt);
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
      double lhs = 0, rhs = 0;
      for (int j = 0; j < h; ++j) {
        lhs += dt * g.col(j).dot(z);
        rhs += dt * rho.col(j + 1).dot(w.col(j));
        z += dt * (model.A() * z + w.col(j));
      }
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
  SUBCASE("converges to the continuous adjoint") {
    // rho' = -g - A^T rho, rho(T) = 0 for the double integrator in closed form.
    const auto model = DynamicsModel::make(DynamicsKind::double_integrator);
    Eigen::Vector4d g(0.7, -0.4, 0.2, 0.9);
    const double horizon = 0.5;
    const double dt = 1e-6;
    const int h = static_cast<int>(std::lround(horizon / dt));
    const Eigen::MatrixXd rho = integrate_adjoint(model.A(), g.replicate(1, h), dt);
    double worst = 0;
    for (int j = 0; j <= h; j += h / 10) {
      const double s = horizon - j * dt;
      Eigen::Vector4d exact;
      exact.head<2>() = g.head<2>() * s;
      exact.tail<2>() = g.tail<2>() * s + g.head<2>() * s * s / 2;
      worst = std::max(worst, (rho.col(j) - exact).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("sequential action") {
  SUBCASE("scalar hand case") {
    const Eigen::MatrixXd b = Eigen::MatrixXd::Ones(1, 1);
    const Eigen::VectorXd rho = Eigen::VectorXd::Ones(1);
    const Eigen::VectorXd u = sac_action(b, rho, Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1), -1.0);
    CHECK(u(0) == doctest::Approx(-0.5));
  }
  const auto model = DynamicsModel::make(DynamicsKind::double_integrator);
  EsacConfig cfg;
  const int h = 20;
  Rollout path{Eigen::MatrixXd::Constant(4, h + 1, 0.5), Eigen::Matrix2Xd::Constant(2, h, 0.5)};
  SUBCASE("zero costate and zero nominal") {
    const auto s = optimal_action_schedule(model, path, Eigen::MatrixXd::Zero(4, h + 1), ControlTape::Zero(2, h),
                                           cfg, -1.0);
    CHECK(s.action.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.mode_insertion.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("action equal to nominal") {
    // Costate with no component along B: u* = 0 = u_nom.
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(4, h + 1);
    rho.topRows(2).setConstant(1.0);
    const auto s = optimal_action_schedule(model, path, rho, ControlTape::Zero(2, h), cfg, -1.0);
    CHECK(s.action.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.mode_insertion.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("mode insertion gradient matches the vector field difference") {
    std::mt19937 rng(12);
    std::normal_distribution<double> n01;
    Eigen::MatrixXd rho(4, h + 1);
    for (auto& v : rho.reshaped()) v = n01(rng);
    ControlTape nominal(2, h);
    for (auto& v : nominal.reshaped()) v = 0.3 * n01(rng);
    const auto s = optimal_action_schedule(model, path, rho, nominal, cfg, -2.0);
    for (int j = 0; j < h; ++j) {
      const Eigen::VectorXd x = path.states.col(j);
      const double oracle =
          rho.col(j).dot(model.drift_and_input(x, s.action.col(j)) - model.drift_and_input(x, nominal.col(j)));
      CHECK(s.mode_insertion(j) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("single step") {
  const Domain<> unit;
  const auto model = DynamicsModel::make(DynamicsKind::single_integrator);
  EsacConfig cfg;
  SUBCASE("already ergodic gives a null step") {
    const Eigen::Vector2d p(0.3, 0.6);
    const CosineBasis<> basis(10, unit);
    BasisAccumulator<> history(basis);
    for (int i = 0; i < 100; ++i) history.add(p, 0.01);
    const CoefficientGrid<> phi(basis.evaluate(p), unit, CoefficientKind::distribution);
    ControlTape tape = ControlTape::Zero(2, cfg.horizon_steps(model.kind()));
    const EsacStep s = esac_step(p, history, tape, phi, model, cfg);
    CHECK(s.null_step);
    CHECK(s.applied == Eigen::Vector2d::Zero());
    CHECK(s.nominal_cost < 1e-25);
  }
  SUBCASE("accepted steps improve the horizon cost and respect the bound") {
    const auto phi = letter_n(10);
    BasisAccumulator<> history(CosineBasis<>(10, unit));
    ControlTape tape = ControlTape::Zero(2, cfg.horizon_steps(model.kind()));
    Eigen::VectorXd x = model.initial_state();
    int accepted = 0;
    for (int i = 0; i < 400; ++i) {
      const EsacStep s = esac_step(x, history, tape, phi, model, cfg);
      CHECK(s.applied.cwiseAbs().maxCoeff() <= model.control_bound());
      if (!s.null_step) {
        ++accepted;
        CHECK(s.accepted_cost < s.nominal_cost);
        CHECK(s.mode_insertion <= 0.0);
      }
      history.add(model.pen_of(x), cfg.dt);
      x = model.step(x, s.applied, cfg.dt);
    }
    CHECK(accepted > 100);
  }
}

TEST_CASE("receding horizon runs") {
  SUBCASE("letter N, single integrator") {
    const auto res = run_esac(letter_n(), DynamicsModel::make(DynamicsKind::single_integrator));
    CHECK(res.report.metric.back() < 0.5 * res.report.metric.front());
    CHECK(res.report.mode_insertion.size() == 6000);
    CHECK(res.trajectory.controls.cwiseAbs().maxCoeff() <= 0.4);
  }
  SUBCASE("uniform coverage sanity") {
    const Domain<> unit;
    const auto phi = distribution_coeffs(SpatialDistribution<>::uniform(64, 64, unit), 20);
    for (auto kind : {DynamicsKind::single_integrator, DynamicsKind::double_integrator}) {
      const auto model = DynamicsModel::make(kind);
      const auto res = run_esac(phi, model);
      CAPTURE(to_string(kind));
      CHECK(res.report.metric.back() < res.report.metric.front());
      bool inside = true;
      for (int i = 0; i < res.trajectory.samples(); ++i) {
        inside = inside && unit.contains(model.pen_of(res.trajectory.states.row(i).transpose()));
      }
      CHECK(inside);
    }
  }
  SUBCASE("configuration") {
    EsacConfig cfg;
    CHECK(cfg.horizon_for(DynamicsKind::single_integrator) == doctest::Approx(0.2));
    CHECK(cfg.horizon_for(DynamicsKind::spring) == doctest::Approx(0.5));
    cfg.horizon = 0.3;
    CHECK(cfg.horizon_steps(DynamicsKind::double_integrator) == 30);
    cfg.horizon = 0.001;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.gamma = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.control_weight << 1, 0, 0, -1;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.shrink = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.max_duration = 0.001;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
  }
}
