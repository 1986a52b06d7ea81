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

#include <fstream>
#include <sstream>

#include "ergodraw/errors.hpp"
#include "ergodraw/io.hpp"
#include "support.hpp"

using namespace ergodraw;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Trajectory sample(DynamicsKind kind, int n) {
  TrajectoryBuilder b(kind, 0.01, n);
  const int dim = state_dimension(kind);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(dim);
    for (int j = 0; j < dim; ++j) x(j) = 0.5 + 0.4 * std::sin(0.1 * i + j) / 3.0;
    b.push(x, Eigen::Vector2d(std::cos(i * 0.37), 1.0 / (i + 3)));
  }
  return b.finish();
}

}  // namespace

TEST_CASE("coefficient CSV") {
  const auto dir = ergodraw::testing::scratch_dir("io_coeffs");
  Table<> v(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) v(a, b) = std::exp(-a) / (b + 3.0) - 0.1;
  }
  const CoefficientGrid<> g(v, Domain<>(), CoefficientKind::distribution);
  const std::string text = format_coefficients_csv(g);
  CHECK(text.rfind("k1,k2,value\n0,0,", 0) == 0);
  CHECK(text.find("\n0,1,") < text.find("\n1,0,"));
  write_coefficients_csv(dir / "c.csv", g);
  const auto back = read_coefficients_csv(dir / "c.csv");
  CHECK((back.values() == v).all());

  std::ofstream(dir / "bad.csv") << "k1,k2,value\n0,0,1\n0,1,x\n1,0,0\n1,1,0\n";
  CHECK_THROWS_AS(read_coefficients_csv(dir / "bad.csv"), ParseError);
  std::ofstream(dir / "partial.csv") << "k1,k2,value\n0,0,1\n0,1,0\n1,0,0\n";
  CHECK_THROWS_AS(read_coefficients_csv(dir / "partial.csv"), ParseError);
  CHECK_THROWS_AS(read_coefficients_csv(dir / "missing.csv"), IoError);
}

TEST_CASE("trajectory CSV") {
  const auto dir = ergodraw::testing::scratch_dir("io_traj");
  for (auto kind : {DynamicsKind::single_integrator, DynamicsKind::double_integrator, DynamicsKind::spring}) {
    const Trajectory t = sample(kind, 40);
    write_trajectory_csv(dir / "t.csv", t);
    const Trajectory back = read_trajectory_csv(dir / "t.csv");
    CAPTURE(to_string(kind));
    CHECK(back.kind == kind);
    CHECK(back.dt == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(back.states == t.states);
    CHECK(back.controls == t.controls);
    CHECK(format_trajectory_csv(back) == slurp(dir / "t.csv"));
  }
  const std::string header = format_trajectory_csv(sample(DynamicsKind::double_integrator, 2));
  CHECK(header.rfind("t,x1,x2,x3,x4,u1,u2\n", 0) == 0);

  const Trajectory no_u = parse_trajectory_csv("t,x1,x2\n0,0.1,0.2\n0.5,0.3,0.4\n");
  CHECK(no_u.dt == doctest::Approx(0.5));
  CHECK(no_u.controls.isZero());

  CHECK_THROWS_AS(parse_trajectory_csv(""), ParseError);
  CHECK_THROWS_AS(parse_trajectory_csv("t,x1,x2,x3\n0,1,2,3\n1,1,2,3\n"), ParseError);
  CHECK_THROWS_AS(parse_trajectory_csv("t,x1,x2\n0,0.1,0.2\n"), ParseError);
  CHECK_THROWS_AS(parse_trajectory_csv("t,x1,x2\n0,0.1,0.2\n1,0.1,0.2\n3,0.1,0.2\n"), ParseError);
  try {
    parse_trajectory_csv("t,x1,x2\n0,0.1,0.2\n1,0.1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("images and vector output") {
  const auto dir = ergodraw::testing::scratch_dir("io_img");
  Eigen::MatrixXd raw(2, 3);
  raw << -1, 0, 1, 0.5, 0.25, -1;
  const GrayImage g = to_gray_image(raw);
  CHECK(g(0, 2) == 0);    // highest value is darkest
  CHECK(g(0, 0) == 255);  // lowest is white
  CHECK(to_gray_image(Eigen::MatrixXd::Constant(3, 3, 0.7)) == GrayImage(3, 3, 255));

  const GrayImage img = rasterize_letter('M', 16, 24, 2);
  write_pgm(dir / "m.pgm", img);
  CHECK(slurp(dir / "m.pgm").rfind("P5\n24 16\n255\n", 0) == 0);
  CHECK(load_pgm(dir / "m.pgm") == img);

  TrajectoryBuilder b(DynamicsKind::single_integrator, 0.01, 2);
  b.push(Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d::Zero());
  b.push(Eigen::Vector2d(1.0, 0.5), Eigen::Vector2d::Zero());
  const std::string svg = format_svg(b.finish(), Domain<>(2.0, 1.0), {1.5, 400});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("width=\"400\"") != std::string::npos);
  CHECK(svg.find("height=\"200\"") != std::string::npos);
  // the origin of the workspace is the bottom-left corner of the picture
  CHECK(svg.find("0,200") != std::string::npos);
  CHECK(svg.find("200,100") != std::string::npos);
  CHECK(svg.find("stroke-width=\"1.5\"") != std::string::npos);
}

TEST_CASE("metric and discrimination CSV") {
  const auto dir = ergodraw::testing::scratch_dir("io_metric");
  MetricSeries s;
  s.t = {0.1, 0.2};
  s.epsilon = {0.5, 0.25};
  write_metric_csv(dir / "m.csv", s);
  CHECK(slurp(dir / "m.csv") == "t,epsilon\n0.10000000000000001,0.5\n0.20000000000000001,0.25\n");

  DiscriminationReport r;
  r.labels = {"a", "b"};
  r.t = {0.1};
  r.distance = Eigen::MatrixXd::Constant(1, 2, 0.5);
  r.unweighted = Eigen::MatrixXd::Constant(1, 2, 2.0);
  r.ranking = {0, 1};
  write_discrimination_csv(dir / "d.csv", r);
  CHECK(slurp(dir / "d.csv").rfind("t,label,distance,unweighted\n", 0) == 0);
}
