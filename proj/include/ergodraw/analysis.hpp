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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ergodraw/canvas.hpp"
#include "ergodraw/spectral.hpp"
#include "ergodraw/trajectory.hpp"

namespace ergodraw {

/// Metric of each prefix [0, t] for t = stride, 2 stride, ...
MetricSeries metric_timeseries(const Trajectory& traj, const CoefficientGrid<>& phi, double stride = 0.1);

struct Candidate {
  std::string label;
  CoefficientGrid<> coeffs;
};

std::vector<Candidate> make_candidates(const std::vector<std::string>& labels,
                                       const std::vector<SpatialDistribution<>>& distributions, int order);

struct DiscriminationReport {
  std::vector<std::string> labels;
  std::vector<double> t;
  Eigen::MatrixXd distance;    // samples x candidates, Lambda-weighted
  Eigen::MatrixXd unweighted;  // samples x candidates, sum_k |c_k - phi_k|
  std::vector<int> ranking;    // candidate indices, ascending final distance, ties in input order
  /// First sample time from which the eventual winner is strictly ahead of every
  /// other candidate through the end; unset if it is never strictly ahead at the end.
  std::optional<double> crossover;

  const std::string& winner() const { return labels[static_cast<std::size_t>(ranking.front())]; }
};

DiscriminationReport discriminate(const Trajectory& traj, const std::vector<Candidate>& candidates,
                                  double stride = 0.1);

struct Score {
  double epsilon = 0;
  CoefficientGrid<> coeffs;
  Eigen::MatrixXd reconstruction;  // raw sum_k c_k F_k on the requested grid
};

Score score_trajectory(const Trajectory& traj, const CoefficientGrid<>& phi, int rows, int cols);

struct ScoreOptions {
  Domain<> domain;
  DensityOptions density;
  int max_side = 128;
  bool rescale_to_domain = false;
  int rows = 128;
  int cols = 128;
};

/// Scores a trajectory CSV written by this library or by another drawing
/// pipeline against an image.
Score score_external(const std::filesystem::path& trajectory_csv, const GrayImage& image, int order,
                     const ScoreOptions& options = {});

/// Uniformly scales and centers the pen path's bounding box into the domain.
Trajectory rescale_to_domain(const Trajectory& traj, const Domain<>& domain);

}  // namespace ergodraw
