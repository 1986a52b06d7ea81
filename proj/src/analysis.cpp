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

#include "ergodraw/analysis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ergodraw/errors.hpp"
#include "ergodraw/io.hpp"

namespace ergodraw {

MetricSeries metric_timeseries(const Trajectory& traj, const CoefficientGrid<>& phi, double stride) {
  const int every = stride_steps(stride, traj.dt);
  if (traj.samples() < every) throw ValidationError("trajectory is shorter than the first metric sample time");
  MetricRecorder recorder(phi, traj.dt, stride);
  const Eigen::Matrix2Xd pens = traj.pen_path();
  for (Eigen::Index i = 0; i < pens.cols(); ++i) recorder.add(pens.col(i));
  return recorder.series();
}

std::vector<Candidate> make_candidates(const std::vector<std::string>& labels,
                                       const std::vector<SpatialDistribution<>>& distributions, int order) {
  if (labels.size() != distributions.size()) throw ValidationError("one label per candidate distribution required");
  std::vector<Candidate> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out.push_back({labels[i], distribution_coeffs(distributions[i], order)});
  return out;
}

DiscriminationReport discriminate(const Trajectory& traj, const std::vector<Candidate>& candidates, double stride) {
  if (candidates.size() < 2) throw ValidationError("discrimination needs at least two candidates");
  const auto& first = candidates.front().coeffs;
  for (const auto& c : candidates) {
    if (!c.coeffs.compatible_with(first)) throw ValidationError("candidates differ in order or domain");
  }
  const int every = stride_steps(stride, traj.dt);
  if (traj.samples() < every) throw ValidationError("trajectory is shorter than the first metric sample time");

  const CosineBasis<> basis(first.order(), first.domain());
  BasisAccumulator<> acc(basis);
  const Eigen::Matrix2Xd pens = traj.pen_path();
  const auto count = static_cast<Eigen::Index>(candidates.size());
  const auto samples = pens.cols() / every;

  DiscriminationReport report;
  for (const auto& c : candidates) report.labels.push_back(c.label);
  report.distance.resize(samples, count);
  report.unweighted.resize(samples, count);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < pens.cols(); ++i) {
    acc.add(pens.col(i), traj.dt);
    if ((i + 1) % every != 0) continue;
    const Table<> c = acc.coefficients().values();
    report.t.push_back(static_cast<double>(i + 1) * traj.dt);
    for (Eigen::Index j = 0; j < count; ++j) {
      const Table<>& phi = candidates[static_cast<std::size_t>(j)].coeffs.values();
      report.distance(row, j) = weighted_distance(basis.lambda(), c, phi);
      report.unweighted(row, j) = (c - phi).abs().sum();
    }
    ++row;
  }

  report.ranking.resize(static_cast<std::size_t>(count));
  std::iota(report.ranking.begin(), report.ranking.end(), 0);
  const auto last = samples - 1;
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [&](int a, int b) { return report.distance(last, a) < report.distance(last, b); });

  const int winner = report.ranking.front();
  const auto strictly_first = [&](Eigen::Index r) {
    for (Eigen::Index j = 0; j < count; ++j) {
      if (j != winner && !(report.distance(r, winner) < report.distance(r, j))) return false;
    }
    return true;
  };
  Eigen::Index start = samples;
  while (start > 0 && strictly_first(start - 1)) --start;
  if (start < samples) report.crossover = report.t[static_cast<std::size_t>(start)];
  return report;
}

Score score_trajectory(const Trajectory& traj, const CoefficientGrid<>& phi, int rows, int cols) {
  // Same accumulation path as the controllers' run reports.
  BasisAccumulator<> acc(CosineBasis<>(phi.order(), phi.domain()));
  const Eigen::Matrix2Xd pens = traj.pen_path();
  for (Eigen::Index i = 0; i < pens.cols(); ++i) acc.add(pens.col(i), traj.dt);
  CoefficientGrid<> c = acc.coefficients();
  const double epsilon = weighted_distance(acc.basis().lambda(), c.values(), phi.values());
  Eigen::MatrixXd image = reconstruct(c, rows, cols);
  return {epsilon, std::move(c), std::move(image)};
}

Trajectory rescale_to_domain(const Trajectory& traj, const Domain<>& domain) {
  if (traj.samples() < 1) throw ValidationError("trajectory is empty");
  const Eigen::Matrix2Xd pens = traj.pen_path();
  const Eigen::Vector2d lo = pens.rowwise().minCoeff();
  const Eigen::Vector2d hi = pens.rowwise().maxCoeff();
  const Eigen::Vector2d extent = hi - lo;
  double scale = 1.0;
  if (extent(0) > 0 || extent(1) > 0) {
    const double s0 = extent(0) > 0 ? domain.length(0) / extent(0) : std::numeric_limits<double>::infinity();
    const double s1 = extent(1) > 0 ? domain.length(1) / extent(1) : std::numeric_limits<double>::infinity();
    scale = std::min(s0, s1);
  }
  const Eigen::Vector2d mid = 0.5 * (lo + hi);
  Trajectory out = traj;
  const int offset = pen_offset(traj.kind);
  for (int i = 0; i < out.samples(); ++i) {
    Eigen::Vector2d p = (pens.col(i) - mid) * scale + domain.center();
    p = p.cwiseMax(Eigen::Vector2d::Zero()).cwiseMin(domain.lengths());  // rounding at the edges
    out.states.row(i).segment<2>(offset) = p.transpose();
  }
  return out;
}

Score score_external(const std::filesystem::path& trajectory_csv, const GrayImage& image, int order,
                     const ScoreOptions& options) {
  Trajectory traj = read_trajectory_csv(trajectory_csv);
  if (options.rescale_to_domain) {
    traj = rescale_to_domain(traj, options.domain);
  } else {
    const Eigen::Matrix2Xd pens = traj.pen_path();
    for (Eigen::Index i = 0; i < pens.cols(); ++i) {
      if (!options.domain.contains(pens.col(i))) {
        throw ValidationError("trajectory row " + std::to_string(i + 1) + " (line " + std::to_string(i + 2) +
                              ") has a pen point outside the domain; pass the rescale option to fit it");
      }
    }
  }
  const auto phi = distribution_coeffs(to_distribution(limit_resolution(image, options.max_side), options.domain,
                                                       options.density),
                                       order);
  return score_trajectory(traj, phi, options.rows, options.cols);
}

}  // namespace ergodraw
