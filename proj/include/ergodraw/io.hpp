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

// File formats: coefficient, trajectory, metric and discrimination CSVs;
// PGM output; SVG pen-path export.

#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>

#include "ergodraw/analysis.hpp"
#include "ergodraw/canvas.hpp"
#include "ergodraw/spectral.hpp"
#include "ergodraw/trajectory.hpp"

namespace ergodraw {

/// Binary (P5) PGM.
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Min-max rescale of a raw reconstruction to 0..255 with high values dark,
/// matching the ink convention of the input images. Constant grids (up to 1e-9
/// relative spread) map to white.
GrayImage to_gray_image(const Eigen::MatrixXd& raw);

/// `k1,k2,value` rows with k1 outer, k2 inner.
void write_coefficients_csv(const std::filesystem::path& path, const CoefficientGrid<>& grid);
std::string format_coefficients_csv(const CoefficientGrid<>& grid);
CoefficientGrid<> read_coefficients_csv(const std::filesystem::path& path, const Domain<>& domain = {},
                                        CoefficientKind kind = CoefficientKind::distribution);

/// `t,x1,...,xn,u1,u2`, 17 significant digits.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
std::string format_trajectory_csv(const Trajectory& traj);

/// Accepts files with state dimension 2, 4 or 8 (`x1..xn` columns) and
/// optional `u1,u2` columns; rows must be uniformly spaced in t.
Trajectory read_trajectory_csv(const std::filesystem::path& path);
Trajectory parse_trajectory_csv(const std::string& text);

void write_metric_csv(const std::filesystem::path& path, const MetricSeries& series);

/// `t,label,distance,unweighted`, one row per sample and candidate.
void write_discrimination_csv(const std::filesystem::path& path, const DiscriminationReport& report);

struct SvgOptions {
  double stroke_width = 1.0;
  int pixels = 512;  // longer side of the canvas
};

/// Single polyline of the pen path, y flipped to image convention.
void write_svg(const std::filesystem::path& path, const Trajectory& traj, const Domain<>& domain,
               const SvgOptions& options = {});
std::string format_svg(const Trajectory& traj, const Domain<>& domain, const SvgOptions& options = {});

}  // namespace ergodraw
