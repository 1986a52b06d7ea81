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

// Shared helpers for the unit suites.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "ergodraw/spectral.hpp"

namespace ergodraw::testing {

// Direct transcription of the cosine basis, no shared code with the library.
inline double basis_oracle(int k1, int k2, double x1, double x2, double l1 = 1, double l2 = 1) {
  const double h2 = (k1 == 0 ? l1 : l1 / 2) * (k2 == 0 ? l2 : l2 / 2);
  return std::cos(k1 * M_PI * x1 / l1) * std::cos(k2 * M_PI * x2 / l2) / std::sqrt(h2);
}

inline double max_abs(const Eigen::ArrayXXd& a) { return a.abs().maxCoeff(); }

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ergodraw_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace ergodraw::testing
