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

#include <cstdint>
#include <filesystem>
#include <string>

#include "ergodraw/spectral.hpp"

namespace ergodraw {

/// 8-bit grayscale raster, row 0 at the top of the picture.
class GrayImage {
 public:
  using Pixels = Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic>;

  explicit GrayImage(Pixels pixels);
  GrayImage(int rows, int cols, int fill);

  int rows() const { return static_cast<int>(pixels_.rows()); }
  int cols() const { return static_cast<int>(pixels_.cols()); }
  int operator()(int r, int c) const { return pixels_(r, c); }
  const Pixels& pixels() const { return pixels_; }

  bool operator==(const GrayImage& other) const {
    return pixels_.rows() == other.pixels_.rows() && pixels_.cols() == other.pixels_.cols() &&
           (pixels_ == other.pixels_).all();
  }

 private:
  Pixels pixels_;
};

/// Reads an ASCII (P2) or binary (P5) PGM with maxval <= 255. Smaller maxvals
/// are rescaled to the full 0..255 range.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes);

struct DensityOptions {
  double floor = 0.0;  ///< added to every cell before normalization
  double gamma = 1.0;  ///< exponent on the inverted intensity
};

/// Dark pixels carry more mass: weight = ((255 - p) / 255)^gamma + floor.
SpatialDistribution<> to_distribution(const GrayImage& img, const Domain<>& domain, DensityOptions options = {});

/// Box-filter downsampling, nearest-neighbour upsampling, per axis.
GrayImage resample(const GrayImage& img, int rows, int cols);

/// Shrinks images so that neither side exceeds `max_side`, keeping the aspect
/// ratio. Smaller images are returned unchanged.
GrayImage limit_resolution(const GrayImage& img, int max_side = 128);

/// Black strokes for one of the fixture letters N, J, L, M on white ground.
GrayImage rasterize_letter(char letter, int rows, int cols, double stroke_width);

/// Deterministic synthetic head-and-shoulders portrait with shaded regions,
/// dark hair and beard, and thin facial features at several scales.
GrayImage synthesize_portrait(int rows, int cols);

}  // namespace ergodraw
