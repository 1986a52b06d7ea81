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

#include "ergodraw/canvas.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace ergodraw {

GrayImage::GrayImage(Pixels pixels) : pixels_(std::move(pixels)) {
  if (pixels_.rows() < 2 || pixels_.cols() < 2) throw ValidationError("image must be at least 2x2");
  if ((pixels_ < 0).any() || (pixels_ > 255).any()) throw ValidationError("pixel values must lie in [0, 255]");
}

GrayImage::GrayImage(int rows, int cols, int fill) : GrayImage(Pixels::Constant(rows, cols, fill)) {}

namespace {

class PgmReader {
 public:
  explicit PgmReader(const std::string& bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("PGM parse error at byte " + std::to_string(pos_) + ": " + what);
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const unsigned char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long header_int(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) {
      pos_ = start;
      fail(std::string("expected integer ") + field);
    }
    if (pos_ - start > 9) fail(std::string(field) + " is too large");
    return std::stol(bytes_.substr(start, pos_ - start));
  }

  std::string magic() {
    if (bytes_.size() < 2) fail("file too short for magic number");
    std::string m = bytes_.substr(0, 2);
    pos_ = 2;
    return m;
  }

  // One whitespace byte separates the header from a binary raster.
  void single_separator() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      fail("expected whitespace before binary raster");
    }
    ++pos_;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  unsigned char byte() { return static_cast<unsigned char>(bytes_[pos_++]); }

  bool ascii_value(long& out) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) return false;
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) fail("expected pixel value");
    if (pos_ - start > 9) fail("pixel value is too large");
    out = std::stol(bytes_.substr(start, pos_ - start));
    return true;
  }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
  PgmReader in(bytes);
  const std::string magic = in.magic();
  if (magic != "P2" && magic != "P5") {
    throw ParseError("PGM parse error at byte 0: bad magic number '" + magic + "' (expected P2 or P5)");
  }
  const long width = in.header_int("width");
  const long height = in.header_int("height");
  const std::size_t maxval_offset = in.offset();
  const long maxval = in.header_int("maxval");
  if (width < 2 || height < 2) in.fail("image must be at least 2x2");
  if (maxval < 1) in.fail("maxval must be positive");
  if (maxval > 255) {
    throw UnsupportedFormatError("unsupported PGM: maxval " + std::to_string(maxval) + " at byte " +
                                 std::to_string(maxval_offset) + " exceeds 255");
  }

  const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<long> values;
  values.reserve(expected);
  if (magic == "P5") {
    in.single_separator();
    const std::size_t found = std::min(expected, in.remaining());
    for (std::size_t i = 0; i < found; ++i) values.push_back(in.byte());
  } else {
    long v = 0;
    while (values.size() < expected && in.ascii_value(v)) values.push_back(v);
  }
  if (values.size() != expected) {
    throw ParseError("PGM parse error at byte " + std::to_string(in.offset()) + ": truncated pixel data, expected " +
                     std::to_string(expected) + " values, found " + std::to_string(values.size()));
  }

  GrayImage::Pixels px(height, width);
  for (long r = 0; r < height; ++r) {
    for (long c = 0; c < width; ++c) {
      const long v = values[static_cast<std::size_t>(r * width + c)];
      if (v > maxval) in.fail("pixel value " + std::to_string(v) + " exceeds maxval");
      px(r, c) = maxval == 255 ? static_cast<int>(v) : static_cast<int>((v * 255 * 2 + maxval) / (2 * maxval));
    }
  }
  return GrayImage(std::move(px));
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open image '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

SpatialDistribution<> to_distribution(const GrayImage& img, const Domain<>& domain, DensityOptions options) {
  if (!(options.floor >= 0) || !std::isfinite(options.floor)) throw ValidationError("density floor must be >= 0");
  if (!(options.gamma > 0) || !std::isfinite(options.gamma)) throw ValidationError("gamma must be positive");
  Eigen::MatrixXd weights(img.rows(), img.cols());
  for (int r = 0; r < img.rows(); ++r) {
    for (int c = 0; c < img.cols(); ++c) {
      const double ink = (255.0 - img(r, c)) / 255.0;
      weights(r, c) = (options.gamma == 1.0 ? ink : std::pow(ink, options.gamma)) + options.floor;
    }
  }
  if (!(weights.sum() > 0)) {
    throw ValidationError("degenerate mass: image has no ink and the density floor is zero");
  }
  return SpatialDistribution<>::normalized(std::move(weights), domain);
}

namespace {

// Source index range [first, last) feeding output cell `i` along one axis.
std::pair<int, int> source_span(int i, int out, int in) {
  if (out <= in) {
    const int first = static_cast<int>(static_cast<long>(i) * in / out);
    const int last = static_cast<int>(static_cast<long>(i + 1) * in / out);
    return {first, std::max(last, first + 1)};
  }
  const int nearest = std::min(in - 1, static_cast<int>((i + 0.5) * in / out));
  return {nearest, nearest + 1};
}

}  // namespace

GrayImage resample(const GrayImage& img, int rows, int cols) {
  if (rows < 2 || cols < 2) throw ValidationError("resample target must be at least 2x2");
  GrayImage::Pixels out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto [r0, r1] = source_span(r, rows, img.rows());
    for (int c = 0; c < cols; ++c) {
      const auto [c0, c1] = source_span(c, cols, img.cols());
      const long sum = img.pixels().block(r0, c0, r1 - r0, c1 - c0).cast<long>().sum();
      const long count = static_cast<long>(r1 - r0) * (c1 - c0);
      out(r, c) = static_cast<int>((2 * sum + count) / (2 * count));  // round half up
    }
  }
  return GrayImage(std::move(out));
}

GrayImage limit_resolution(const GrayImage& img, int max_side) {
  if (max_side < 2) throw ValidationError("max_side must be at least 2");
  const int longest = std::max(img.rows(), img.cols());
  if (longest <= max_side) return img;
  const double scale = static_cast<double>(max_side) / longest;
  const int rows = std::max(2, static_cast<int>(std::lround(img.rows() * scale)));
  const int cols = std::max(2, static_cast<int>(std::lround(img.cols() * scale)));
  return resample(img, std::min(rows, max_side), std::min(cols, max_side));
}

namespace {

struct Point {
  double u;  // left to right, 0..1
  double v;  // top to bottom, 0..1
};

using Stroke = std::vector<Point>;

std::vector<Stroke> letter_strokes(char letter) {
  switch (letter) {
    case 'N':
      return {{{0.25, 0.85}, {0.25, 0.15}, {0.75, 0.85}, {0.75, 0.15}}};
    case 'J':
      return {{{0.40, 0.15}, {0.80, 0.15}},
              {{0.65, 0.15}, {0.65, 0.70}, {0.60, 0.80}, {0.50, 0.85}, {0.38, 0.82}, {0.30, 0.70}}};
    case 'L':
      return {{{0.30, 0.15}, {0.30, 0.85}, {0.75, 0.85}}};
    case 'M':
      return {{{0.20, 0.85}, {0.20, 0.15}, {0.50, 0.55}, {0.80, 0.15}, {0.80, 0.85}}};
    default:
      throw ValidationError(std::string("unsupported letter '") + letter + "' (expected one of N, J, L, M)");
  }
}

double segment_distance(double x, double y, Point a, Point b) {
  const double dx = b.u - a.u;
  const double dy = b.v - a.v;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((x - a.u) * dx + (y - a.v) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(x - (a.u + t * dx), y - (a.v + t * dy));
}

}  // namespace

GrayImage rasterize_letter(char letter, int rows, int cols, double stroke_width) {
  const auto strokes = letter_strokes(letter);
  if (rows < 2 || cols < 2) throw ValidationError("letter raster must be at least 2x2");
  if (!(stroke_width > 0) || stroke_width >= std::min(rows, cols)) {
    throw ValidationError("stroke width must be positive and smaller than the raster");
  }
  GrayImage::Pixels px = GrayImage::Pixels::Constant(rows, cols, 255);
  const double half = 0.5 * stroke_width;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      // Distances in pixel units so strokes keep their width on non-square rasters.
      const double x = c + 0.5;
      const double y = r + 0.5;
      for (const auto& stroke : strokes) {
        for (std::size_t i = 0; i + 1 < stroke.size(); ++i) {
          const Point a{stroke[i].u * cols, stroke[i].v * rows};
          const Point b{stroke[i + 1].u * cols, stroke[i + 1].v * rows};
          if (segment_distance(x, y, a, b) <= half) px(r, c) = 0;
        }
      }
    }
  }
  return GrayImage(std::move(px));
}

namespace {

// Signed "inside" measure of an axis-aligned ellipse: < 1 inside.
double ellipse(double u, double v, double cu, double cv, double ru, double rv) {
  const double a = (u - cu) / ru;
  const double b = (v - cv) / rv;
  return a * a + b * b;
}

}  // namespace

GrayImage synthesize_portrait(int rows, int cols) {
  if (rows < 2 || cols < 2) throw ValidationError("portrait raster must be at least 2x2");
  GrayImage::Pixels px(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double u = (c + 0.5) / cols;
      const double v = (r + 0.5) / rows;
      double ink = 0.0;  // 0 = white paper, 1 = black

      // Coat and shoulders.
      if (v > 0.78 && ellipse(u, v, 0.5, 1.15, 0.48, 0.42) < 1.0) ink = 0.85;
      // White collar wedge.
      if (v > 0.78 && v < 0.92 && std::abs(u - 0.5) < 0.10 - 0.4 * (v - 0.78)) ink = 0.1;

      const double head = ellipse(u, v, 0.5, 0.45, 0.22, 0.30);
      // Hair mass behind and above the face.
      if (ellipse(u, v, 0.5, 0.33, 0.27, 0.24) < 1.0 && v < 0.42) ink = std::max(ink, 0.9);
      if (head < 1.0) {
        // Skin with light from the left: shading grows toward the right cheek.
        ink = 0.15 + 0.35 * std::clamp((u - 0.38) / 0.3, 0.0, 1.0);
        // Forehead stays bright.
        if (v < 0.34) ink = 0.08;
        // Brows.
        if (std::abs(v - 0.37) < 0.012 && (std::abs(u - 0.41) < 0.06 || std::abs(u - 0.59) < 0.06)) ink = 0.95;
        // Eyes.
        if (ellipse(u, v, 0.41, 0.41, 0.035, 0.015) < 1.0 || ellipse(u, v, 0.59, 0.41, 0.035, 0.015) < 1.0) {
          ink = 1.0;
        }
        // Nose shadow line and nostrils.
        if (std::abs(u - 0.52) < 0.01 && v > 0.42 && v < 0.52) ink = 0.7;
        if (ellipse(u, v, 0.5, 0.53, 0.04, 0.012) < 1.0) ink = 0.75;
        // Mouth.
        if (std::abs(v - 0.60) < 0.008 && std::abs(u - 0.5) < 0.06) ink = 0.9;
        // Chin beard along the jaw.
        if (v > 0.58 && head > 0.55) ink = 0.95;
      }
      // Ears.
      if (ellipse(u, v, 0.27, 0.45, 0.025, 0.06) < 1.0 || ellipse(u, v, 0.73, 0.45, 0.025, 0.06) < 1.0) {
        ink = std::max(ink, 0.45);
      }
      px(r, c) = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(ink, 0.0, 1.0))));
    }
  }
  return GrayImage(std::move(px));
}

}  // namespace ergodraw
