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

#include "ergodraw/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <utility>

#include "ergodraw/errors.hpp"

namespace ergodraw {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(0, 1);
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& field, std::size_t line_no) {
  if (field.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ": '" + field + "' is not a finite number");
  }
  return v;
}

// Non-empty lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> lines_of(const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.emplace_back(no, line);
  }
  return out;
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::string bytes = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  bytes.reserve(bytes.size() + static_cast<std::size_t>(image.rows() * image.cols()));
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) bytes.push_back(static_cast<char>(image(r, c)));
  }
  write_text(path, bytes);
}

GrayImage to_gray_image(const Eigen::MatrixXd& raw) {
  if (!raw.allFinite()) throw NumericalError("reconstruction has non-finite values");
  const double lo = raw.minCoeff();
  const double hi = raw.maxCoeff();
  // Spreads within rounding noise of the values count as flat.
  const bool flat = hi - lo <= 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
  GrayImage::Pixels px(raw.rows(), raw.cols());
  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
      px(r, c) = !flat ? static_cast<int>(std::lround(255.0 * (hi - raw(r, c)) / (hi - lo))) : 255;
    }
  }
  return GrayImage(std::move(px));
}

std::string format_coefficients_csv(const CoefficientGrid<>& grid) {
  std::string out = "k1,k2,value\n";
  for (int k1 = 0; k1 <= grid.order(); ++k1) {
    for (int k2 = 0; k2 <= grid.order(); ++k2) {
      out += std::to_string(k1) + "," + std::to_string(k2) + "," + fmt17(grid(k1, k2)) + "\n";
    }
  }
  return out;
}

void write_coefficients_csv(const std::filesystem::path& path, const CoefficientGrid<>& grid) {
  write_text(path, format_coefficients_csv(grid));
}

CoefficientGrid<> read_coefficients_csv(const std::filesystem::path& path, const Domain<>& domain,
                                        CoefficientKind kind) {
  const auto lines = lines_of(read_text(path));
  if (lines.empty() || split_fields(lines.front().second) != std::vector<std::string>{"k1", "k2", "value"}) {
    throw ParseError("line 1: expected header 'k1,k2,value'");
  }
  std::map<std::pair<int, int>, double> entries;
  int max_k = -1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, line] = lines[i];
    const auto fields = split_fields(line);
    if (fields.size() != 3) throw ParseError("line " + std::to_string(no) + ": expected 3 fields");
    const double k1 = parse_number(fields[0], no);
    const double k2 = parse_number(fields[1], no);
    if (k1 < 0 || k2 < 0 || k1 != std::floor(k1) || k2 != std::floor(k2) || k1 > kMaxOrder || k2 > kMaxOrder) {
      throw ParseError("line " + std::to_string(no) + ": invalid multi-index");
    }
    const auto key = std::make_pair(static_cast<int>(k1), static_cast<int>(k2));
    if (!entries.emplace(key, parse_number(fields[2], no)).second) {
      throw ParseError("line " + std::to_string(no) + ": duplicate multi-index");
    }
    max_k = std::max({max_k, key.first, key.second});
  }
  const int n = max_k + 1;
  if (n < 2 || entries.size() != static_cast<std::size_t>(n * n)) {
    throw ParseError("coefficient file must list every (k1, k2) pair of a square table with K >= 1");
  }
  Table<> values(n, n);
  for (const auto& [key, v] : entries) values(key.first, key.second) = v;
  return CoefficientGrid<>(std::move(values), domain, kind);
}

std::string format_trajectory_csv(const Trajectory& traj) {
  const auto n = traj.states.cols();
  std::string out = "t";
  for (Eigen::Index j = 0; j < n; ++j) out += ",x" + std::to_string(j + 1);
  out += ",u1,u2\n";
  for (int i = 0; i < traj.samples(); ++i) {
    out += fmt17(i * traj.dt);
    for (Eigen::Index j = 0; j < n; ++j) out += "," + fmt17(traj.states(i, j));
    out += "," + fmt17(traj.controls(i, 0)) + "," + fmt17(traj.controls(i, 1)) + "\n";
  }
  return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  write_text(path, format_trajectory_csv(traj));
}

Trajectory parse_trajectory_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("trajectory file is empty");
  const auto header = split_fields(lines.front().second);
  if (header.empty() || header.front() != "t") throw ParseError("line 1: header must start with 't'");
  std::size_t n = 0;
  while (n + 1 < header.size() && header[n + 1] == "x" + std::to_string(n + 1)) ++n;
  const std::size_t rest = header.size() - 1 - n;
  const bool has_u = rest == 2 && header[n + 1] == "u1" && header[n + 2] == "u2";
  if (!(rest == 0 || has_u)) throw ParseError("line 1: expected columns t,x1..xn[,u1,u2]");
  DynamicsKind kind;
  switch (n) {
    case 2:
      kind = DynamicsKind::single_integrator;
      break;
    case 4:
      kind = DynamicsKind::double_integrator;
      break;
    case 8:
      kind = DynamicsKind::spring;
      break;
    default:
      throw ParseError("line 1: state dimension " + std::to_string(n) + " is not 2, 4 or 8");
  }
  const std::size_t rows = lines.size() - 1;
  if (rows < 2) throw ParseError("trajectory needs at least two rows to fix its time step");

  Trajectory traj;
  traj.kind = kind;
  traj.states.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
  traj.controls = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), 2);
  std::vector<double> times(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& [no, line] = lines[i + 1];
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(no) + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    times[i] = parse_number(fields[0], no);
    for (std::size_t j = 0; j < n; ++j) traj.states(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_number(fields[j + 1], no);
    if (has_u) {
      traj.controls(static_cast<Eigen::Index>(i), 0) = parse_number(fields[n + 1], no);
      traj.controls(static_cast<Eigen::Index>(i), 1) = parse_number(fields[n + 2], no);
    }
  }
  traj.dt = times[1] - times[0];
  if (!(traj.dt > 0)) throw ParseError("line " + std::to_string(lines[2].first) + ": time must increase");
  for (std::size_t i = 2; i < rows; ++i) {
    const double expected = times[0] + static_cast<double>(i) * traj.dt;
    if (std::abs(times[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw ParseError("line " + std::to_string(lines[i + 1].first) + ": rows are not uniformly spaced in time");
    }
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) { return parse_trajectory_csv(read_text(path)); }

void write_metric_csv(const std::filesystem::path& path, const MetricSeries& series) {
  std::string out = "t,epsilon\n";
  for (std::size_t i = 0; i < series.t.size(); ++i) out += fmt17(series.t[i]) + "," + fmt17(series.epsilon[i]) + "\n";
  write_text(path, out);
}

void write_discrimination_csv(const std::filesystem::path& path, const DiscriminationReport& report) {
  std::string out = "t,label,distance,unweighted\n";
  for (std::size_t i = 0; i < report.t.size(); ++i) {
    for (std::size_t j = 0; j < report.labels.size(); ++j) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      out += fmt17(report.t[i]) + "," + report.labels[j] + "," + fmt17(report.distance(r, c)) + "," +
             fmt17(report.unweighted(r, c)) + "\n";
    }
  }
  write_text(path, out);
}

std::string format_svg(const Trajectory& traj, const Domain<>& domain, const SvgOptions& options) {
  const double scale = options.pixels / std::max(domain.length(0), domain.length(1));
  const double width = domain.length(0) * scale;
  const double height = domain.length(1) * scale;
  std::ostringstream out;
  out.precision(9);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << options.stroke_width
      << "\" stroke-linejoin=\"round\" points=\"";
  const Eigen::Matrix2Xd pens = traj.pen_path();
  for (Eigen::Index i = 0; i < pens.cols(); ++i) {
    if (i) out << ' ';
    out << pens(0, i) * scale << ',' << (domain.length(1) - pens(1, i)) * scale;
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

void write_svg(const std::filesystem::path& path, const Trajectory& traj, const Domain<>& domain,
               const SvgOptions& options) {
  write_text(path, format_svg(traj, domain, options));
}

}  // namespace ergodraw
