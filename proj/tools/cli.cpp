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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ergodraw/analysis.hpp"
#include "ergodraw/canvas.hpp"
#include "ergodraw/cfec.hpp"
#include "ergodraw/errors.hpp"
#include "ergodraw/esac.hpp"
#include "ergodraw/io.hpp"
#include "ergodraw/pto.hpp"

namespace ergodraw::cli {
namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path.string());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Options shared by every command that reads an image.
struct Canvas {
  double l1 = 1.0;
  double l2 = 1.0;
  double floor = 0.0;
  double gamma = 1.0;
  int max_side = 128;

  void add(CLI::App& app) {
    app.add_option("--L1", l1, "Domain width")->capture_default_str();
    app.add_option("--L2", l2, "Domain height")->capture_default_str();
    app.add_option("--density.floor", floor, "Constant added to every cell before normalizing")->capture_default_str();
    app.add_option("--density.gamma", gamma, "Exponent on inverted intensity")->capture_default_str();
    app.add_option("--max-side", max_side, "Images larger than this are box-filtered down")->capture_default_str();
  }
  Domain<> domain() const { return {l1, l2}; }
  DensityOptions density() const { return {floor, gamma}; }
  GrayImage load(const fs::path& path) const {
    if (max_side < 2) throw ValidationError("--max-side must be at least 2");
    return limit_resolution(load_pgm(path), max_side);
  }
  CoefficientGrid<> coefficients(const fs::path& image, int order) const {
    return distribution_coeffs(to_distribution(load(image), domain(), density()), order);
  }
};

std::pair<int, int> parse_resolution(const std::string& text) {
  int rows = 0;
  int cols = 0;
  char x = 0;
  std::istringstream ss(text);
  if (!(ss >> rows >> x >> cols) || x != 'x' || !ss.eof()) {
    throw ValidationError("resolution must look like ROWSxCOLS, got '" + text + "'");
  }
  if (rows < 2 || cols < 2) throw ValidationError("resolution must be at least 2x2");
  return {rows, cols};
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_filename(path.stem().string() + suffix);
  return out;
}

struct Draw {
  std::string method = "esac";
  std::string dynamics = "single";
  std::string image;
  double duration = 60.0;
  double dt = 0.01;
  int order = 20;
  Canvas canvas;
  std::string out = "trajectory.csv";
  std::string metric;
  std::string svg;
  double stroke = 1.0;
  std::optional<double> cfec_umax;
  double cfec_damping = 0.0;
  std::optional<double> esac_horizon;
  double esac_r = EsacConfig{}.control_weight(0, 0);
  double esac_gamma = EsacConfig{}.gamma;
  double esac_lambda = EsacConfig{}.max_duration;
  double esac_beta = EsacConfig{}.shrink;
  std::optional<double> esac_umax;
  double pto_r = PtoConfig{}.control_weight(0, 0);
  int pto_iterations = PtoConfig{}.max_iterations;
  double pto_tolerance = PtoConfig{}.tolerance;
  double pto_c1 = PtoConfig{}.armijo_c1;
  double spring_omega = 2.0 * std::numbers::pi;
  double spring_zeta = 0.1;
  std::optional<double> umax;

  void add(CLI::App& app) {
    app.add_option("--method", method, "cfec, esac or pto")
        ->check(CLI::IsMember({"cfec", "esac", "pto"}))
        ->capture_default_str();
    app.add_option("--dynamics", dynamics, "single, double or spring")
        ->check(CLI::IsMember({"single", "double", "spring"}))
        ->capture_default_str();
    app.add_option("--image", image, "Target image (PGM)")->required();
    app.add_option("--T", duration, "Duration in seconds")->capture_default_str();
    app.add_option("--dt", dt, "Time step; must divide 0.1 s")->capture_default_str();
    app.add_option("--K", order, "Coefficients per axis")->capture_default_str();
    canvas.add(app);
    app.add_option("--out", out, "Trajectory CSV")->capture_default_str();
    app.add_option("--metric", metric, "Metric CSV (default: <out>_metric.csv)");
    app.add_option("--svg", svg, "SVG of the pen path (default: <out>.svg)");
    app.add_option("--svg.stroke", stroke, "SVG stroke width")->capture_default_str();
    app.add_option("--umax", umax, "Control bound for every method (default per dynamics)");
    app.add_option("--cfec.umax", cfec_umax, "Closed-form control magnitude");
    app.add_option("--cfec.damping", cfec_damping, "Velocity feedback of the second-order law")->capture_default_str();
    app.add_option("--esac.horizon", esac_horizon, "Prediction horizon in seconds (default 0.2 single, 0.5 otherwise)");
    app.add_option("--esac.R", esac_r, "Control weight, times identity")->capture_default_str();
    app.add_option("--esac.gamma", esac_gamma, "Desired cost sensitivity factor")->capture_default_str();
    app.add_option("--esac.lambda", esac_lambda, "Longest action duration in seconds")->capture_default_str();
    app.add_option("--esac.beta", esac_beta, "Action duration shrink factor")->capture_default_str();
    app.add_option("--esac.umax", esac_umax, "Saturation bound");
    app.add_option("--pto.R", pto_r, "Control weight, times identity")->capture_default_str();
    app.add_option("--pto.iterations", pto_iterations, "Iteration cap")->capture_default_str();
    app.add_option("--pto.tolerance", pto_tolerance, "Stop when |DJ| falls below this")->capture_default_str();
    app.add_option("--pto.c1", pto_c1, "Armijo sufficient-decrease constant")->capture_default_str();
    app.add_option("--spring.omega", spring_omega, "Pen natural frequency, rad/s")->capture_default_str();
    app.add_option("--spring.zeta", spring_zeta, "Pen damping ratio")->capture_default_str();
  }

  DynamicsModel model(const Domain<>& domain) const {
    const DynamicsKind kind = parse_dynamics_kind(dynamics);
    const double bound = umax.value_or(kind == DynamicsKind::single_integrator ? 0.4 : 1.0);
    switch (kind) {
      case DynamicsKind::single_integrator:
        return DynamicsModel::single_integrator(domain, bound);
      case DynamicsKind::double_integrator:
        return DynamicsModel::double_integrator(domain, bound);
      case DynamicsKind::spring:
        break;
    }
    return DynamicsModel::spring(domain, SpringParams::from_modal(spring_omega, spring_zeta), bound);
  }

  // Checks that need nothing but the flags, so bad input fails before any work.
  void validate() const {
    if (method == "cfec" && dynamics == "spring") {
      throw UnsupportedDynamicsError(
          "cfec does not support spring dynamics; closed-form control needs linear first- or second-order "
          "(single/double) dynamics");
    }
    if (!(duration >= 0.1)) throw ValidationError("--T must be at least 0.1 s, the first metric sample");
    if (!(dt > 0)) throw ValidationError("--dt must be positive");
    stride_steps(0.1, dt);
    if (order < 1 || order > kMaxOrder) {
      throw ValidationError("--K must lie in [1, " + std::to_string(kMaxOrder) + "]");
    }
  }

  int run(std::ostream& out_stream) const {
    validate();
    const Domain<> domain = canvas.domain();
    const CoefficientGrid<> phi = canvas.coefficients(image, order);
    const DynamicsModel m = model(domain);

    Trajectory traj;
    RunReport report;
    if (method == "cfec") {
      CfecConfig cfg;
      cfg.u_max = cfec_umax;
      cfg.damping = cfec_damping;
      cfg.dt = dt;
      cfg.duration = duration;
      auto res = run_cfec(phi, m, cfg);
      traj = std::move(res.trajectory);
      report = std::move(res.report);
    } else if (method == "esac") {
      EsacConfig cfg;
      cfg.horizon = esac_horizon;
      cfg.control_weight = esac_r * Eigen::Matrix2d::Identity();
      cfg.gamma = esac_gamma;
      cfg.max_duration = esac_lambda;
      cfg.shrink = esac_beta;
      cfg.saturation = esac_umax;
      cfg.dt = dt;
      cfg.duration = duration;
      auto res = run_esac(phi, m, cfg);
      traj = std::move(res.trajectory);
      report = std::move(res.report);
    } else {
      PtoConfig cfg;
      cfg.control_weight = pto_r * Eigen::Matrix2d::Identity();
      cfg.max_iterations = pto_iterations;
      cfg.tolerance = pto_tolerance;
      cfg.armijo_c1 = pto_c1;
      cfg.dt = dt;
      cfg.duration = duration;
      auto res = run_pto(phi, m, cfg);
      traj = std::move(res.trajectory);
      report = std::move(res.report);
    }

    const fs::path traj_path = out;
    const fs::path metric_path = metric.empty() ? sibling(traj_path, "_metric.csv") : fs::path(metric);
    const fs::path svg_path = svg.empty() ? sibling(traj_path, ".svg") : fs::path(svg);
    write_trajectory_csv(traj_path, traj);
    write_metric_csv(metric_path, report.metric);
    write_svg(svg_path, traj, domain, {stroke, 512});

    out_stream << "method " << method << "\n"
               << "dynamics " << dynamics << "\n"
               << "samples " << traj.samples() << "\n"
               << "epsilon_first " << fmt(report.metric.front()) << "\n"
               << "epsilon_final " << fmt(report.final_metric()) << "\n";
    if (method == "cfec") out_stream << "fallback_events " << report.fallback_events << "\n";
    if (method == "esac") {
      out_stream << "null_steps " << report.null_steps << "\n"
                 << "fallback_events " << report.fallback_events << "\n";
    }
    if (method == "pto") {
      out_stream << "iterations " << report.iterations << "\n"
                 << "termination " << report.termination << "\n";
    }
    out_stream << "trajectory " << traj_path.string() << "\n"
               << "metric " << metric_path.string() << "\n"
               << "svg " << svg_path.string() << "\n";
    return ok;
  }
};

// Writes to the file when a path is given, to the stream otherwise.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
  }
}

std::string metric_csv_text(const MetricSeries& series) {
  std::ostringstream ss;
  ss << "t,epsilon\n";
  char buf[64];
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", series.t[i], series.epsilon[i]);
    ss << buf;
  }
  return ss.str();
}

int dispatch(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace

std::vector<std::string> config_arguments(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(number) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw ValidationError("config line " + std::to_string(number) + ": empty key");
    result.push_back("--" + key);
    result.push_back(value);
  }
  return result;
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ergodic drawing: turn an image into a pen trajectory and score drawings by ergodicity", "ergodraw"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  try {
    return dispatch(app, args, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : invalid;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return invalid;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return io_failure;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return numerical_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
}

namespace {

int dispatch(CLI::App& app, const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  (void)err;
  std::string config;
  auto add_config = [&config](CLI::App* sub) {
    sub->add_option("--config", config, "key = value file; flags on the command line win");
  };

  Draw draw;
  auto* draw_cmd = app.add_subcommand("draw", "Run a controller on an image and write the drawing");
  draw.add(*draw_cmd);
  add_config(draw_cmd);

  Canvas canvas;
  std::string image;
  std::string coeffs_path;
  std::string traj_path;
  std::string out_path;
  std::string res = "128x128";
  int order = 20;
  double stride = 0.1;

  auto* coeffs_cmd = app.add_subcommand("coeffs", "Cosine coefficients of an image distribution");
  coeffs_cmd->add_option("--image", image, "Input PGM")->required();
  coeffs_cmd->add_option("--K", order, "Coefficients per axis")->capture_default_str();
  coeffs_cmd->add_option("--out", out_path, "Coefficient CSV (default: stdout)");
  canvas.add(*coeffs_cmd);
  add_config(coeffs_cmd);

  auto* recon_cmd = app.add_subcommand("reconstruct", "Image from coefficients or from a trajectory");
  auto* recon_src = recon_cmd->add_option("--coeffs", coeffs_path, "Coefficient CSV");
  recon_cmd->add_option("--traj", traj_path, "Trajectory CSV")->excludes(recon_src);
  recon_cmd->add_option("--K", order, "Coefficients per axis when reading a trajectory")->capture_default_str();
  recon_cmd->add_option("--res", res, "Output size ROWSxCOLS")->capture_default_str();
  recon_cmd->add_option("--out", out_path, "Output PGM")->required();
  canvas.add(*recon_cmd);
  add_config(recon_cmd);

  auto* metric_cmd = app.add_subcommand("metric", "Ergodic metric over time of a trajectory against an image");
  metric_cmd->add_option("--traj", traj_path, "Trajectory CSV")->required();
  metric_cmd->add_option("--image", image, "Target PGM")->required();
  metric_cmd->add_option("--K", order, "Coefficients per axis")->capture_default_str();
  metric_cmd->add_option("--stride", stride, "Sample spacing in seconds")->capture_default_str();
  metric_cmd->add_option("--out", out_path, "Metric CSV (default: stdout)");
  canvas.add(*metric_cmd);
  add_config(metric_cmd);

  std::vector<std::string> candidates;
  auto* disc_cmd = app.add_subcommand("discriminate", "Rank candidate images by distance to a trajectory");
  disc_cmd->add_option("--traj", traj_path, "Trajectory CSV")->required();
  disc_cmd->add_option("--candidates", candidates, "Candidate PGMs, comma separated")->required()->delimiter(',');
  disc_cmd->add_option("--K", order, "Coefficients per axis")->capture_default_str();
  disc_cmd->add_option("--stride", stride, "Sample spacing in seconds")->capture_default_str();
  disc_cmd->add_option("--out", out_path, "Report CSV (default: stdout)");
  canvas.add(*disc_cmd);
  add_config(disc_cmd);

  std::string outdir = ".";
  int letter_res = 64;
  double letter_stroke = 3.0;
  bool portrait = false;
  auto* letters_cmd = app.add_subcommand("letters", "Write the N, J, L and M raster fixtures");
  letters_cmd->add_option("--outdir", outdir, "Output directory")->capture_default_str();
  letters_cmd->add_option("--res", letter_res, "Side length in pixels")->capture_default_str();
  letters_cmd->add_option("--stroke", letter_stroke, "Stroke width in pixels")->capture_default_str();
  letters_cmd->add_flag("--portrait", portrait, "Also write portrait.pgm (128x128)");
  add_config(letters_cmd);

  bool rescale = false;
  std::string recon_out;
  auto* score_cmd = app.add_subcommand("score", "Ergodicity of an external drawing against an image");
  score_cmd->add_option("--traj", traj_path, "Trajectory CSV")->required();
  score_cmd->add_option("--image", image, "Target PGM")->required();
  score_cmd->add_option("--K", order, "Coefficients per axis")->capture_default_str();
  score_cmd->add_flag("--rescale", rescale, "Fit the pen path's bounding box into the domain");
  score_cmd->add_option("--recon", recon_out, "Write the trajectory reconstruction as PGM");
  score_cmd->add_option("--res", res, "Reconstruction size ROWSxCOLS")->capture_default_str();
  canvas.add(*score_cmd);
  add_config(score_cmd);

  // Splice config-file entries in right after the subcommand so that later
  // command-line flags override them.
  std::vector<std::string> args = raw;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      continue;
    }
    const auto extra = config_arguments(read_text(path));
    args.insert(args.begin() + (args.empty() ? 0 : 1), extra.begin(), extra.end());
    break;
  }
  std::reverse(args.begin(), args.end());
  app.parse(args);

  if (draw_cmd->parsed()) return draw.run(out);

  if (coeffs_cmd->parsed()) {
    emit(out_path, format_coefficients_csv(canvas.coefficients(image, order)), out);
    return ok;
  }

  if (recon_cmd->parsed()) {
    const auto [rows, cols] = parse_resolution(res);
    const Domain<> domain = canvas.domain();
    CoefficientGrid<> grid = [&] {
      if (!coeffs_path.empty()) return read_coefficients_csv(coeffs_path, domain);
      if (!traj_path.empty()) return trajectory_coeffs(read_trajectory_csv(traj_path), order, domain);
      throw ValidationError("reconstruct needs --coeffs or --traj");
    }();
    write_pgm(out_path, to_gray_image(reconstruct(grid, rows, cols)));
    return ok;
  }

  if (metric_cmd->parsed()) {
    const auto phi = canvas.coefficients(image, order);
    emit(out_path, metric_csv_text(metric_timeseries(read_trajectory_csv(traj_path), phi, stride)), out);
    return ok;
  }

  if (disc_cmd->parsed()) {
    if (candidates.size() < 2) throw ValidationError("discriminate needs at least two candidates");
    std::vector<std::string> labels;
    std::vector<SpatialDistribution<>> dists;
    for (const auto& c : candidates) {
      labels.push_back(fs::path(c).stem().string());
      dists.push_back(to_distribution(canvas.load(c), canvas.domain(), canvas.density()));
    }
    const auto report =
        discriminate(read_trajectory_csv(traj_path), make_candidates(labels, dists, order), stride);
    if (out_path.empty()) {
      std::ostringstream ss;
      ss << "rank,label,distance\n";
      const auto last = report.distance.rows() - 1;
      for (std::size_t r = 0; r < report.ranking.size(); ++r) {
        const int c = report.ranking[r];
        ss << r + 1 << ',' << report.labels[static_cast<std::size_t>(c)] << ',' << fmt(report.distance(last, c))
           << "\n";
      }
      out << ss.str();
    } else {
      write_discrimination_csv(out_path, report);
      out << "winner " << report.winner() << "\n";
      if (report.crossover) out << "crossover " << fmt(*report.crossover) << "\n";
    }
    return ok;
  }

  if (letters_cmd->parsed()) {
    fs::create_directories(outdir);
    for (char c : {'N', 'J', 'L', 'M'}) {
      const fs::path p = fs::path(outdir) / (std::string(1, static_cast<char>(c + ('a' - 'A'))) + ".pgm");
      write_pgm(p, rasterize_letter(c, letter_res, letter_res, letter_stroke));
      out << p.string() << "\n";
    }
    if (portrait) {
      const fs::path p = fs::path(outdir) / "portrait.pgm";
      write_pgm(p, synthesize_portrait(128, 128));
      out << p.string() << "\n";
    }
    return ok;
  }

  if (score_cmd->parsed()) {
    const auto [rows, cols] = parse_resolution(res);
    ScoreOptions opts;
    opts.domain = canvas.domain();
    opts.density = canvas.density();
    opts.max_side = canvas.max_side;
    opts.rescale_to_domain = rescale;
    opts.rows = rows;
    opts.cols = cols;
    const Score s = score_external(traj_path, load_pgm(image), order, opts);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", s.epsilon);
    out << "epsilon " << buf << "\n";
    if (!recon_out.empty()) write_pgm(recon_out, to_gray_image(s.reconstruction));
    return ok;
  }
  return invalid;
}

}  // namespace
}  // namespace ergodraw::cli
