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

#include "cli.hpp"
#include "ergodraw/canvas.hpp"
#include "ergodraw/io.hpp"
#include "support.hpp"

using namespace ergodraw;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string s(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("config files") {
  const auto args = cli::config_arguments("# header\nmethod = pto\n  --T=2 # inline\n\nesac.horizon = 0.3\n");
  CHECK(args == std::vector<std::string>{"--method", "pto", "--T", "2", "--esac.horizon", "0.3"});
  CHECK_THROWS(cli::config_arguments("method pto\n"));
}

TEST_CASE("command line") {
  const auto dir = ergodraw::testing::scratch_dir("cli");
  REQUIRE(run({"letters", "--outdir", s(dir)}).code == 0);
  for (const char* f : {"n.pgm", "j.pgm", "l.pgm", "m.pgm"}) CHECK(fs::exists(dir / f));
  const std::string n = s(dir / "n.pgm");

  SUBCASE("draw writes four artifacts and is deterministic") {
    const auto a = run({"draw", "--method", "esac", "--dynamics", "double", "--image", n, "--T", "5", "--out",
                        s(dir / "a.csv"), "--svg", s(dir / "a.svg")});
    REQUIRE(a.code == 0);
    CHECK(fs::exists(dir / "a.csv"));
    CHECK(fs::exists(dir / "a_metric.csv"));
    CHECK(fs::exists(dir / "a.svg"));
    CHECK(a.out.find("epsilon_final") != std::string::npos);
    CHECK(a.out.find("null_steps") != std::string::npos);
    const auto b = run({"draw", "--method", "esac", "--dynamics", "double", "--image", n, "--T", "5", "--out",
                        s(dir / "b.csv"), "--metric", s(dir / "b_m.csv"), "--svg", s(dir / "b.svg")});
    REQUIRE(b.code == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a_metric.csv") == slurp(dir / "b_m.csv"));
    CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));

    // the emitted trajectory scores to the reported final metric
    const auto score = run({"score", "--traj", s(dir / "a.csv"), "--image", n});
    REQUIRE(score.code == 0);
    const std::string metric = slurp(dir / "a_metric.csv");
    const std::string last = metric.substr(metric.rfind(',', metric.size() - 2) + 1);
    CHECK(std::abs(std::stod(score.out.substr(8)) - std::stod(last)) < 1e-9);
  }

  SUBCASE("every method and dynamics pairing runs") {
    for (const char* m : {"cfec", "esac", "pto"}) {
      for (const char* d : {"single", "double", "spring"}) {
        const auto r = run({"draw", "--method", m, "--dynamics", d, "--image", n, "--T", "0.5", "--out",
                            s(dir / "x.csv"), "--pto.iterations", "2"});
        CAPTURE(m);
        CAPTURE(d);
        CHECK(r.code == (std::string(m) == "cfec" && std::string(d) == "spring" ? 2 : 0));
      }
    }
  }

  SUBCASE("argument errors exit 2") {
    const auto spring = run({"draw", "--method", "cfec", "--dynamics", "spring", "--image", n});
    CHECK(spring.code == 2);
    CHECK(spring.err.find("spring") != std::string::npos);
    CHECK(run({"draw", "--T", "0.05", "--image", n}).code == 2);
    CHECK(run({"draw", "--dt", "0.03", "--image", n}).code == 2);
    CHECK(run({"draw", "--method", "rrt", "--image", n}).code == 2);
    CHECK(run({"draw"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"draw", "--image", n, "--K", "0"}).code == 2);
    CHECK(run({"draw", "--image", n, "--T", "1", "--esac.R", "-1"}).code == 2);
    CHECK(run({"reconstruct", "--coeffs", "x.csv", "--res", "12", "--out", s(dir / "r.pgm")}).code == 2);
    CHECK(run({"--help"}).code == 0);
  }

  SUBCASE("io errors exit 3") {
    CHECK(run({"draw", "--image", s(dir / "missing.pgm")}).code == 3);
    std::ofstream(dir / "broken.pgm") << "P2\n2 2\n255\n1 2 3";
    CHECK(run({"coeffs", "--image", s(dir / "broken.pgm")}).code == 3);
    CHECK(run({"draw", "--config", s(dir / "nope.cfg"), "--image", n}).code == 3);
  }

  SUBCASE("config values yield to flags") {
    std::ofstream(dir / "run.cfg") << "# short run\nmethod = cfec\nT = 0.5\ndynamics = double\n";
    const auto a = run({"draw", "--config", s(dir / "run.cfg"), "--image", n, "--out", s(dir / "c.csv")});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("method cfec") != std::string::npos);
    CHECK(a.out.find("samples 50") != std::string::npos);
    const auto b = run({"draw", "--image", n, "--out", s(dir / "c.csv"), "--config", s(dir / "run.cfg"), "--T",
                        "0.3", "--method", "esac"});
    REQUIRE(b.code == 0);
    CHECK(b.out.find("method esac") != std::string::npos);
    CHECK(b.out.find("samples 30") != std::string::npos);
    CHECK(b.out.find("dynamics double") != std::string::npos);
    std::ofstream(dir / "bad.cfg") << "method\n";
    CHECK(run({"draw", "--config", s(dir / "bad.cfg"), "--image", n}).code == 2);
  }

  SUBCASE("coefficients and reconstruction of a uniform image") {
    write_pgm(dir / "uniform.pgm", GrayImage(32, 32, 100));
    REQUIRE(run({"coeffs", "--image", s(dir / "uniform.pgm"), "--K", "10", "--out", s(dir / "u.csv")}).code == 0);
    const auto c = read_coefficients_csv(dir / "u.csv");
    CHECK(c(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    Table<> rest = c.values();
    rest(0, 0) = 0;
    CHECK(rest.abs().maxCoeff() < 1e-9);
    const auto stdout_csv = run({"coeffs", "--image", s(dir / "uniform.pgm"), "--K", "10"});
    CHECK(stdout_csv.out == slurp(dir / "u.csv"));

    REQUIRE(run({"reconstruct", "--coeffs", s(dir / "u.csv"), "--res", "128x128", "--out", s(dir / "r.pgm")}).code ==
            0);
    const GrayImage r = load_pgm(dir / "r.pgm");
    CHECK(r.rows() == 128);
    CHECK((r.pixels() == r(0, 0)).all());
  }

  SUBCASE("discriminate, metric and reconstruct from a run on N") {
    REQUIRE(run({"draw", "--method", "cfec", "--image", n, "--out", s(dir / "n.csv")}).code == 0);
    const std::string cands = s(dir / "n.pgm") + "," + s(dir / "j.pgm") + "," + s(dir / "l.pgm") + "," +
                              s(dir / "m.pgm");
    const auto d = run({"discriminate", "--traj", s(dir / "n.csv"), "--candidates", cands});
    REQUIRE(d.code == 0);
    CHECK(d.out.rfind("rank,label,distance\n1,n,", 0) == 0);
    const auto d2 = run({"discriminate", "--traj", s(dir / "n.csv"), "--candidates", cands, "--out",
                         s(dir / "d.csv")});
    REQUIRE(d2.code == 0);
    CHECK(d2.out.find("winner n") != std::string::npos);
    CHECK(slurp(dir / "d.csv").rfind("t,label,distance,unweighted\n", 0) == 0);

    const auto m = run({"metric", "--traj", s(dir / "n.csv"), "--image", n});
    REQUIRE(m.code == 0);
    CHECK(m.out == slurp(dir / "n_metric.csv"));

    REQUIRE(run({"reconstruct", "--traj", s(dir / "n.csv"), "--res", "64x48", "--out", s(dir / "nr.pgm")}).code == 0);
    CHECK(load_pgm(dir / "nr.pgm").cols() == 48);
  }

  SUBCASE("large images are downsampled") {
    write_pgm(dir / "big.pgm", resample(rasterize_letter('N', 64, 64, 3), 400, 300));
    const auto r = run({"coeffs", "--image", s(dir / "big.pgm"), "--K", "4"});
    CHECK(r.code == 0);
  }
}
