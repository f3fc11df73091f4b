#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "unifilt/bench/config.hpp"
#include "unifilt/bench/experiment.hpp"
#include "unifilt/bench/verify.hpp"

using Catch::Approx;
using namespace unifilt;
using namespace unifilt::bench;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("config files parse and flags override them") {
  const std::string path = write_temp("unifilt_config.txt",
                                      "# experiment\n"
                                      "T = 512\n"
                                      "d = 2\n"
                                      "noise = rademacher\n"
                                      "B_N = 0.25\n"
                                      "seeds = 3..5\n");
  ConfigMap map = ConfigMap::from_file(path);
  map.set("T", "256");  // command-line style override
  const ExperimentConfig cfg = map.resolve();
  REQUIRE(cfg.horizon == 256);
  REQUIRE(cfg.consts.order == 2);
  REQUIRE(cfg.noise.kind == NoiseKind::kRademacher);
  REQUIRE(cfg.consts.sigma2 == Approx(0.0625));
  REQUIRE(cfg.seeds == std::vector<std::uint64_t>{3, 4, 5});

  SECTION("unknown keys and bad values are rejected by name") {
    REQUIRE_THROWS_AS(map.set("bogus", "1"), ConfigError);
    map.set("period", "fast");
    try {
      map.resolve();
      FAIL("expected rejection");
    } catch (const ConfigError& e) {
      REQUIRE(std::string(e.what()).find("period") != std::string::npos);
    }
  }
}

TEST_CASE("omitted constants reproduce the analysis defaults") {
  ConfigMap map;
  map.set("d", "4");
  map.set("noise", "uniform");
  map.set("B_N", "0.5");
  map.set("amplitude", "1.0");
  const ExperimentConfig cfg = map.resolve();
  const double sigma2 = 0.25 / 3.0;
  REQUIRE(cfg.consts.sigma2 == Approx(sigma2));
  REQUIRE(cfg.consts.block_len == 8);
  REQUIRE(cfg.consts.step_scale == Approx(4.0 * sigma2));
  REQUIRE(cfg.consts.radius == Approx(2.0 / sigma2));
  const double g = gradient_norm_bound(cfg.consts, 8, cfg.consts.radius);
  REQUIRE(cfg.consts.expert_rate == Approx(4.0 * sigma2 / (g * g)));
  REQUIRE(cfg.scan_stride == 8);
  REQUIRE(cfg.seeds.size() == 20);
  REQUIRE(cfg.seeds.front() == 1);

  SECTION("explicit values win over the formulas") {
    map.set("k", "12");
    map.set("R", "1.5");
    map.set("H", "0.7");
    map.set("alpha", "0.01");
    const ExperimentConfig forced = map.resolve();
    REQUIRE(forced.consts.block_len == 12);
    REQUIRE(forced.consts.radius == 1.5);
    REQUIRE(forced.consts.step_scale == 0.7);
    REQUIRE(forced.consts.expert_rate == 0.01);
  }
}

TEST_CASE("baseline filters") {
  REQUIRE(baseline_filter("zero", 3).norm() == 0.0);
  const Vec e1 = baseline_filter("identity", 3);
  REQUIRE(e1(0) == 1.0);
  REQUIRE(e1.norm() == 1.0);
  REQUIRE_THROWS_AS(baseline_filter("nonsense", 3), std::invalid_argument);

  ConfigMap map;
  map.set("T", "64");
  map.set("seeds", "1");
  map.set("algorithm", "zero");
  map.set("out", temp_dir("unifilt_zero_out"));
  ExperimentConfig cfg = map.resolve();
  const std::vector<double> signal = generate_signal(cfg.signal, cfg.horizon);
  const SeedRun zero = run_seed(cfg, signal, 1);
  for (double p : zero.output.predictions) REQUIRE(p == 0.0);

  cfg.algorithm = "identity";
  const SeedRun ident = run_seed(cfg, signal, 1);
  for (std::size_t t = 0; t < ident.observations.size(); ++t) {
    REQUIRE(ident.output.predictions[t] == ident.observations[t]);
  }
}

TEST_CASE("identity baseline loses sigma2 per step on average") {
  ConfigMap map;
  map.set("T", "4096");
  map.set("seeds", "2");
  map.set("algorithm", "identity");
  const ExperimentConfig cfg = map.resolve();
  const std::vector<double> signal = generate_signal(cfg.signal, cfg.horizon);
  const SeedRun run = run_seed(cfg, signal, 2);
  const double mean = run.summary.cumulative_true_loss / static_cast<double>(cfg.horizon);
  REQUIRE(mean == Approx(cfg.consts.sigma2).margin(0.006));
}

TEST_CASE("trace files are byte-identical across repeated runs") {
  ConfigMap map;
  map.set("T", "64");
  map.set("seeds", "9");
  map.set("stride", "16");
  const std::string out_a = temp_dir("unifilt_det_a");
  const std::string out_b = temp_dir("unifilt_det_b");
  map.set("out", out_a);
  run_experiment(map.resolve());
  map.set("out", out_b);
  run_experiment(map.resolve());
  REQUIRE(slurp(out_a + "/trace_seed9.csv") == slurp(out_b + "/trace_seed9.csv"));
  REQUIRE(slurp(out_a + "/summary.csv") == slurp(out_b + "/summary.csv"));
  REQUIRE(!slurp(out_a + "/trace_seed9.csv").empty());
}

TEST_CASE("summary accounting matches the written trace") {
  ConfigMap map;
  map.set("T", "128");
  map.set("seeds", "4");
  map.set("stride", "32");
  const std::string out = temp_dir("unifilt_acct");
  map.set("out", out);
  const auto summaries = run_experiment(map.resolve());
  REQUIRE(summaries.size() == 1);

  std::ifstream in(out + "/trace_seed4.csv");
  std::string line;
  std::getline(in, line);  // header
  double total = 0.0;
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (int col = 0; col <= 4; ++col) std::getline(ss, cell, ',');
    total += std::stod(cell);
    ++rows;
  }
  REQUIRE(rows == 128);
  REQUIRE(std::fabs(total - summaries[0].cumulative_true_loss) <=
          1e-9 * (1.0 + summaries[0].cumulative_true_loss));
}

TEST_CASE("curve regret agrees with run_experiment at the same horizon") {
  ConfigMap map;
  map.set("seeds", "5");
  map.set("stride", "64");
  map.set("horizons", "256,512,1024");
  map.set("out", temp_dir("unifilt_curve"));
  ExperimentConfig cfg = map.resolve();
  const CurveResult curve = regret_curve(cfg, false);
  cfg.horizon = 1024;
  const auto summaries = run_experiment(cfg);
  REQUIRE(curve.points.back().horizon == 1024);
  REQUIRE(curve.points.back().mean_regret == Approx(summaries[0].regret_full).epsilon(1e-12));

  SECTION("fewer than 3 horizons is rejected") {
    map.set("horizons", "256,512");
    REQUIRE_THROWS_AS(regret_curve(map.resolve(), false), ConfigError);
  }
}

TEST_CASE("with zero noise the regret of a learnable signal plateaus") {
  ConfigMap map;
  map.set("d", "2");
  map.set("B_N", "0");     // noiseless stream
  map.set("sigma2", "0");
  map.set("H", "1");       // the formula defaults divide by sigma2
  map.set("R", "1.5");
  map.set("alpha", "1");
  map.set("seeds", "3");
  map.set("horizons", "512,1024,2048");
  const CurveResult curve = regret_curve(map.resolve(), false);
  const double early = curve.points.front().mean_regret;
  const double late = curve.points.back().mean_regret;
  REQUIRE(late <= early + 0.05 * std::fabs(early) + 1e-6);
}

TEST_CASE("reals are written with 17 significant digits") {
  REQUIRE(format_real(1.0) == "1");
  REQUIRE(format_real(0.1) == "0.10000000000000001");
  const double v = 0.123456789012345678;
  REQUIRE(std::stod(format_real(v)) == v);  // exact round trip
}

TEST_CASE("verify suite registry") {
  REQUIRE(suite_names().size() == 7);
  REQUIRE_THROWS_AS(run_suite("not-a-suite"), std::invalid_argument);
}
