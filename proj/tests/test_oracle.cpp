#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "unifilt/bench/verify.hpp"
#include "unifilt/oracle.hpp"
#include "unifilt/signals.hpp"

using Catch::Approx;
using namespace unifilt;

namespace {

std::vector<double> ar1_signal(std::int64_t horizon, std::uint64_t seed = 1) {
  SignalSpec sig;
  sig.kind = SignalKind::kAr1;
  sig.amplitude = 1.0;
  sig.ar_coeff = 0.7;
  sig.ar_seed = seed;
  return generate_signal(sig, horizon);
}

}  // namespace

TEST_CASE("noiseless streams are solved by the identity filter") {
  const std::vector<double> x = ar1_signal(60);
  const std::vector<Vec> windows = build_windows(x, 3);  // y = x
  const PrefixSummaries prefixes(x, windows);
  const BallRegression best = best_fixed_filter(prefixes.between(1, 60), 2.0);
  REQUIRE(best.loss == Approx(0.0).margin(1e-9));
  REQUIRE(best.filter(0) == Approx(1.0).margin(1e-7));
  REQUIRE(best.filter(1) == Approx(0.0).margin(1e-7));
  REQUIRE(best.filter(2) == Approx(0.0).margin(1e-7));
}

TEST_CASE("a zero signal is solved by the zero filter") {
  const std::vector<double> x(40, 0.0);
  std::vector<double> y(40);
  Rng rng = Rng::stream(21, kMonteCarloStream);
  for (auto& v : y) v = rng.uniform(-1.0, 1.0);
  const PrefixSummaries prefixes(x, build_windows(y, 2));
  const BallRegression best = best_fixed_filter(prefixes.between(1, 40), 1.0);
  REQUIRE(best.filter.norm() == Approx(0.0).margin(1e-12));
  REQUIRE(best.loss == Approx(0.0).margin(1e-12));
}

TEST_CASE("constrained and unconstrained solutions against grid search") {
  const auto checks = bench::acceptance_oracle_grid(10);
  for (const auto& c : checks) {
    INFO(c.name << " = " << c.statistic);
    REQUIRE(c.pass);
  }
}

TEST_CASE("ball feasibility and interior optimality") {
  Rng rng = Rng::stream(22, kMonteCarloStream);
  for (int trial = 0; trial < 30; ++trial) {
    const std::int64_t t_len = 10 + static_cast<std::int64_t>(rng.unit() * 40);
    std::vector<double> x(static_cast<std::size_t>(t_len)), y(static_cast<std::size_t>(t_len));
    for (auto& v : x) v = rng.uniform(-2.0, 2.0);
    for (auto& v : y) v = rng.uniform(-1.0, 1.0);
    const PrefixSummaries prefixes(x, build_windows(y, 3));
    const IntervalSummary sum = prefixes.between(1, t_len);
    const double radius = trial % 2 == 0 ? 0.5 : 5.0;
    const BallRegression best = best_fixed_filter(sum, radius);
    REQUIRE(best.filter.norm() <= radius + 1e-9);
    if (best.multiplier == 0.0) {
      // interior: the normal equations hold
      const double residual = (sum.gram * best.filter - sum.cross).norm();
      REQUIRE(residual <= 1e-9 * (1.0 + sum.cross.norm()));
    }

    // no nearby ball point may improve the loss
    const auto loss_at = [&](const Vec& w) {
      return sum.sq - 2.0 * w.dot(sum.cross) + w.dot(sum.gram * w);
    };
    for (int dir = 0; dir < 100; ++dir) {
      Vec step(3);
      for (int i = 0; i < 3; ++i) step(i) = rng.uniform(-1.0, 1.0);
      step *= 1e-3 / step.norm();
      const Vec probe = project_to_ball(best.filter + step, radius);
      REQUIRE(loss_at(probe) >= best.loss - 1e-9);
    }
  }
}

TEST_CASE("prefix summaries compose consistently") {
  const std::vector<double> x = ar1_signal(80, 3);
  std::vector<double> y(x.size());
  Rng rng = Rng::stream(23, kMonteCarloStream);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = x[t] + rng.uniform(-0.5, 0.5);
  const std::vector<Vec> windows = build_windows(y, 3);
  const PrefixSummaries prefixes(x, windows);

  const std::int64_t r = 17, s = 54;
  const IntervalSummary sum = prefixes.between(r, s);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(3, 3);
  Vec cross = Vec::Zero(3);
  double sq = 0.0;
  for (std::int64_t t = r; t <= s; ++t) {
    const Vec& w = windows[static_cast<std::size_t>(t - 1)];
    gram += w * w.transpose();
    cross += x[static_cast<std::size_t>(t - 1)] * w;
    sq += x[static_cast<std::size_t>(t - 1)] * x[static_cast<std::size_t>(t - 1)];
  }
  REQUIRE((sum.gram - gram).norm() <= 1e-10 * (1.0 + gram.norm()));
  REQUIRE((sum.cross - cross).norm() <= 1e-10 * (1.0 + cross.norm()));
  REQUIRE(sum.sq == Approx(sq).epsilon(1e-10));
  REQUIRE_THROWS_AS(prefixes.between(0, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(prefixes.between(5, 81), std::invalid_argument);
}

TEST_CASE("interval regret") {
  const std::vector<double> x = ar1_signal(64, 5);
  std::vector<double> y(x.size());
  Rng rng = Rng::stream(24, kMonteCarloStream);
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = x[t] + rng.uniform(-0.3, 0.3);
  const std::vector<Vec> windows = build_windows(y, 2);
  const PrefixSummaries prefixes(x, windows);

  SECTION("playing the interval's own comparator gives zero regret") {
    const BallRegression best = best_fixed_filter(prefixes.between(1, 64), 2.0);
    std::vector<double> losses(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
      losses[t] = true_loss(x[t], best.filter, windows[t]);
    }
    REQUIRE(interval_regret(losses, prefixes, 1, 64, 2.0) == Approx(0.0).margin(1e-8));
  }
  SECTION("a single exactly-predicted step has zero regret") {
    std::vector<double> losses(y.size(), 0.0);
    REQUIRE(interval_regret(losses, prefixes, 10, 10, 2.0) == Approx(0.0).margin(1e-12));
  }
  SECTION("invalid intervals are rejected") {
    std::vector<double> losses(y.size(), 0.0);
    REQUIRE_THROWS_AS(interval_regret(losses, prefixes, 5, 4, 2.0), std::invalid_argument);
    REQUIRE_THROWS_AS(interval_regret(losses, prefixes, 0, 4, 2.0), std::invalid_argument);
  }
}

TEST_CASE("interval scan dominates the full interval and refines monotonically") {
  const std::vector<double> x = ar1_signal(96, 7);
  std::vector<double> y(x.size());
  std::vector<double> losses(x.size());
  Rng rng = Rng::stream(25, kMonteCarloStream);
  for (std::size_t t = 0; t < y.size(); ++t) {
    y[t] = x[t] + rng.uniform(-0.4, 0.4);
    losses[t] = rng.uniform(0.0, 1.0);  // any recorded loss sequence works here
  }
  const PrefixSummaries prefixes(x, build_windows(y, 2));
  const double full = interval_regret(losses, prefixes, 1, 96, 1.5);
  const ScanResult coarse = adaptive_regret_scan(losses, prefixes, 1.5, 16);
  const ScanResult fine = adaptive_regret_scan(losses, prefixes, 1.5, 4);
  const ScanResult exact = adaptive_regret_scan(losses, prefixes, 1.5, 1);
  REQUIRE(coarse.value >= full - 1e-12);
  REQUIRE(fine.value >= coarse.value - 1e-12);
  REQUIRE(exact.value >= fine.value - 1e-12);
}

TEST_CASE("covariance identity reports") {
  SECTION("zero noise deviates by exactly nothing") {
    NoiseSpec none;
    none.kind = NoiseKind::kUniform;
    none.bound = 0.0;
    Vec clean(3);
    clean << 0.3, -0.8, 0.5;
    const CovarianceReport report = covariance_check(clean, none, 100);
    REQUIRE(report.max_abs_deviation <= 1e-12);
  }
  SECTION("rademacher noise on a zero signal") {
    NoiseSpec rad;
    rad.kind = NoiseKind::kRademacher;
    rad.bound = 1.0;
    rad.seed = 29;
    const CovarianceReport report = covariance_check(Vec::Zero(3), rad, 100000);
    REQUIRE(report.within(4.0));
  }
  SECTION("uniform noise with bound 3 has variance 3") {
    NoiseSpec uni;
    uni.kind = NoiseKind::kUniform;
    uni.bound = 3.0;
    uni.seed = 31;
    REQUIRE(uni.variance() == Approx(3.0));
    Vec clean(3);
    clean << 0.5, 0.0, -0.5;
    const CovarianceReport report = covariance_check(clean, uni, 100000);
    REQUIRE(report.within(4.0));
  }
}
