#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "unifilt/bench/verify.hpp"
#include "unifilt/core.hpp"
#include "unifilt/dense_reference.hpp"

using Catch::Approx;
using namespace unifilt;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("true loss is the squared residual") {
  REQUIRE(true_loss(1.0, vec2(1, 0), vec2(1, 5)) == 0.0);
  REQUIRE(true_loss(3.0, vec2(0, 0), vec2(7, 2)) == 9.0);
  REQUIRE(true_loss(1.0, vec2(0.5, -0.25), vec2(2, 4)) == Approx(1.0));
  REQUIRE_THROWS_AS(true_loss(1.0, vec2(1, 0), Vec::Zero(3)), std::invalid_argument);
}

TEST_CASE("surrogate loss adds the linear noise correction") {
  REQUIRE(surrogate_loss(3.0, vec2(0, 0), vec2(3, 1), 1.0) == 9.0);
  REQUIRE(surrogate_loss(3.0, vec2(1, 0), vec2(3, 1), 1.0) == 2.0);
  REQUIRE(surrogate_loss(1.0, vec2(0.5, -0.25), vec2(2, 4), 0.5) == Approx(1.5));
}

TEST_CASE("surrogate gradient") {
  // with zero residual only the 2c term remains, c = (sigma2, 0, ...)
  ProblemConstants consts;
  consts.order = 2;
  consts.sigma2 = 1.0;
  const Vec g1 = surrogate_gradient(3.0, vec2(1, 0), vec2(3, 1), 1.0);
  REQUIRE(g1 == 2.0 * consts.noise_spike());
  REQUIRE(g1(0) == Approx(2.0));
  REQUIRE(g1(1) == Approx(0.0));
  const Vec g2 = surrogate_gradient(1.0, vec2(0, 0), vec2(1, 0), 0.0);
  REQUIRE(g2(0) == Approx(-2.0));
  REQUIRE(g2(1) == Approx(0.0));
  const Vec g3 = surrogate_gradient(1.0, vec2(0.5, -0.25), vec2(2, 4), 0.5);
  REQUIRE(g3(0) == Approx(-3.0));
  REQUIRE(g3(1) == Approx(-8.0));

  SECTION("matches central finite differences") {
    const double h = 1e-6;
    Vec w = vec2(0.5, -0.25);
    for (int i = 0; i < 2; ++i) {
      Vec up = w, down = w;
      up(i) += h;
      down(i) -= h;
      const double fd = (surrogate_loss(1.0, up, vec2(2, 4), 0.5) -
                         surrogate_loss(1.0, down, vec2(2, 4), 0.5)) /
                        (2.0 * h);
      REQUIRE(g3(i) == Approx(fd).margin(1e-7));
    }
  }
}

TEST_CASE("block loss at the anchor is the plain surrogate sum") {
  Rng rng = Rng::stream(1, kMonteCarloStream);
  for (int trial = 0; trial < 50; ++trial) {
    const bench::BlockInstance inst = bench::random_block_instance(rng);
    double expected = 0.0;
    for (int i = 0; i < inst.consts.block_len; ++i) {
      expected +=
          surrogate_loss(inst.samples.targets[static_cast<std::size_t>(i)], inst.anchor,
                         inst.samples.windows[static_cast<std::size_t>(i)], inst.consts.sigma2);
    }
    REQUIRE(block_loss(inst.samples, inst.anchor, inst.anchor, inst.consts) == expected);
  }
}

TEST_CASE("block loss, scalar case with vanishing regularizer") {
  ProblemConstants c;
  c.order = 1;
  c.block_len = 2;
  c.sigma2 = 1.0;
  BlockSamples samples;
  samples.targets = {1.0, -1.0};
  samples.windows = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  const Vec anchor = Vec::Zero(1);
  const Vec w = Vec::Constant(1, 1.0);
  // 2*sigma2 - sum y^2 = 0 here, so only the surrogate sum remains.
  REQUIRE(block_loss(samples, anchor, w, c) == Approx(4.0));
  const Vec g = block_loss_gradient(samples, anchor, w, c);
  REQUIRE(g(0) == Approx(4.0));

  SECTION("sample-count contract") {
    samples.targets.pop_back();
    samples.windows.pop_back();
    REQUIRE_THROWS_AS(block_loss(samples, anchor, w, c), std::invalid_argument);
  }
}

TEST_CASE("block gradient at the anchor reduces to the surrogate gradients") {
  Rng rng = Rng::stream(2, kMonteCarloStream);
  const bench::BlockInstance inst = bench::random_block_instance(rng);
  Vec expected = Vec::Zero(inst.consts.order);
  for (int i = 0; i < inst.consts.block_len; ++i) {
    expected += surrogate_gradient(inst.samples.targets[static_cast<std::size_t>(i)], inst.anchor,
                                   inst.samples.windows[static_cast<std::size_t>(i)],
                                   inst.consts.sigma2);
  }
  const Vec g = block_loss_gradient(inst.samples, inst.anchor, inst.anchor, inst.consts);
  REQUIRE((g - expected).norm() <= 1e-12 * (1.0 + expected.norm()));
}

TEST_CASE("block gradient matches finite differences on random instances") {
  Rng rng = Rng::stream(3, kMonteCarloStream);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bench::BlockInstance inst = bench::random_block_instance(rng);
    const Vec g = block_loss_gradient(inst.samples, inst.anchor, inst.w, inst.consts);
    const Vec fd = bench::finite_difference_gradient(inst);
    worst = std::max(worst, (g - fd).norm() / (1.0 + g.norm()));
  }
  REQUIRE(worst <= 1e-5);
}

TEST_CASE("matrix-free block loss and gradient agree with the dense reference") {
  Rng rng = Rng::stream(4, kMonteCarloStream);
  for (int trial = 0; trial < 200; ++trial) {
    const bench::BlockInstance inst = bench::random_block_instance(rng);
    const double fast = block_loss(inst.samples, inst.anchor, inst.w, inst.consts);
    const double slow = dense::block_loss(inst.samples, inst.anchor, inst.w, inst.consts);
    REQUIRE(std::fabs(fast - slow) <= 1e-10 * (1.0 + std::fabs(slow)));
    const Vec gf = block_loss_gradient(inst.samples, inst.anchor, inst.w, inst.consts);
    const Vec gs = dense::block_loss_gradient(inst.samples, inst.anchor, inst.w, inst.consts);
    REQUIRE((gf - gs).norm() <= 1e-10 * (1.0 + gs.norm()));
  }
}

TEST_CASE("block Hessian keeps the strong-convexity floor") {
  Rng rng = Rng::stream(5, kMonteCarloStream);
  for (int trial = 0; trial < 200; ++trial) {
    const bench::BlockInstance inst = bench::random_block_instance(rng);
    const Eigen::MatrixXd h = dense::block_hessian(inst.samples, inst.consts);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const double modulus =
        2.0 * (inst.consts.block_len - inst.consts.order + 1) * inst.consts.sigma2;
    REQUIRE(eig.eigenvalues()(0) >= modulus - 1e-9);
  }
}

TEST_CASE("gradient norm bound") {
  SECTION("closed form at d=1") {
    ProblemConstants c;
    c.order = 1;
    c.block_len = 1;
    c.sigma2 = 1.0;
    c.signal_bound = 0.5;
    c.noise_bound = 0.5;
    c.radius = 1.0;
    REQUIRE(gradient_norm_bound(c, 1, 1.0) == Approx(14.0));
  }
  SECTION("positive for any valid constants") {
    Rng rng = Rng::stream(6, kMonteCarloStream);
    for (int trial = 0; trial < 100; ++trial) {
      const bench::BlockInstance inst = bench::random_block_instance(rng);
      REQUIRE(gradient_norm_bound(inst.consts) > 0.0);
    }
  }
  SECTION("dominates sampled gradient norms") {
    Rng rng = Rng::stream(7, kMonteCarloStream);
    for (int trial = 0; trial < 10000; ++trial) {
      const bench::BlockInstance inst = bench::random_block_instance(rng);
      const Vec g = block_loss_gradient(inst.samples, inst.anchor, inst.w, inst.consts);
      REQUIRE(g.norm() <= gradient_norm_bound(inst.consts));
    }
  }
}

TEST_CASE("projection onto the ball") {
  const Vec inside = project_to_ball(vec2(0.3, 0.4), 1.0);
  REQUIRE(inside(0) == 0.3);
  REQUIRE(inside(1) == 0.4);
  const Vec scaled = project_to_ball(vec2(3, 4), 1.0);
  REQUIRE(scaled(0) == Approx(0.6));
  REQUIRE(scaled(1) == Approx(0.8));
  const Vec origin = project_to_ball(vec2(0, 0), 0.1);
  REQUIRE(origin.norm() == 0.0);
}

TEST_CASE("exp(-alpha * block loss) is midpoint-concave at the derived rate") {
  Rng rng = Rng::stream(8, kMonteCarloStream);
  for (int trial = 0; trial < 200; ++trial) {
    const bench::BlockInstance inst = bench::random_block_instance(rng);
    const double g = gradient_norm_bound(inst.consts);
    const double rate =
        2.0 * (inst.consts.block_len - inst.consts.order + 1) * inst.consts.sigma2 / (g * g);
    const Vec a = inst.anchor;  // both already in the ball
    const Vec b = inst.w;
    const Vec mid = 0.5 * (a + b);
    const double fa = std::exp(-rate * block_loss(inst.samples, inst.anchor, a, inst.consts));
    const double fb = std::exp(-rate * block_loss(inst.samples, inst.anchor, b, inst.consts));
    const double fm = std::exp(-rate * block_loss(inst.samples, inst.anchor, mid, inst.consts));
    const double scale = std::max({fa, fb, fm});
    REQUIRE(fm >= 0.5 * (fa + fb) - 1e-12 * scale);
  }
}

TEST_CASE("surrogate regret is unbiased for the true regret") {
  // Smaller copy of the Monte Carlo acceptance check: GD's filters are
  // past-measurable, so the mean gap must sit within 3 standard errors of 0.
  SignalSpec sig;
  sig.kind = SignalKind::kSinusoid;
  sig.amplitude = 1.0;
  sig.period = 16.0;
  const std::vector<double> signal = generate_signal(sig, 128);
  NoiseSpec noise;
  noise.kind = NoiseKind::kUniform;
  noise.bound = 0.5;
  const ProblemConstants consts = bench::mc_constants(noise.variance());
  std::vector<double> stats;
  for (int i = 0; i < 2000; ++i) {
    stats.push_back(bench::paired_regret_sample(consts, signal, noise,
                                                100 + static_cast<std::uint64_t>(i),
                                                bench::mc_comparator())
                        .surrogate_minus_true);
  }
  const bench::MonteCarloSummary s = bench::summarize_samples(stats);
  REQUIRE(std::fabs(s.z()) <= 3.0);
}

TEST_CASE("constants validation and analysis defaults") {
  REQUIRE(ProblemConstants::default_block_len(4) == 8);
  REQUIRE(ProblemConstants::default_step_scale(4, 0.25) == Approx(1.0));
  REQUIRE(ProblemConstants::default_radius(4, 1.0, 0.5) == Approx(4.0));

  const ProblemConstants c = ProblemConstants::analysis_defaults(4, 0.25, 1.0, 0.5);
  REQUIRE(c.block_len == 8);
  REQUIRE(c.step_scale == Approx(1.0));
  REQUIRE(c.radius == Approx(8.0));
  const double g = gradient_norm_bound(c, 8, c.radius);
  REQUIRE(c.expert_rate == Approx(4.0 * 0.25 / (g * g)));

  SECTION("the default rate never exceeds the exp-concavity threshold at k = 2d") {
    Rng rng = Rng::stream(9, kMonteCarloStream);
    for (int trial = 0; trial < 100; ++trial) {
      const double sigma2 = rng.uniform(0.05, 2.0);
      const int d = 1 + static_cast<int>(rng.unit() * 8);
      const ProblemConstants t = ProblemConstants::analysis_defaults(
          d, sigma2, rng.uniform(0.3, 2.0), rng.uniform(0.1, 1.0));
      const double bound = gradient_norm_bound(t);
      const double threshold = 2.0 * (t.block_len - t.order + 1) * t.sigma2 / (bound * bound);
      REQUIRE(t.expert_rate <= threshold);
    }
  }

  SECTION("invalid fields are rejected") {
    ProblemConstants bad;
    bad.order = 2;
    bad.block_len = 1;  // k < d
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.block_len = 4;
    bad.radius = 0.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    REQUIRE_THROWS_AS(ProblemConstants::default_radius(2, 1.0, 0.0), std::invalid_argument);
  }
}
