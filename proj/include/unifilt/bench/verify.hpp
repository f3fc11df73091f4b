#ifndef UNIFILT_BENCH_VERIFY_HPP
#define UNIFILT_BENCH_VERIFY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "unifilt/adaptive_filter.hpp"
#include "unifilt/bench/experiment.hpp"
#include "unifilt/core.hpp"
#include "unifilt/dense_reference.hpp"
#include "unifilt/gd_filter.hpp"
#include "unifilt/oracle.hpp"
#include "unifilt/rng.hpp"
#include "unifilt/signals.hpp"

namespace unifilt::bench {

struct CheckResult {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string relation;  // how statistic relates to threshold when passing
  bool pass = false;
  std::string detail;
};

inline CheckResult make_check(std::string name, double statistic, double threshold,
                              std::string relation, std::string detail = "") {
  CheckResult r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.relation = std::move(relation);
  r.detail = std::move(detail);
  r.pass = r.relation == "<=" ? statistic <= threshold : statistic >= threshold;
  return r;
}

// ---------------------------------------------------------------------------
// Random bounded block instances shared by the sampling suites.

struct BlockInstance {
  ProblemConstants consts;
  BlockSamples samples;
  Vec anchor;
  Vec w;
};

inline Vec random_ball_point(Rng& rng, int d, double radius) {
  Vec w(d);
  for (int i = 0; i < d; ++i) w(i) = rng.uniform(-radius, radius);
  const double n = w.norm();
  if (n > radius) w *= radius / n;  // cube corners land on the sphere
  return w;
}

inline BlockInstance random_block_instance(Rng& rng, int max_order = 8) {
  BlockInstance inst;
  ProblemConstants& c = inst.consts;
  c.order = 1 + static_cast<int>(rng.unit() * max_order) % max_order;
  c.block_len = 2 * c.order;
  c.sigma2 = rng.uniform(0.05, 1.5);
  c.signal_bound = rng.uniform(0.25, 1.5);
  c.noise_bound = rng.uniform(0.1, 1.0);
  c.radius = rng.uniform(0.5, 3.0);
  c.step_scale = 1.0;
  c.expert_rate = 1.0;
  c.validate();

  // A consistent observation stream; a random prefix offset mixes blocks
  // with and without zero warm-up in their windows.
  const int offset = static_cast<int>(rng.unit() * (c.order + 1));
  const double b = c.amplitude_bound();
  std::vector<double> y(static_cast<std::size_t>(c.block_len + offset));
  for (auto& v : y) v = rng.uniform(-b, b);
  const std::vector<Vec> windows = build_windows(y, c.order);
  for (int i = 0; i < c.block_len; ++i) {
    inst.samples.targets.push_back(y[static_cast<std::size_t>(offset + i)]);
    inst.samples.windows.push_back(windows[static_cast<std::size_t>(offset + i)]);
  }
  inst.anchor = random_ball_point(rng, c.order, c.radius);
  inst.w = random_ball_point(rng, c.order, c.radius);
  return inst;
}

inline Vec finite_difference_gradient(const BlockInstance& inst, double h = 1e-6) {
  Vec g(inst.consts.order);
  Vec w = inst.w;
  for (int i = 0; i < inst.consts.order; ++i) {
    const double keep = w(i);
    w(i) = keep + h;
    const double up = block_loss(inst.samples, inst.anchor, w, inst.consts);
    w(i) = keep - h;
    const double down = block_loss(inst.samples, inst.anchor, w, inst.consts);
    w(i) = keep;
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Suites.

inline std::vector<CheckResult> suite_gradcheck(int instances = 1000) {
  Rng rng = Rng::stream(42, kMonteCarloStream);
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const BlockInstance inst = random_block_instance(rng);
    const Vec g = block_loss_gradient(inst.samples, inst.anchor, inst.w, inst.consts);
    const Vec fd = finite_difference_gradient(inst);
    worst = std::max(worst, (g - fd).norm() / (1.0 + g.norm()));
  }
  return {make_check("max_relative_gradient_error", worst, 1e-5, "<=",
                     std::to_string(instances) + " random bounded instances, d <= 8, k = 2d")};
}

inline std::vector<CheckResult> suite_convexity(int instances = 1000) {
  Rng rng = Rng::stream(43, kMonteCarloStream);
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    const BlockInstance inst = random_block_instance(rng);
    const Eigen::MatrixXd h = dense::block_hessian(inst.samples, inst.consts);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const double modulus =
        2.0 * (inst.consts.block_len - inst.consts.order + 1) * inst.consts.sigma2;
    worst_margin = std::min(worst_margin, eig.eigenvalues()(0) - modulus);
  }
  return {make_check("min_hessian_eigenvalue_margin", worst_margin, -1e-9, ">=",
                     "min eigenvalue minus 2(k-d+1)sigma2 over sampled blocks")};
}

// Shared Monte Carlo harness: fixed sinusoid signal, fixed comparator, GD's
// past-measurable filter sequence. Returns per-seed values of the chosen
// statistic.
struct PairedRegret {
  double surrogate_minus_true = 0.0;  // [surrogate regret] - [true regret]
  double block_minus_true = 0.0;      // [block-loss regret] - [true regret]
};

inline PairedRegret paired_regret_sample(const ProblemConstants& consts,
                                         const std::vector<double>& signal,
                                         const NoiseSpec& noise_proto, std::uint64_t seed,
                                         const Vec& comparator) {
  NoiseSpec noise = noise_proto;
  noise.seed = seed;
  const std::int64_t t_len = static_cast<std::int64_t>(signal.size());
  const std::vector<double> n = generate_noise(noise, t_len);
  std::vector<double> y(signal.size());
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = signal[t] + n[t];

  const GdRunResult run = gd_run(consts, y);
  const std::vector<Vec> windows = build_windows(y, consts.order);

  PairedRegret out;
  double surrogate_regret = 0.0;
  double true_regret = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const std::size_t block = std::min(t / static_cast<std::size_t>(consts.block_len),
                                       run.block_filters.size() - 1);
    const Vec& w_t = run.block_filters[block];
    const double pred = run.predictions[t];
    const double ey = y[t] - pred;
    const double surrogate_alg = ey * ey + 2.0 * consts.sigma2 * w_t(0);
    surrogate_regret += surrogate_alg - surrogate_loss(y[t], comparator, windows[t], consts.sigma2);
    const double ex = signal[t] - pred;
    true_regret += ex * ex - true_loss(signal[t], comparator, windows[t]);
  }
  out.surrogate_minus_true = surrogate_regret - true_regret;

  double block_regret = 0.0;
  const std::size_t blocks = y.size() / static_cast<std::size_t>(consts.block_len);
  for (std::size_t c = 0; c < blocks; ++c) {
    BlockSamples samples;
    for (int i = 0; i < consts.block_len; ++i) {
      const std::size_t t = c * static_cast<std::size_t>(consts.block_len) +
                            static_cast<std::size_t>(i);
      samples.targets.push_back(y[t]);
      samples.windows.push_back(windows[t]);
    }
    const Vec& anchor = run.block_filters[c];
    block_regret += block_loss(samples, anchor, anchor, consts) -
                    block_loss(samples, anchor, comparator, consts);
  }
  out.block_minus_true = block_regret - true_regret;
  return out;
}

struct MonteCarloSummary {
  double mean = 0.0;
  double se = 0.0;
  double z() const { return se > 0.0 ? mean / se : (mean == 0.0 ? 0.0 : 1e30); }
};

inline MonteCarloSummary summarize_samples(std::span<const double> samples) {
  MonteCarloSummary s;
  for (double v : samples) s.mean += v;
  s.mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double v : samples) var += (v - s.mean) * (v - s.mean);
  if (samples.size() > 1) {
    s.se = std::sqrt(var / (static_cast<double>(samples.size()) - 1.0) /
                     static_cast<double>(samples.size()));
  }
  return s;
}

inline ProblemConstants mc_constants(double sigma2) {
  ProblemConstants c;
  c.order = 4;
  c.block_len = 8;
  c.sigma2 = sigma2;
  c.signal_bound = 1.0;
  c.noise_bound = 1.0;
  c.radius = 2.0;
  c.step_scale = ProblemConstants::default_step_scale(c.order, sigma2);
  c.expert_rate = 1.0;
  c.validate();
  return c;
}

inline Vec mc_comparator() {
  Vec w(4);
  w << 0.5, 0.2, -0.1, 0.05;
  return w;
}

inline std::vector<NoiseSpec> mc_noise_kinds() {
  NoiseSpec uniform;
  uniform.kind = NoiseKind::kUniform;
  uniform.bound = 0.5;
  NoiseSpec rademacher;
  rademacher.kind = NoiseKind::kRademacher;
  rademacher.bound = 0.5;
  NoiseSpec truncated;
  truncated.kind = NoiseKind::kTruncatedGaussian;
  truncated.bound = 0.6;
  truncated.scale = 0.3;
  return {uniform, rademacher, truncated};
}

inline const char* noise_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kUniform: return "uniform";
    case NoiseKind::kRademacher: return "rademacher";
    case NoiseKind::kTruncatedGaussian: return "truncated-gaussian";
  }
  return "?";
}

/// Eq.-style unbiasedness: mean over noise draws of
/// [surrogate regret - true regret] should vanish for every noise kind.
inline std::vector<CheckResult> suite_unbiasedness(int seeds = 10000, std::int64_t horizon = 512) {
  SignalSpec sig;
  sig.kind = SignalKind::kSinusoid;
  sig.amplitude = 1.0;
  sig.period = 16.0;
  const std::vector<double> signal = generate_signal(sig, horizon);
  const Vec comparator = mc_comparator();
  std::vector<CheckResult> checks;
  for (const NoiseSpec& proto : mc_noise_kinds()) {
    const ProblemConstants consts = mc_constants(proto.variance());
    std::vector<double> stats(static_cast<std::size_t>(seeds));
    for (int i = 0; i < seeds; ++i) {
      stats[static_cast<std::size_t>(i)] =
          paired_regret_sample(consts, signal, proto, 1000 + static_cast<std::uint64_t>(i),
                               comparator)
              .surrogate_minus_true;
    }
    const MonteCarloSummary s = summarize_samples(stats);
    checks.push_back(make_check(std::string("unbiasedness_abs_z_") + noise_name(proto.kind),
                                std::fabs(s.z()), 3.0, "<=",
                                "mean=" + format_real(s.mean) + " se=" + format_real(s.se)));
  }
  return checks;
}

/// Paired inequality: mean block-loss regret >= mean true regret,
/// tested as mean(block - true) >= -3 standard errors on paired draws.
inline std::vector<CheckResult> suite_lemma1(int seeds = 50, std::int64_t horizon = 512) {
  SignalSpec sig;
  sig.kind = SignalKind::kSinusoid;
  sig.amplitude = 1.0;
  sig.period = 16.0;
  const std::vector<double> signal = generate_signal(sig, horizon);
  const Vec comparator = mc_comparator();
  NoiseSpec proto;
  proto.kind = NoiseKind::kUniform;
  proto.bound = 0.5;
  const ProblemConstants consts = mc_constants(proto.variance());
  std::vector<double> stats(static_cast<std::size_t>(seeds));
  for (int i = 0; i < seeds; ++i) {
    stats[static_cast<std::size_t>(i)] =
        paired_regret_sample(consts, signal, proto, 500 + static_cast<std::uint64_t>(i), comparator)
            .block_minus_true;
  }
  const MonteCarloSummary s = summarize_samples(stats);
  return {make_check("lemma1_z", s.z(), -3.0, ">=",
                     "mean=" + format_real(s.mean) + " se=" + format_real(s.se))};
}

/// Worst interval margin of the expert-tracking bound: for every block
/// interval [r, s], sum of (pool loss - expert_r loss) minus (4/alpha) ln T.
inline double claim2_worst_margin(const ProblemConstants& consts,
                                  std::span<const double> observations) {
  const AdaptiveRunResult run = adaptive_run(consts, observations, true);
  const std::size_t blocks = run.pool_block_losses.size();
  const double bound =
      4.0 / consts.expert_rate * std::log(static_cast<double>(observations.size()));
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < blocks; ++r) {
    double running = 0.0;
    for (std::size_t s = r; s < blocks; ++s) {
      running += run.pool_block_losses[s] - run.expert_block_losses[s][r];
      worst = std::max(worst, running - bound);
    }
  }
  return worst;
}

inline std::vector<CheckResult> suite_claim2(std::int64_t horizon = 4096, double slack = 1e-6) {
  ProblemConstants consts = mc_constants(0.5 * 0.5 / 3.0);
  consts.expert_rate = consts.default_expert_rate();
  NoiseSpec noise;
  noise.kind = NoiseKind::kUniform;
  noise.bound = 0.5;

  std::vector<CheckResult> checks;
  SignalSpec stationary;
  stationary.kind = SignalKind::kSinusoid;
  stationary.amplitude = 1.0;
  stationary.period = 16.0;
  SignalSpec switching;
  switching.kind = SignalKind::kPiecewiseSinusoid;
  switching.amplitude = 1.0;
  switching.period = 16.0;
  const std::vector<std::pair<const char*, SignalSpec>> cases = {
      {"stationary", stationary}, {"switching", switching}};
  for (const auto& [label, spec] : cases) {
    const std::vector<double> signal = generate_signal(spec, horizon);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      NoiseSpec n = noise;
      n.seed = seed;
      const std::vector<double> draws = generate_noise(n, horizon);
      std::vector<double> y(signal.size());
      for (std::size_t t = 0; t < y.size(); ++t) y[t] = signal[t] + draws[t];
      const double margin = claim2_worst_margin(consts, y);
      checks.push_back(make_check(std::string("claim2_margin_") + label + "_seed" +
                                      std::to_string(seed),
                                  margin, slack, "<=",
                                  "alpha=" + format_real(consts.expert_rate)));
    }
  }
  return checks;
}

inline std::vector<CheckResult> suite_covariance(std::int64_t samples = 100000) {
  SignalSpec sig;
  sig.kind = SignalKind::kSinusoid;
  sig.amplitude = 1.0;
  sig.period = 16.0;
  const std::vector<double> signal = generate_signal(sig, 32);
  const std::vector<Vec> windows = build_windows(signal, 4);
  const Vec clean = windows[16];

  std::vector<CheckResult> checks;
  for (NoiseSpec proto : mc_noise_kinds()) {
    proto.seed = 7;
    const CovarianceReport report = covariance_check(clean, proto, samples);
    checks.push_back(make_check(std::string("covariance_max_z_") + noise_name(proto.kind),
                                report.max_z(), 4.0, "<=",
                                "max|dev|=" + format_real(report.max_abs_deviation)));
  }
  // Zero clean window: E[YY'] must equal sigma2 I exactly in expectation.
  NoiseSpec rad;
  rad.kind = NoiseKind::kRademacher;
  rad.bound = 1.0;
  rad.seed = 8;
  const CovarianceReport zero = covariance_check(Vec::Zero(4), rad, samples);
  checks.push_back(make_check("covariance_max_z_zero_signal_rademacher", zero.max_z(), 4.0, "<=",
                              "max|dev|=" + format_real(zero.max_abs_deviation)));
  return checks;
}

// ---------------------------------------------------------------------------
// Linear-time evidence: flop tallies per step for the matrix-free filter
// against the dense-matrix reference over a dimension sweep.

struct OpsSweepPoint {
  int order = 0;
  double matrix_free_per_step = 0.0;
  double dense_per_step = 0.0;
  double matrix_free_ns = 0.0;
  double dense_ns = 0.0;
};

inline std::vector<OpsSweepPoint> linear_time_sweep(const std::vector<int>& orders,
                                                    int blocks_per_run = 200) {
  std::vector<OpsSweepPoint> points;
  for (int d : orders) {
    ProblemConstants c;
    c.order = d;
    c.block_len = 2 * d;
    c.sigma2 = 1.0 / 12.0;
    c.signal_bound = 1.0;
    c.noise_bound = 0.5;
    c.radius = 2.0;
    c.step_scale = ProblemConstants::default_step_scale(d, c.sigma2);
    c.expert_rate = 1.0;

    const std::int64_t horizon = static_cast<std::int64_t>(blocks_per_run) * c.block_len;
    SignalSpec sig;
    sig.kind = SignalKind::kSinusoid;
    sig.amplitude = 1.0;
    sig.period = 16.0;
    NoiseSpec noise;
    noise.kind = NoiseKind::kUniform;
    noise.bound = 0.5;
    noise.seed = 11;
    const std::vector<double> x = generate_signal(sig, horizon);
    const std::vector<double> n = generate_noise(noise, horizon);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = x[t] + n[t];

    OpsSweepPoint p;
    p.order = d;

    opcount::reset();
    auto t0 = std::chrono::steady_clock::now();
    (void)gd_run(c, y);
    auto t1 = std::chrono::steady_clock::now();
    p.matrix_free_per_step =
        static_cast<double>(opcount::value()) / static_cast<double>(horizon);
    p.matrix_free_ns = std::chrono::duration<double, std::nano>(t1 - t0).count() /
                       static_cast<double>(horizon);

    opcount::reset();
    t0 = std::chrono::steady_clock::now();
    {
      dense::GdCore core(c);
      WindowBuilder wb(d);
      BlockSamples pending;
      for (double obs : y) {
        const Vec& win = wb.push(obs);
        (void)core.filter().dot(win);
        opcount::add(2 * static_cast<std::uint64_t>(d));
        pending.targets.push_back(obs);
        pending.windows.push_back(win);
        if (pending.size() == c.block_len) {
          core.advance(pending);
          pending.clear();
        }
      }
    }
    t1 = std::chrono::steady_clock::now();
    p.dense_per_step = static_cast<double>(opcount::value()) / static_cast<double>(horizon);
    p.dense_ns =
        std::chrono::duration<double, std::nano>(t1 - t0).count() / static_cast<double>(horizon);
    opcount::reset();
    points.push_back(p);
  }
  return points;
}

inline std::vector<CheckResult> suite_linear_time() {
  const std::vector<int> orders = {4, 8, 16, 32, 64};
  const std::vector<OpsSweepPoint> points = linear_time_sweep(orders);
  std::vector<double> d_axis, mf, dense_ops;
  std::string table;
  for (const OpsSweepPoint& p : points) {
    d_axis.push_back(static_cast<double>(p.order));
    mf.push_back(p.matrix_free_per_step);
    dense_ops.push_back(p.dense_per_step);
    table += "d=" + std::to_string(p.order) + ":" + format_real(p.matrix_free_per_step) + "/" +
             format_real(p.dense_per_step) + " ";
  }
  const LinearFit fit = least_squares_fit(d_axis, mf);
  double max_rel_residual = 0.0;
  for (std::size_t i = 0; i < d_axis.size(); ++i) {
    const double model = fit.intercept + fit.slope * d_axis[i];
    max_rel_residual = std::max(max_rel_residual, std::fabs(mf[i] - model) / model);
  }
  const double dense_ratio = dense_ops.back() / dense_ops[dense_ops.size() - 2];
  std::vector<CheckResult> checks;
  checks.push_back(make_check("matrix_free_linear_fit_r2", fit.r2, 0.95, ">=",
                              "ops/step (matrix-free/dense): " + table));
  checks.push_back(
      make_check("matrix_free_max_relative_residual", max_rel_residual, 0.20, "<="));
  checks.push_back(make_check("dense_reference_top_doubling_ratio", dense_ratio, 3.0, ">=",
                              "ops/step growth when d doubles 32 -> 64 (linear: 2, quadratic: 4)"));
  return checks;
}

// ---------------------------------------------------------------------------
// Experiment-scale acceptance checks (not part of the named verify suites).

/// Exhaustive reference for the ball-constrained comparator at order 2:
/// the best loss over a square lattice of the given resolution intersected
/// with the ball, plus a boundary ring at matching arc length.
inline double grid_search_ball_loss(const IntervalSummary& sum, double radius,
                                    double resolution) {
  const double g00 = sum.gram(0, 0), g01 = sum.gram(0, 1), g11 = sum.gram(1, 1);
  const double c0 = sum.cross(0), c1 = sum.cross(1);
  const auto loss = [&](double w0, double w1) {
    return sum.sq - 2.0 * (w0 * c0 + w1 * c1) + g00 * w0 * w0 + 2.0 * g01 * w0 * w1 +
           g11 * w1 * w1;
  };
  double best = std::numeric_limits<double>::infinity();
  const std::int64_t n = static_cast<std::int64_t>(radius / resolution);
  const double r2 = radius * radius;
  for (std::int64_t i = -n; i <= n; ++i) {
    const double w0 = static_cast<double>(i) * resolution;
    for (std::int64_t j = -n; j <= n; ++j) {
      const double w1 = static_cast<double>(j) * resolution;
      if (w0 * w0 + w1 * w1 <= r2) best = std::min(best, loss(w0, w1));
    }
  }
  const std::int64_t arcs =
      static_cast<std::int64_t>(std::ceil(2.0 * kPi * radius / resolution));
  for (std::int64_t a = 0; a < arcs; ++a) {
    const double theta = 2.0 * kPi * static_cast<double>(a) / static_cast<double>(arcs);
    best = std::min(best, loss(radius * std::cos(theta), radius * std::sin(theta)));
  }
  return best;
}

inline std::vector<CheckResult> acceptance_oracle_grid(int instances = 50) {
  Rng rng = Rng::stream(12, kMonteCarloStream);
  double worst_gap = 0.0;
  double worst_optimality = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    const std::int64_t t_len = 5 + static_cast<std::int64_t>(rng.unit() * 46);
    const double x_amp = (i % 2 == 0) ? 1.0 : 3.0;  // odd instances push w* outside the ball
    const double radius = (i % 2 == 0) ? 1.0 : 0.6;
    std::vector<double> y(static_cast<std::size_t>(t_len));
    std::vector<double> x(static_cast<std::size_t>(t_len));
    for (auto& v : y) v = rng.uniform(-1.5, 1.5);
    for (auto& v : x) v = rng.uniform(-x_amp, x_amp);
    const std::vector<Vec> windows = build_windows(y, 2);
    const PrefixSummaries prefixes(x, windows);
    const IntervalSummary sum = prefixes.between(1, t_len);
    const BallRegression solved = best_fixed_filter(sum, radius);
    const double grid = grid_search_ball_loss(sum, radius, 2e-3);
    worst_gap = std::max(worst_gap, std::fabs(solved.loss - grid));
    worst_optimality = std::max(worst_optimality, solved.loss - grid);  // solver must not lose
  }
  std::vector<CheckResult> checks;
  checks.push_back(make_check("oracle_vs_grid_max_loss_gap", worst_gap, 1e-3, "<=",
                              std::to_string(instances) + " random order-2 instances"));
  checks.push_back(make_check("oracle_never_above_grid", worst_optimality, 1e-9, "<="));
  return checks;
}

inline ExperimentConfig log_regret_config() {
  ExperimentConfig cfg;
  ProblemConstants& c = cfg.consts;
  c.order = 4;
  c.block_len = 8;
  c.sigma2 = 0.75;  // uniform noise on [-1.5, 1.5]
  c.signal_bound = 1.0;
  c.noise_bound = 1.5;
  c.radius = 0.8;  // well above |w*|, small enough to tame the cold start
  c.step_scale = ProblemConstants::default_step_scale(c.order, c.sigma2);
  c.expert_rate = c.default_expert_rate();
  cfg.algorithm = "gd";
  cfg.signal.kind = SignalKind::kSinusoid;
  cfg.signal.amplitude = 1.0;
  cfg.signal.period = 16.0;
  cfg.noise.kind = NoiseKind::kUniform;
  cfg.noise.bound = 1.5;
  for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
  for (std::int64_t t = 1024; t <= 65536; t *= 2) cfg.horizons.push_back(t);
  cfg.horizon = cfg.horizons.back();
  cfg.scan_stride = c.block_len;
  return cfg;
}

inline std::vector<CheckResult> acceptance_log_regret_scaling() {
  const ExperimentConfig cfg = log_regret_config();
  const CurveResult curve = regret_curve(cfg, false);
  std::string table;
  for (const CurvePoint& p : curve.points) {
    table += "T=" + std::to_string(p.horizon) + ":" + format_real(p.mean_regret) + " ";
  }
  // per-step loss scale of the instance, for the linear-slope comparison
  ExperimentConfig probe = cfg;
  probe.horizon = 4096;
  const SeedRun probe_run = run_seed(probe, generate_signal(probe.signal, probe.horizon), 1);
  const double loss_scale =
      probe_run.summary.cumulative_true_loss / static_cast<double>(probe.horizon);
  const double at_8k = curve.points[3].mean_regret;   // 2^13
  const double at_64k = curve.points[6].mean_regret;  // 2^16
  table += "| linear-fit r2 " + format_real(curve.linear_fit.r2);
  std::vector<CheckResult> checks;
  checks.push_back(make_check("regret_vs_lnT_fit_r2", curve.log_fit.r2, 0.9, ">=", table));
  checks.push_back(make_check("regret_2to16_minus_twice_2to13", at_64k - 2.0 * at_8k, 0.0, "<=",
                              "2^16: " + format_real(at_64k) + ", 2^13: " + format_real(at_8k)));
  // concavity in T: the per-step slope between successive horizons shrinks
  double worst_slope_ratio = 0.0;
  for (std::size_t i = 2; i < curve.points.size(); ++i) {
    const auto slope = [&](std::size_t j) {
      return (curve.points[j].mean_regret - curve.points[j - 1].mean_regret) /
             static_cast<double>(curve.points[j].horizon - curve.points[j - 1].horizon);
    };
    worst_slope_ratio = std::max(worst_slope_ratio, slope(i) / slope(i - 1));
  }
  checks.push_back(make_check("regret_concavity_slope_ratio", worst_slope_ratio, 1.1, "<=",
                              "successive per-step regret slopes must shrink"));
  checks.push_back(make_check("regret_vs_T_slope_over_loss_scale",
                              curve.linear_fit.slope / loss_scale, 0.01, "<=",
                              "a linear trend would need visible per-step slope"));
  return checks;
}

/// Ensemble rate used by the switching benchmark. The analysis-default rate
/// is calibrated to the worst-case gradient bound and leaves the weights
/// effectively frozen at desk scale, so the benchmark pins an explicit rate
/// for the instance it runs (the config knob exists for exactly this).
inline constexpr double kSwitchBenchRate = 0.3;

inline ExperimentConfig switch_config() {
  ExperimentConfig cfg;
  ProblemConstants& c = cfg.consts;
  c.order = 4;
  c.block_len = 8;
  c.sigma2 = 0.75;  // uniform noise on [-1.5, 1.5]
  c.signal_bound = 1.0;
  c.noise_bound = 1.5;
  c.radius = 0.8;
  c.step_scale = ProblemConstants::default_step_scale(c.order, c.sigma2);
  c.expert_rate = kSwitchBenchRate;
  cfg.algorithm = "adaptive";
  cfg.horizon = 16384;
  // The switch changes the frequency. A phase change alone would be
  // invisible: linear filters are equivariant to a coherent sign flip of
  // signal and windows, and a stationary sinusoid's best filter depends on
  // its frequency only.
  cfg.signal.kind = SignalKind::kPiecewiseSinusoid;
  cfg.signal.amplitude = 1.0;
  cfg.signal.period = 32.0;
  cfg.signal.period2 = 4.0;
  cfg.signal.phase = 0.0;
  cfg.signal.phase2 = 0.0;
  cfg.noise.kind = NoiseKind::kUniform;
  cfg.noise.bound = 1.5;
  for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
  cfg.scan_stride = 128;
  return cfg;
}

inline std::vector<CheckResult> acceptance_switch_adaptivity() {
  const ExperimentConfig cfg = switch_config();
  const std::int64_t t_len = cfg.horizon;
  const std::int64_t switch_at = t_len / 2;
  const std::vector<double> signal = generate_signal(cfg.signal, t_len);

  double gd_total = 0.0, adaptive_total = 0.0;
  double gd_scan_total = 0.0, adaptive_scan_total = 0.0;
  int brackets = 0;
  for (std::uint64_t seed : cfg.seeds) {
    NoiseSpec noise = cfg.noise;
    noise.seed = seed;
    const std::vector<double> n = generate_noise(noise, t_len);
    std::vector<double> y(signal.size());
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = signal[t] + n[t];

    const GdRunResult gd = gd_run(cfg.consts, y);
    const AdaptiveRunResult ada = adaptive_run(cfg.consts, y);
    const std::vector<double> gd_losses = true_losses(signal, gd.predictions);
    const std::vector<double> ada_losses = true_losses(signal, ada.predictions);
    const std::vector<Vec> windows = build_windows(y, cfg.consts.order);
    const PrefixSummaries prefixes(signal, windows);

    gd_total += interval_regret(gd_losses, prefixes, switch_at + 1, t_len, cfg.consts.radius);
    adaptive_total +=
        interval_regret(ada_losses, prefixes, switch_at + 1, t_len, cfg.consts.radius);

    const ScanResult scan =
        adaptive_regret_scan(gd_losses, prefixes, cfg.consts.radius, cfg.scan_stride);
    if (scan.r <= switch_at + cfg.scan_stride && scan.s >= switch_at) ++brackets;
    gd_scan_total += scan.value;
    adaptive_scan_total +=
        adaptive_regret_scan(ada_losses, prefixes, cfg.consts.radius, cfg.scan_stride).value;
  }
  const double n_seeds = static_cast<double>(cfg.seeds.size());
  const double mean_gd = gd_total / n_seeds;
  const double mean_adaptive = adaptive_total / n_seeds;
  std::vector<CheckResult> checks;
  checks.push_back(make_check("adaptive_to_gd_interval_regret_ratio", mean_adaptive / mean_gd,
                              0.5, "<=",
                              "adaptive: " + format_real(mean_adaptive) +
                                  ", gd: " + format_real(mean_gd)));
  checks.push_back(make_check("gd_worst_interval_brackets_switch", static_cast<double>(brackets),
                              15.0, ">=", "out of 20 seeds, stride 128"));
  checks.push_back(make_check("adaptive_minus_gd_mean_scan_value",
                              (adaptive_scan_total - gd_scan_total) / n_seeds, 0.0, "<=",
                              "worst-interval regret, ensemble vs descent"));
  return checks;
}

// ---------------------------------------------------------------------------
// Suite registry.

inline std::vector<std::string> suite_names() {
  return {"unbiasedness", "convexity", "lemma1", "claim2", "covariance", "gradcheck",
          "linear-time"};
}

inline std::vector<CheckResult> run_suite(const std::string& name) {
  if (name == "gradcheck") return suite_gradcheck();
  if (name == "convexity") return suite_convexity();
  if (name == "unbiasedness") return suite_unbiasedness();
  if (name == "lemma1") return suite_lemma1();
  if (name == "claim2") return suite_claim2();
  if (name == "covariance") return suite_covariance();
  if (name == "linear-time") return suite_linear_time();
  throw std::invalid_argument("unknown verify suite: " + name);
}

}  // namespace unifilt::bench

#endif  // UNIFILT_BENCH_VERIFY_HPP
