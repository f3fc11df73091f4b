#ifndef UNIFILT_BENCH_EXPERIMENT_HPP
#define UNIFILT_BENCH_EXPERIMENT_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "unifilt/adaptive_filter.hpp"
#include "unifilt/bench/config.hpp"
#include "unifilt/bench/csv.hpp"
#include "unifilt/core.hpp"
#include "unifilt/gd_filter.hpp"
#include "unifilt/oracle.hpp"
#include "unifilt/signals.hpp"

namespace unifilt::bench {

struct RunOutput {
  std::vector<double> predictions;
  std::vector<Vec> block_filters;  // one per (possibly partial) block
};

/// Fixed-filter control algorithms: `zero` plays the zero filter, `identity`
/// plays e1 (prediction = y_t, expected true loss sigma2 per step).
inline Vec baseline_filter(const std::string& name, int order) {
  Vec w = Vec::Zero(order);
  if (name == "identity") {
    w(0) = 1.0;
  } else if (name != "zero") {
    throw std::invalid_argument("baseline_filter: unknown baseline " + name);
  }
  return w;
}

inline RunOutput run_fixed_filter(const Vec& w, std::span<const double> observations,
                                  const ProblemConstants& consts) {
  RunOutput out;
  WindowBuilder window(consts.order);
  out.predictions.reserve(observations.size());
  for (std::size_t t = 0; t < observations.size(); ++t) {
    if (t % static_cast<std::size_t>(consts.block_len) == 0) out.block_filters.push_back(w);
    out.predictions.push_back(w.dot(window.push(observations[t])));
  }
  return out;
}

inline RunOutput run_algorithm(const ExperimentConfig& cfg,
                               std::span<const double> observations) {
  if (cfg.algorithm == "gd") {
    GdRunResult r = gd_run(cfg.consts, observations);
    if (r.bound_violations > 0) {
      std::fprintf(stderr, "warning: %lld observations exceeded B_X + B_N\n",
                   static_cast<long long>(r.bound_violations));
    }
    return {std::move(r.predictions), std::move(r.block_filters)};
  }
  if (cfg.algorithm == "adaptive") {
    AdaptiveRunResult r = adaptive_run(cfg.consts, observations);
    return {std::move(r.predictions), std::move(r.block_filters)};
  }
  return run_fixed_filter(baseline_filter(cfg.algorithm, cfg.consts.order), observations,
                          cfg.consts);
}

inline std::vector<double> true_losses(std::span<const double> signal,
                                       std::span<const double> predictions) {
  std::vector<double> losses(signal.size());
  for (std::size_t t = 0; t < signal.size(); ++t) {
    const double e = signal[t] - predictions[t];
    losses[t] = e * e;
  }
  return losses;
}

struct SeedSummary {
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  double cumulative_true_loss = 0.0;
  double oracle_loss_full = 0.0;
  double regret_full = 0.0;
  double adaptive_regret = 0.0;
  std::int64_t worst_r = 1;
  std::int64_t worst_s = 1;
};

/// One seed of the configured experiment, with the per-step trace available
/// for writing. The filter active on step t is block_filters[(t-1)/k].
struct SeedRun {
  std::vector<double> signal;
  std::vector<double> observations;
  RunOutput output;
  std::vector<double> losses;
  SeedSummary summary;
};

inline SeedRun run_seed(const ExperimentConfig& cfg, const std::vector<double>& signal,
                        std::uint64_t seed) {
  SeedRun run;
  run.signal = signal;
  NoiseSpec noise = cfg.noise;
  noise.seed = seed;
  const std::vector<double> n = generate_noise(noise, cfg.horizon);
  run.observations.resize(signal.size());
  for (std::size_t t = 0; t < signal.size(); ++t) run.observations[t] = signal[t] + n[t];

  run.output = run_algorithm(cfg, run.observations);
  run.losses = true_losses(run.signal, run.output.predictions);

  const std::vector<Vec> windows = build_windows(run.observations, cfg.consts.order);
  const PrefixSummaries prefixes(run.signal, windows);
  SeedSummary& s = run.summary;
  s.seed = seed;
  s.horizon = cfg.horizon;
  for (double l : run.losses) s.cumulative_true_loss += l;
  s.oracle_loss_full =
      best_fixed_filter(prefixes.between(1, cfg.horizon), cfg.consts.radius).loss;
  s.regret_full = s.cumulative_true_loss - s.oracle_loss_full;
  const ScanResult scan =
      adaptive_regret_scan(run.losses, prefixes, cfg.consts.radius, cfg.scan_stride);
  s.adaptive_regret = scan.value;
  s.worst_r = scan.r;
  s.worst_s = scan.s;
  return run;
}

inline void write_trace(const ExperimentConfig& cfg, const SeedRun& run,
                        const std::string& path) {
  CsvWriter csv(path);
  csv.row({"t", "x", "y", "prediction", "true_loss", "surrogate_loss"});
  const int k = cfg.consts.block_len;
  for (std::size_t t = 0; t < run.signal.size(); ++t) {
    const std::size_t block = std::min(t / static_cast<std::size_t>(k),
                                       run.output.block_filters.size() - 1);
    const double w0 = run.output.block_filters[block](0);
    const double ey = run.observations[t] - run.output.predictions[t];
    const double surrogate = ey * ey + 2.0 * cfg.consts.sigma2 * w0;
    csv.row({std::to_string(t + 1), format_real(run.signal[t]), format_real(run.observations[t]),
             format_real(run.output.predictions[t]), format_real(run.losses[t]),
             format_real(surrogate)});
  }
}

/// Runs every configured seed, writing out/trace_seed<SEED>.csv and
/// out/summary.csv. The signal is generated once (it is oblivious to the
/// noise); only the noise stream varies with the seed.
inline std::vector<SeedSummary> run_experiment(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::vector<double> signal = generate_signal(cfg.signal, cfg.horizon);
  std::vector<SeedSummary> summaries;
  for (std::uint64_t seed : cfg.seeds) {
    SeedRun run = run_seed(cfg, signal, seed);
    write_trace(cfg, run, cfg.out_dir + "/trace_seed" + std::to_string(seed) + ".csv");
    summaries.push_back(run.summary);
  }
  CsvWriter csv(cfg.out_dir + "/summary.csv");
  csv.row({"seed", "T", "cumulative_true_loss", "oracle_loss_full", "regret_full",
           "adaptive_regret", "worst_interval_r", "worst_interval_s"});
  for (const SeedSummary& s : summaries) {
    csv.row({std::to_string(s.seed), std::to_string(s.horizon),
             format_real(s.cumulative_true_loss), format_real(s.oracle_loss_full),
             format_real(s.regret_full), format_real(s.adaptive_regret),
             std::to_string(s.worst_r), std::to_string(s.worst_s)});
  }
  return summaries;
}

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 1.0;
};

inline LinearFit least_squares_fit(std::span<const double> u, std::span<const double> v) {
  const std::size_t n = u.size();
  if (n < 2 || v.size() != n) throw std::invalid_argument("least_squares_fit: need >= 2 points");
  double su = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    su += u[i];
    sv += v[i];
  }
  const double mu = su / static_cast<double>(n);
  const double mv = sv / static_cast<double>(n);
  double suu = 0.0, suv = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  LinearFit fit;
  fit.slope = suu > 0.0 ? suv / suu : 0.0;
  fit.intercept = mv - fit.slope * mu;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = v[i] - (fit.intercept + fit.slope * u[i]);
    ss_res += r * r;
  }
  fit.r2 = svv > 0.0 ? 1.0 - ss_res / svv : 1.0;
  return fit;
}

struct CurvePoint {
  std::int64_t horizon = 0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
};

struct CurveResult {
  std::vector<CurvePoint> points;
  std::vector<std::vector<double>> per_seed_regret;  // [horizon][seed]
  LinearFit log_fit;     // mean regret against ln T
  LinearFit linear_fit;  // mean regret against T
};

/// Regret at several horizons from a single online run per seed (the
/// algorithms are online, so the length-T prefix of a longer run equals a
/// fresh length-T run). The signal is resolved once at the largest horizon;
/// an automatic piecewise switch therefore lands at max(horizons)/2.
inline CurveResult regret_curve(const ExperimentConfig& cfg, bool write_files = true) {
  const auto& horizons = cfg.horizons;
  if (horizons.size() < 3) throw ConfigError("regret_curve: need at least 3 horizons");
  for (std::size_t i = 1; i < horizons.size(); ++i) {
    if (horizons[i] <= horizons[i - 1]) throw ConfigError("regret_curve: horizons must increase");
  }
  const std::int64_t t_max = horizons.back();
  ExperimentConfig full = cfg;
  full.horizon = t_max;
  const std::vector<double> signal = generate_signal(full.signal, t_max);

  CurveResult result;
  result.per_seed_regret.assign(horizons.size(), {});
  for (std::uint64_t seed : cfg.seeds) {
    NoiseSpec noise = cfg.noise;
    noise.seed = seed;
    const std::vector<double> n = generate_noise(noise, t_max);
    std::vector<double> y(signal.size());
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = signal[t] + n[t];
    const RunOutput output = run_algorithm(full, y);
    const std::vector<double> losses = true_losses(signal, output.predictions);
    std::vector<double> loss_prefix(losses.size() + 1, 0.0);
    for (std::size_t t = 0; t < losses.size(); ++t) loss_prefix[t + 1] = loss_prefix[t] + losses[t];
    const std::vector<Vec> windows = build_windows(y, cfg.consts.order);
    const PrefixSummaries prefixes(signal, windows);
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      const std::int64_t t = horizons[i];
      const double oracle = best_fixed_filter(prefixes.between(1, t), cfg.consts.radius).loss;
      result.per_seed_regret[i].push_back(loss_prefix[static_cast<std::size_t>(t)] - oracle);
    }
  }

  std::vector<double> ln_t, t_axis, means;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const auto& r = result.per_seed_regret[i];
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= static_cast<double>(r.size());
    double var = 0.0;
    for (double v : r) var += (v - mean) * (v - mean);
    const double se =
        r.size() > 1 ? std::sqrt(var / (static_cast<double>(r.size()) - 1.0) /
                                 static_cast<double>(r.size()))
                     : 0.0;
    result.points.push_back({horizons[i], mean, se});
    ln_t.push_back(std::log(static_cast<double>(horizons[i])));
    t_axis.push_back(static_cast<double>(horizons[i]));
    means.push_back(mean);
  }
  result.log_fit = least_squares_fit(ln_t, means);
  result.linear_fit = least_squares_fit(t_axis, means);

  if (write_files) {
    std::filesystem::create_directories(cfg.out_dir);
    CsvWriter curve(cfg.out_dir + "/curve.csv");
    curve.row({"T", "mean_regret", "stderr_regret", "seeds"});
    for (const CurvePoint& p : result.points) {
      curve.row({std::to_string(p.horizon), format_real(p.mean_regret),
                 format_real(p.stderr_regret), std::to_string(cfg.seeds.size())});
    }
    CsvWriter fit(cfg.out_dir + "/curve_fit.csv");
    fit.row({"model", "intercept", "slope", "r2"});
    fit.row({"log", format_real(result.log_fit.intercept), format_real(result.log_fit.slope),
             format_real(result.log_fit.r2)});
    fit.row({"linear", format_real(result.linear_fit.intercept),
             format_real(result.linear_fit.slope), format_real(result.linear_fit.r2)});
  }
  return result;
}

}  // namespace unifilt::bench

#endif  // UNIFILT_BENCH_EXPERIMENT_HPP
