#ifndef UNIFILT_SIGNALS_HPP
#define UNIFILT_SIGNALS_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "unifilt/core.hpp"
#include "unifilt/rng.hpp"

namespace unifilt {

// Fixed stream ids; see Rng for the splitting scheme.
inline constexpr std::uint64_t kNoiseStream = 1;
inline constexpr std::uint64_t kSignalStream = 2;
inline constexpr std::uint64_t kMonteCarloStream = 3;

inline constexpr double kPi = 3.14159265358979323846;

enum class SignalKind { kConstant, kSinusoid, kPiecewiseSinusoid, kAr1, kSquareWave, kReplay };

/// Deterministic clean-signal generator. Every kind respects |x_t| <= bound.
/// The signal is fixed before any noise is drawn (oblivious adversary); the
/// only pseudo-randomness is the AR(1) innovation stream, which is part of
/// the spec itself via `ar_seed`.
struct SignalSpec {
  SignalKind kind = SignalKind::kSinusoid;
  double bound = 1.0;       // B_X
  double amplitude = 1.0;
  double period = 16.0;     // steps per cycle
  double phase = 0.0;
  double period2 = 0.0;     // piecewise: second-segment period (0 = period)
  double phase2 = kPi;      // piecewise: second-segment phase
  std::int64_t switch_index = 0;  // piecewise: last step of segment one (0 = T/2)
  double ar_coeff = 0.9;
  std::uint64_t ar_seed = 1;
  std::vector<double> replay;

  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("SignalSpec: " + what); };
    if (!(bound > 0.0)) fail("bound must be > 0");
    if (kind == SignalKind::kReplay) {
      if (replay.empty()) fail("replay signal has no samples");
      for (double v : replay) {
        if (std::fabs(v) > bound) fail("replay sample exceeds bound");
      }
      return;
    }
    if (std::fabs(amplitude) > bound) fail("amplitude exceeds bound");
    if (kind == SignalKind::kAr1 && !(std::fabs(ar_coeff) < 1.0)) fail("|ar_coeff| must be < 1");
    const bool periodic = kind == SignalKind::kSinusoid || kind == SignalKind::kPiecewiseSinusoid ||
                          kind == SignalKind::kSquareWave;
    if (periodic && !(period > 0.0)) fail("period must be > 0");
    if (kind == SignalKind::kPiecewiseSinusoid && period2 < 0.0) fail("period2 must be >= 0");
  }
};

inline std::vector<double> generate_signal(const SignalSpec& spec, std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("generate_signal: horizon must be >= 1");
  spec.validate();
  std::vector<double> x(static_cast<std::size_t>(horizon));
  switch (spec.kind) {
    case SignalKind::kConstant:
      for (auto& v : x) v = spec.amplitude;
      break;
    case SignalKind::kSinusoid:
      for (std::int64_t t = 1; t <= horizon; ++t) {
        x[t - 1] = spec.amplitude * std::sin(2.0 * kPi * t / spec.period + spec.phase);
      }
      break;
    case SignalKind::kPiecewiseSinusoid: {
      const std::int64_t sw = spec.switch_index > 0 ? spec.switch_index : horizon / 2;
      const double p2 = spec.period2 > 0.0 ? spec.period2 : spec.period;
      for (std::int64_t t = 1; t <= horizon; ++t) {
        x[t - 1] = (t <= sw)
                       ? spec.amplitude * std::sin(2.0 * kPi * t / spec.period + spec.phase)
                       : spec.amplitude * std::sin(2.0 * kPi * t / p2 + spec.phase2);
      }
      break;
    }
    case SignalKind::kAr1: {
      // Innovations capped at (1-|rho|)*amplitude keep |x_t| <= amplitude.
      Rng rng = Rng::stream(spec.ar_seed, kSignalStream);
      const double cap = (1.0 - std::fabs(spec.ar_coeff)) * spec.amplitude;
      double prev = 0.0;
      for (auto& v : x) {
        prev = spec.ar_coeff * prev + rng.uniform(-cap, cap);
        v = prev;
      }
      break;
    }
    case SignalKind::kSquareWave:
      for (std::int64_t t = 1; t <= horizon; ++t) {
        const double pos = std::fmod(static_cast<double>(t - 1), spec.period);
        x[t - 1] = (pos < spec.period / 2.0) ? spec.amplitude : -spec.amplitude;
      }
      break;
    case SignalKind::kReplay:
      if (horizon > static_cast<std::int64_t>(spec.replay.size())) {
        throw std::invalid_argument("generate_signal: replay file shorter than horizon");
      }
      for (std::int64_t t = 0; t < horizon; ++t) x[t] = spec.replay[static_cast<std::size_t>(t)];
      break;
  }
  return x;
}

/// Loads a replay signal: plain text, one decimal real per line, no header.
/// Rejects unparsable lines and samples above the bound, reporting the
/// 1-based line number.
inline SignalSpec replay_adversarial(const std::string& path, double bound) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("replay_adversarial: cannot open " + path);
  SignalSpec spec;
  spec.kind = SignalKind::kReplay;
  spec.bound = bound;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) {
      throw std::runtime_error("replay_adversarial: blank line " + std::to_string(lineno));
    }
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(line.substr(start), &consumed);
    } catch (const std::exception&) {
      throw std::runtime_error("replay_adversarial: parse failure at line " + std::to_string(lineno));
    }
    if (start + consumed != line.size()) {
      throw std::runtime_error("replay_adversarial: trailing junk at line " + std::to_string(lineno));
    }
    if (std::fabs(v) > bound) {
      throw std::runtime_error("replay_adversarial: sample exceeds bound at line " +
                               std::to_string(lineno));
    }
    spec.replay.push_back(v);
  }
  if (spec.replay.empty()) throw std::runtime_error("replay_adversarial: empty file");
  return spec;
}

enum class NoiseKind { kUniform, kRademacher, kTruncatedGaussian };

/// Bounded zero-mean i.i.d. noise with analytically known variance.
///   uniform:            U[-bound, bound],   sigma2 = bound^2/3
///   rademacher:         +-bound,            sigma2 = bound^2
///   truncated-gaussian: N(0, scale^2) conditioned on [-bound, bound],
///                       sigma2 = scale^2 (1 - 2 beta phi(beta) / (2 Phi(beta) - 1)),
///                       beta = bound/scale; sampled by inverse CDF so each
///                       draw consumes exactly one uniform.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::kUniform;
  double bound = 0.5;  // B_N
  double scale = 0.0;  // truncated-gaussian pre-truncation std dev (0 = bound/2)
  std::uint64_t seed = 1;

  void validate() const {
    if (!(bound >= 0.0) || !std::isfinite(bound)) {
      throw std::invalid_argument("NoiseSpec: bound must be >= 0");
    }
    if (kind == NoiseKind::kTruncatedGaussian) {
      if (!(bound > 0.0)) throw std::invalid_argument("NoiseSpec: truncated-gaussian needs bound > 0");
      if (scale < 0.0) throw std::invalid_argument("NoiseSpec: scale must be >= 0");
    }
  }

  double effective_scale() const { return scale > 0.0 ? scale : bound / 2.0; }

  /// Exact variance of the sampling distribution.
  double variance() const {
    validate();
    switch (kind) {
      case NoiseKind::kUniform:
        return bound * bound / 3.0;
      case NoiseKind::kRademacher:
        return bound * bound;
      case NoiseKind::kTruncatedGaussian: {
        const double s = effective_scale();
        const double beta = bound / s;
        const double phi = std::exp(-0.5 * beta * beta) / std::sqrt(2.0 * kPi);
        const double mass = 2.0 * detail::normal_cdf(beta) - 1.0;
        return s * s * (1.0 - 2.0 * beta * phi / mass);
      }
    }
    return 0.0;
  }
};

inline std::vector<double> generate_noise(const NoiseSpec& spec, std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("generate_noise: horizon must be >= 1");
  spec.validate();
  std::vector<double> n(static_cast<std::size_t>(horizon));
  Rng rng = Rng::stream(spec.seed, kNoiseStream);
  switch (spec.kind) {
    case NoiseKind::kUniform:
      for (auto& v : n) v = rng.uniform(-spec.bound, spec.bound);
      break;
    case NoiseKind::kRademacher:
      for (auto& v : n) v = spec.bound * rng.sign();
      break;
    case NoiseKind::kTruncatedGaussian: {
      const double s = spec.effective_scale();
      const double beta = spec.bound / s;
      const double lo = detail::normal_cdf(-beta);
      const double hi = detail::normal_cdf(beta);
      for (auto& v : n) {
        v = s * detail::normal_quantile(lo + rng.unit() * (hi - lo));
      }
      break;
    }
  }
  return n;
}

/// Observation windows Y_t(i) = y_{t-i+1}, most recent first; entries before
/// the start of the stream are zero.
inline std::vector<Vec> build_windows(std::span<const double> observations, int order) {
  if (order < 1) throw std::invalid_argument("build_windows: order must be >= 1");
  const std::int64_t n = static_cast<std::int64_t>(observations.size());
  std::vector<Vec> windows(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) {
    Vec w = Vec::Zero(order);
    for (int i = 0; i < order && t - i >= 0; ++i) {
      w(i) = observations[static_cast<std::size_t>(t - i)];
    }
    windows[static_cast<std::size_t>(t)] = std::move(w);
  }
  return windows;
}

}  // namespace unifilt

#endif  // UNIFILT_SIGNALS_HPP
