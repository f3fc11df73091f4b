#ifndef UNIFILT_CORE_HPP
#define UNIFILT_CORE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unifilt/opcount.hpp"

namespace unifilt {

using Vec = Eigen::VectorXd;

/// Problem constants shared by the losses, the descent filter and the
/// ensemble. `order` (d) is the number of observations each filter combines;
/// `block_len` (k) is the number of steps between filter updates.
///
/// Analysis defaults: k = 2d, step_scale = d*sigma2,
/// radius = sqrt(d)*signal_bound^2/sigma2 and
/// expert_rate = d*sigma2/G(2d, radius)^2, where G is gradient_norm_bound.
struct ProblemConstants {
  int order = 1;              // d: window length, >= 1
  int block_len = 2;          // k: block length, >= order
  double sigma2 = 1.0;        // noise variance (0 = noiseless edge case)
  double signal_bound = 1.0;  // B_X: |x_t| cap
  double noise_bound = 1.0;   // B_N: |n_t| cap
  double radius = 1.0;        // R: Euclidean cap on filter norms
  double step_scale = 1.0;    // H: update c uses step size 1/(H*c)
  double expert_rate = 1.0;   // alpha: exponential-weights rate

  double amplitude_bound() const { return signal_bound + noise_bound; }

  /// (sigma2, 0, ..., 0): the surrogate's linear correction direction.
  Vec noise_spike() const {
    Vec c = Vec::Zero(order);
    c(0) = sigma2;
    return c;
  }

  void validate() const {
    auto fail = [](const std::string& what) {
      throw std::invalid_argument("ProblemConstants: " + what);
    };
    if (order < 1) fail("order must be >= 1");
    if (block_len < order) fail("block_len must be >= order");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) fail("sigma2 must be >= 0");
    if (!(signal_bound > 0.0) || !std::isfinite(signal_bound)) fail("signal_bound must be > 0");
    if (!(noise_bound >= 0.0) || !std::isfinite(noise_bound)) fail("noise_bound must be >= 0");
    if (!(radius > 0.0) || !std::isfinite(radius)) fail("radius must be > 0");
    if (!(step_scale > 0.0) || !std::isfinite(step_scale)) fail("step_scale must be > 0");
    if (!(expert_rate > 0.0) || !std::isfinite(expert_rate)) fail("expert_rate must be > 0");
  }

  static int default_block_len(int order) { return 2 * order; }

  static double default_step_scale(int order, double sigma2) { return order * sigma2; }

  static double default_radius(int order, double signal_bound, double sigma2) {
    if (!(sigma2 > 0.0)) {
      throw std::invalid_argument("default_radius: sigma2 must be > 0 (set radius explicitly)");
    }
    return std::sqrt(static_cast<double>(order)) * signal_bound * signal_bound / sigma2;
  }

  /// d*sigma2 / G(2d, radius)^2, evaluated with this struct's bounds.
  double default_expert_rate() const;

  static ProblemConstants analysis_defaults(int order, double sigma2, double signal_bound,
                                           double noise_bound) {
    ProblemConstants c;
    c.order = order;
    c.block_len = default_block_len(order);
    c.sigma2 = sigma2;
    c.signal_bound = signal_bound;
    c.noise_bound = noise_bound;
    c.radius = default_radius(order, signal_bound, sigma2);
    c.step_scale = default_step_scale(order, sigma2);
    c.expert_rate = c.default_expert_rate();
    c.validate();
    return c;
  }
};

namespace detail {

inline void require_same_length(const Vec& w, const Vec& window, const char* where) {
  if (w.size() != window.size()) {
    throw std::invalid_argument(std::string(where) + ": filter/window length mismatch");
  }
}

}  // namespace detail

/// Squared estimation error (x_t - w'Y_t)^2 of the clean sample.
inline double true_loss(double x, const Vec& w, const Vec& window) {
  detail::require_same_length(w, window, "true_loss");
  const double e = x - w.dot(window);
  opcount::add(2 * static_cast<std::uint64_t>(w.size()) + 2);
  return e * e;
}

/// Noisy-data surrogate (y_t - w'Y_t)^2 + 2*sigma2*w(1). Its regret equals
/// the true-loss regret in expectation for past-measurable filters. The
/// window convention is Y_t(1) = y_t; callers that assemble windows from a
/// stream maintain it by construction. May be negative.
inline double surrogate_loss(double y, const Vec& w, const Vec& window, double sigma2) {
  detail::require_same_length(w, window, "surrogate_loss");
  const double e = y - w.dot(window);
  opcount::add(2 * static_cast<std::uint64_t>(w.size()) + 4);
  return e * e + 2.0 * sigma2 * w(0);
}

/// Exact gradient of surrogate_loss in w: -2*(y - w'Y)*Y + 2*(sigma2, 0, ...).
inline Vec surrogate_gradient(double y, const Vec& w, const Vec& window, double sigma2) {
  detail::require_same_length(w, window, "surrogate_gradient");
  const double e = y - w.dot(window);
  Vec g = (-2.0 * e) * window;
  g(0) += 2.0 * sigma2;
  opcount::add(4 * static_cast<std::uint64_t>(w.size()) + 2);
  return g;
}

/// The k consecutive (y_tau, Y_tau) samples of one block, oldest first.
struct BlockSamples {
  std::vector<double> targets;
  std::vector<Vec> windows;

  int size() const { return static_cast<int>(targets.size()); }

  void clear() {
    targets.clear();
    windows.clear();
  }
};

/// A completed block: its index c, its samples, and the filter that was
/// played while the block was observed. The anchor is fixed before the first
/// sample of the block arrives; the block-loss regularizer is centered on it
/// and therefore vanishes at the played point.
struct BlockRecord {
  std::int64_t index = 1;
  BlockSamples samples;
  Vec anchor;
};

namespace detail {

inline void require_block_shape(const BlockSamples& samples, const Vec& anchor, const Vec& w,
                                const ProblemConstants& c, const char* where) {
  if (samples.size() != c.block_len) {
    throw std::invalid_argument(std::string(where) + ": block must hold exactly block_len samples");
  }
  if (anchor.size() != c.order || w.size() != c.order) {
    throw std::invalid_argument(std::string(where) + ": filter length differs from order");
  }
}

}  // namespace detail

/// Block loss: the sum of the k surrogate losses plus the anchor-centered
/// quadratic (w-a)' [ (k-d+1)*sigma2*I - sum_{last k-d+1} YY' ] (w-a),
/// evaluated matrix-free as (k-d+1)*sigma2*|v|^2 - sum (Y'v)^2. Cost O(k*d);
/// no d-by-d matrix is ever formed.
inline double block_loss(const BlockSamples& samples, const Vec& anchor, const Vec& w,
                         const ProblemConstants& c) {
  detail::require_block_shape(samples, anchor, w, c, "block_loss");
  const int k = c.block_len;
  const int d = c.order;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    total += surrogate_loss(samples.targets[i], w, samples.windows[i], c.sigma2);
  }
  const Vec v = w - anchor;
  double quad = (k - d + 1) * c.sigma2 * v.squaredNorm();
  for (int i = d - 1; i < k; ++i) {
    const double p = samples.windows[i].dot(v);
    quad -= p * p;
  }
  opcount::add(static_cast<std::uint64_t>(k - d + 1) * (2 * d + 2) + 3 * d + 2);
  return total + quad;
}

inline double block_loss(const BlockRecord& block, const Vec& w, const ProblemConstants& c) {
  return block_loss(block.samples, block.anchor, w, c);
}

/// Exact gradient of block_loss: sum of surrogate gradients plus
/// 2*(k-d+1)*sigma2*v - 2*sum (Y'v)*Y for v = w - anchor. O(k*d).
inline Vec block_loss_gradient(const BlockSamples& samples, const Vec& anchor, const Vec& w,
                               const ProblemConstants& c) {
  detail::require_block_shape(samples, anchor, w, c, "block_loss_gradient");
  const int k = c.block_len;
  const int d = c.order;
  Vec g = Vec::Zero(d);
  for (int i = 0; i < k; ++i) {
    const double e = samples.targets[i] - w.dot(samples.windows[i]);
    g.noalias() += (-2.0 * e) * samples.windows[i];
  }
  g(0) += 2.0 * c.sigma2 * k;
  const Vec v = w - anchor;
  g.noalias() += (2.0 * (k - d + 1) * c.sigma2) * v;
  for (int i = d - 1; i < k; ++i) {
    g.noalias() += (-2.0 * samples.windows[i].dot(v)) * samples.windows[i];
  }
  opcount::add(static_cast<std::uint64_t>(k) * (4 * d + 2) +
               static_cast<std::uint64_t>(k - d + 1) * (4 * d + 1) + 3 * d + 2);
  return g;
}

inline Vec block_loss_gradient(const BlockRecord& block, const Vec& w, const ProblemConstants& c) {
  return block_loss_gradient(block.samples, block.anchor, w, c);
}

/// G(k, R): a closed-form upper bound on sup |grad block_loss| over filters
/// and anchors in the R-ball and observations within B_X + B_N:
///   2k [ sqrt(d)(B_X+B_N)^2 (1 + sqrt(d) R) + sigma2 ]
///   + 4R (k-d+1) [ sigma2 + d (B_X+B_N)^2 ].
/// The first term dominates the k surrogate gradients, the second the
/// regularizer part.
inline double gradient_norm_bound(const ProblemConstants& c, int k, double radius) {
  const double d = static_cast<double>(c.order);
  const double b = c.amplitude_bound();
  const double sd = std::sqrt(d);
  return 2.0 * k * (sd * b * b * (1.0 + sd * radius) + c.sigma2) +
         4.0 * radius * (k - c.order + 1) * (c.sigma2 + d * b * b);
}

inline double gradient_norm_bound(const ProblemConstants& c) {
  return gradient_norm_bound(c, c.block_len, c.radius);
}

inline double ProblemConstants::default_expert_rate() const {
  const double g = gradient_norm_bound(*this, 2 * order, radius);
  if (!(g > 0.0)) throw std::invalid_argument("default_expert_rate: degenerate gradient bound");
  return order * sigma2 / (g * g);
}

/// Radial projection onto the centered ball of the given radius.
inline Vec project_to_ball(Vec w, double radius) {
  const double n = w.norm();
  opcount::add(2 * static_cast<std::uint64_t>(w.size()) + 2);
  if (n <= radius) return w;
  w *= radius / n;
  opcount::add(static_cast<std::uint64_t>(w.size()));
  return w;
}

}  // namespace unifilt

#endif  // UNIFILT_CORE_HPP
