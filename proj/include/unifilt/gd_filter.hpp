#ifndef UNIFILT_GD_FILTER_HPP
#define UNIFILT_GD_FILTER_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "unifilt/core.hpp"

namespace unifilt {

/// Maintains the sliding observation window Y_t (most recent first, zero
/// warm-up before the stream starts).
class WindowBuilder {
 public:
  explicit WindowBuilder(int order) : window_(Vec::Zero(order)) {
    if (order < 1) throw std::invalid_argument("WindowBuilder: order must be >= 1");
  }

  /// Appends y_t and returns the window ending at it.
  const Vec& push(double y) {
    const auto d = window_.size();
    for (Eigen::Index i = d - 1; i > 0; --i) window_(i) = window_(i - 1);
    window_(0) = y;
    opcount::add(static_cast<std::uint64_t>(d));
    return window_;
  }

  const Vec& current() const { return window_; }

 private:
  Vec window_;
};

/// Block-update engine of the descent filter: starts at the zero filter and,
/// given the samples of block c, takes one step of size 1/(step_scale * c)
/// against the block-loss gradient followed by projection onto the R-ball.
/// The gradient is evaluated at the current filter, which is also the block's
/// anchor, so the regularizer contributes nothing at the evaluation point;
/// the call still routes through block_loss_gradient to keep one code path.
class GdCore {
 public:
  explicit GdCore(ProblemConstants consts)
      : consts_(std::move(consts)), filter_(Vec::Zero(consts_.order)) {
    consts_.validate();
  }

  const ProblemConstants& constants() const { return consts_; }
  const Vec& filter() const { return filter_; }

  /// 1-based index of the block the next advance() consumes.
  std::int64_t block_index() const { return block_; }

  double step_size() const { return 1.0 / (consts_.step_scale * static_cast<double>(block_)); }

  void advance(const BlockSamples& samples) {
    const Vec g = block_loss_gradient(samples, filter_, filter_, consts_);
    filter_ = project_to_ball(filter_ - step_size() * g, consts_.radius);
    opcount::add(2 * static_cast<std::uint64_t>(consts_.order) + 1);
    ++block_;
  }

 private:
  ProblemConstants consts_;
  Vec filter_;
  std::int64_t block_ = 1;
};

/// Streaming driver: predicts w_c'Y_t on every step and hands each completed
/// block to GdCore. The filter only changes at block boundaries. Observations
/// outside [-(B_X+B_N), B_X+B_N] are counted, not rejected; the bounds feed
/// the derived constants, not the update's correctness.
class GdFilter {
 public:
  explicit GdFilter(ProblemConstants consts)
      : core_(std::move(consts)), window_(core_.constants().order) {
    const auto& c = core_.constants();
    pending_.targets.reserve(static_cast<std::size_t>(c.block_len));
    pending_.windows.reserve(static_cast<std::size_t>(c.block_len));
  }

  /// Consumes y_t; returns the prediction of x_t made before learning from it.
  double step(double y) {
    const auto& c = core_.constants();
    if (std::fabs(y) > c.amplitude_bound()) ++bound_violations_;
    const Vec& win = window_.push(y);
    const double prediction = core_.filter().dot(win);
    opcount::add(2 * static_cast<std::uint64_t>(c.order));
    pending_.targets.push_back(y);
    pending_.windows.push_back(win);
    if (pending_.size() == c.block_len) {
      core_.advance(pending_);
      pending_.clear();
    }
    return prediction;
  }

  const Vec& filter() const { return core_.filter(); }
  std::int64_t block_index() const { return core_.block_index(); }
  double next_step_size() const { return core_.step_size(); }
  std::int64_t bound_violations() const { return bound_violations_; }

 private:
  GdCore core_;
  WindowBuilder window_;
  BlockSamples pending_;
  std::int64_t bound_violations_ = 0;
};

struct GdRunResult {
  std::vector<double> predictions;
  /// block_filters[c-1] is the filter played on block c; the trailing
  /// partial block, if any, gets its own entry and never triggers an update.
  std::vector<Vec> block_filters;
  std::int64_t bound_violations = 0;
};

inline GdRunResult gd_run(const ProblemConstants& consts, std::span<const double> observations) {
  if (observations.empty()) throw std::invalid_argument("gd_run: empty observation sequence");
  GdFilter filter(consts);
  GdRunResult out;
  out.predictions.reserve(observations.size());
  for (std::size_t t = 0; t < observations.size(); ++t) {
    if (t % static_cast<std::size_t>(consts.block_len) == 0) {
      out.block_filters.push_back(filter.filter());
    }
    out.predictions.push_back(filter.step(observations[t]));
  }
  out.bound_violations = filter.bound_violations();
  return out;
}

}  // namespace unifilt

#endif  // UNIFILT_GD_FILTER_HPP
