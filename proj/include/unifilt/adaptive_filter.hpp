#ifndef UNIFILT_ADAPTIVE_FILTER_HPP
#define UNIFILT_ADAPTIVE_FILTER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "unifilt/core.hpp"
#include "unifilt/gd_filter.hpp"

namespace unifilt {

/// Exponentially-weighted pool of descent filters. One expert is born per
/// block: the expert born at block r sees blocks r, r+1, ... only, so it
/// holds exactly the filter a fresh GdCore fed the same blocks would hold.
/// Experts born later are implicit until their birth (they would carry zero
/// weight), which keeps memory at O(c) instead of O(T).
///
/// Per block c the pool: scores every live expert's block loss at the anchor
/// actually played (the combined filter), reweights by exp(-rate * loss),
/// admits expert c+1 with weight 1/(c+1) while scaling the rest by
/// 1 - 1/(c+1), and advances every expert's inner descent state.
class ExpertPool {
 public:
  explicit ExpertPool(ProblemConstants consts) : consts_(std::move(consts)) {
    consts_.validate();
    experts_.emplace_back(consts_);
    weights_.push_back(1.0);
  }

  const ProblemConstants& constants() const { return consts_; }
  int size() const { return static_cast<int>(experts_.size()); }
  std::int64_t block_index() const { return block_; }
  const std::vector<double>& weights() const { return weights_; }
  const Vec& expert_filter(int j) const { return experts_[static_cast<std::size_t>(j)].filter(); }

  /// The filter the pool plays: sum_j p_j w_j. Stays in the R-ball because
  /// it is a convex combination of ball points.
  Vec combined_filter() const {
    Vec w = Vec::Zero(consts_.order);
    for (std::size_t j = 0; j < experts_.size(); ++j) {
      w.noalias() += weights_[j] * experts_[j].filter();
    }
    opcount::add(2 * experts_.size() * static_cast<std::uint64_t>(consts_.order));
    return w;
  }

  /// Exponential reweighting p_j ~ p_j * exp(-rate * loss_j), normalized.
  /// The smallest loss is subtracted before exponentiation; the normalized
  /// weights are algebraically unchanged and the exponentials cannot all
  /// underflow.
  static std::vector<double> reweight(const std::vector<double>& weights,
                                      const std::vector<double>& losses, double rate) {
    if (weights.size() != losses.size()) {
      throw std::invalid_argument("reweight: weights/losses size mismatch");
    }
    const double lo = *std::min_element(losses.begin(), losses.end());
    std::vector<double> staged(weights.size());
    double z = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      staged[j] = weights[j] * std::exp(-rate * (losses[j] - lo));
      z += staged[j];
    }
    if (!(z > 0.0) || !std::isfinite(z)) return weights;  // all mass underflowed
    for (auto& p : staged) p /= z;
    return staged;
  }

  /// Processes one completed block. `played` must be the combined filter that
  /// produced the block's predictions; it anchors every expert's block loss.
  void update(const BlockSamples& samples, const Vec& played) {
    if (samples.size() != consts_.block_len) {
      throw std::invalid_argument("ExpertPool::update: block must hold block_len samples");
    }
    last_losses_.resize(experts_.size());
    for (std::size_t j = 0; j < experts_.size(); ++j) {
      last_losses_[j] = block_loss(samples, played, experts_[j].filter(), consts_);
    }
    last_pool_loss_ = block_loss(samples, played, played, consts_);

    weights_ = reweight(weights_, last_losses_, consts_.expert_rate);

    const double born = 1.0 / static_cast<double>(block_ + 1);
    for (auto& p : weights_) p *= (1.0 - born);
    for (auto& e : experts_) e.advance(samples);
    experts_.emplace_back(consts_);
    weights_.push_back(born);
    ++block_;
  }

  /// L^k_c(w^(j)) for each live expert, from the latest update.
  const std::vector<double>& last_expert_losses() const { return last_losses_; }
  /// L^k_c at the played filter, from the latest update.
  double last_pool_loss() const { return last_pool_loss_; }

 private:
  ProblemConstants consts_;
  std::vector<GdCore> experts_;
  std::vector<double> weights_;
  std::int64_t block_ = 1;
  std::vector<double> last_losses_;
  double last_pool_loss_ = 0.0;
};

/// Streaming driver around ExpertPool. The combined filter is computed once
/// per block (weights and experts only change at block boundaries).
class AdaptiveFilter {
 public:
  explicit AdaptiveFilter(ProblemConstants consts)
      : pool_(std::move(consts)),
        window_(pool_.constants().order),
        current_(Vec::Zero(pool_.constants().order)) {
    const auto& c = pool_.constants();
    pending_.targets.reserve(static_cast<std::size_t>(c.block_len));
    pending_.windows.reserve(static_cast<std::size_t>(c.block_len));
  }

  double step(double y) {
    const auto& c = pool_.constants();
    if (pending_.size() == 0) current_ = pool_.combined_filter();
    const Vec& win = window_.push(y);
    const double prediction = current_.dot(win);
    opcount::add(2 * static_cast<std::uint64_t>(c.order));
    pending_.targets.push_back(y);
    pending_.windows.push_back(win);
    if (pending_.size() == c.block_len) {
      pool_.update(pending_, current_);
      pending_.clear();
    }
    return prediction;
  }

  /// Filter in play for the current block.
  const Vec& filter() const { return current_; }
  const ExpertPool& pool() const { return pool_; }
  bool at_block_boundary() const { return pending_.size() == 0; }

 private:
  ExpertPool pool_;
  WindowBuilder window_;
  BlockSamples pending_;
  Vec current_;
};

struct AdaptiveRunResult {
  std::vector<double> predictions;
  /// Combined filter per block, trailing partial block included.
  std::vector<Vec> block_filters;
  /// L^k_c at the played filter, completed blocks only.
  std::vector<double> pool_block_losses;
  /// expert_block_losses[c-1][j] = L^k_c(w^(j+1)); filled when requested.
  std::vector<std::vector<double>> expert_block_losses;
};

inline AdaptiveRunResult adaptive_run(const ProblemConstants& consts,
                                      std::span<const double> observations,
                                      bool record_expert_losses = false) {
  if (observations.empty()) throw std::invalid_argument("adaptive_run: empty observation sequence");
  AdaptiveFilter filter(consts);
  AdaptiveRunResult out;
  out.predictions.reserve(observations.size());
  for (std::size_t t = 0; t < observations.size(); ++t) {
    out.predictions.push_back(filter.step(observations[t]));
    if (t % static_cast<std::size_t>(consts.block_len) == 0) {
      out.block_filters.push_back(filter.filter());
    }
    if (t % static_cast<std::size_t>(consts.block_len) ==
        static_cast<std::size_t>(consts.block_len) - 1) {
      out.pool_block_losses.push_back(filter.pool().last_pool_loss());
      if (record_expert_losses) {
        out.expert_block_losses.push_back(filter.pool().last_expert_losses());
      }
    }
  }
  return out;
}

}  // namespace unifilt

#endif  // UNIFILT_ADAPTIVE_FILTER_HPP
