#ifndef UNIFILT_DENSE_REFERENCE_HPP
#define UNIFILT_DENSE_REFERENCE_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "unifilt/core.hpp"

namespace unifilt::dense {

// Reference implementations that materialize the d-by-d regularizer matrix.
// They exist to cross-check the matrix-free code path and to expose its
// complexity advantage; nothing in the filters depends on them.

/// (k-d+1)*sigma2*I - sum_{tau = t-k+d}^{t} Y_tau Y_tau'.
inline Eigen::MatrixXd regularizer_matrix(const BlockSamples& samples,
                                          const ProblemConstants& c) {
  const int k = c.block_len;
  const int d = c.order;
  Eigen::MatrixXd m = (k - d + 1) * c.sigma2 * Eigen::MatrixXd::Identity(d, d);
  for (int i = d - 1; i < k; ++i) {
    m.noalias() -= samples.windows[i] * samples.windows[i].transpose();
  }
  opcount::add(static_cast<std::uint64_t>(k - d + 1) * 2 * d * d + static_cast<std::uint64_t>(d));
  return m;
}

inline double block_loss(const BlockSamples& samples, const Vec& anchor, const Vec& w,
                         const ProblemConstants& c) {
  detail::require_block_shape(samples, anchor, w, c, "dense::block_loss");
  double total = 0.0;
  for (int i = 0; i < c.block_len; ++i) {
    total += surrogate_loss(samples.targets[i], w, samples.windows[i], c.sigma2);
  }
  const Vec v = w - anchor;
  const Eigen::MatrixXd m = regularizer_matrix(samples, c);
  opcount::add(2 * static_cast<std::uint64_t>(c.order) * c.order + 2 * c.order);
  return total + v.dot(m * v);
}

inline Vec block_loss_gradient(const BlockSamples& samples, const Vec& anchor, const Vec& w,
                               const ProblemConstants& c) {
  detail::require_block_shape(samples, anchor, w, c, "dense::block_loss_gradient");
  Vec g = Vec::Zero(c.order);
  for (int i = 0; i < c.block_len; ++i) {
    g += surrogate_gradient(samples.targets[i], w, samples.windows[i], c.sigma2);
  }
  const Vec v = w - anchor;
  const Eigen::MatrixXd m = regularizer_matrix(samples, c);
  g.noalias() += 2.0 * (m * v);
  opcount::add(2 * static_cast<std::uint64_t>(c.order) * c.order + 3 * c.order);
  return g;
}

/// Hessian of the block loss: 2*sum_all YY' + 2*(k-d+1)*sigma2*I
/// - 2*sum_last YY'. Equals 2*sum_{first d-1} YY' + 2*(k-d+1)*sigma2*I.
inline Eigen::MatrixXd block_hessian(const BlockSamples& samples, const ProblemConstants& c) {
  const int d = c.order;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < c.block_len; ++i) {
    h.noalias() += 2.0 * samples.windows[i] * samples.windows[i].transpose();
  }
  h += regularizer_matrix(samples, c) * 2.0;
  return h;
}

/// Descent engine with the same update rule as GdCore but the gradient
/// computed through the materialized regularizer matrix: O(k*d^2) per block.
class GdCore {
 public:
  explicit GdCore(ProblemConstants consts)
      : consts_(std::move(consts)), filter_(Vec::Zero(consts_.order)) {
    consts_.validate();
  }

  const Vec& filter() const { return filter_; }
  std::int64_t block_index() const { return block_; }

  void advance(const BlockSamples& samples) {
    const Vec g = dense::block_loss_gradient(samples, filter_, filter_, consts_);
    const double eta = 1.0 / (consts_.step_scale * static_cast<double>(block_));
    filter_ = project_to_ball(filter_ - eta * g, consts_.radius);
    opcount::add(2 * static_cast<std::uint64_t>(consts_.order) + 1);
    ++block_;
  }

 private:
  ProblemConstants consts_;
  Vec filter_;
  std::int64_t block_ = 1;
};

}  // namespace unifilt::dense

#endif  // UNIFILT_DENSE_REFERENCE_HPP
