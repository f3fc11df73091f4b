#ifndef UNIFILT_ORACLE_HPP
#define UNIFILT_ORACLE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "unifilt/core.hpp"
#include "unifilt/rng.hpp"
#include "unifilt/signals.hpp"

namespace unifilt {

/// Sufficient statistics of min_w sum (x_tau - w'Y_tau)^2 over steps [r, s]:
/// gram = sum YY', cross = sum x Y, sq = sum x^2.
struct IntervalSummary {
  std::int64_t r = 1;
  std::int64_t s = 0;
  Eigen::MatrixXd gram;
  Vec cross;
  double sq = 0.0;
};

/// Prefix tables of the summary statistics; any interval summary is a
/// difference of two prefixes.
class PrefixSummaries {
 public:
  PrefixSummaries(std::span<const double> signal, std::span<const Vec> windows) {
    if (signal.size() != windows.size()) {
      throw std::invalid_argument("PrefixSummaries: signal/windows length mismatch");
    }
    if (windows.empty()) throw std::invalid_argument("PrefixSummaries: empty stream");
    n_ = static_cast<std::int64_t>(signal.size());
    d_ = static_cast<int>(windows[0].size());
    const std::size_t cells = static_cast<std::size_t>(n_ + 1);
    gram_.assign(cells * d_ * d_, 0.0);
    cross_.assign(cells * d_, 0.0);
    sq_.assign(cells, 0.0);
    for (std::int64_t t = 1; t <= n_; ++t) {
      const Vec& y = windows[static_cast<std::size_t>(t - 1)];
      const double x = signal[static_cast<std::size_t>(t - 1)];
      const double* gp = &gram_[static_cast<std::size_t>(t - 1) * d_ * d_];
      double* gc = &gram_[static_cast<std::size_t>(t) * d_ * d_];
      for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < d_; ++j) gc[i * d_ + j] = gp[i * d_ + j] + y(i) * y(j);
      }
      const double* cp = &cross_[static_cast<std::size_t>(t - 1) * d_];
      double* cc = &cross_[static_cast<std::size_t>(t) * d_];
      for (int i = 0; i < d_; ++i) cc[i] = cp[i] + x * y(i);
      sq_[static_cast<std::size_t>(t)] = sq_[static_cast<std::size_t>(t - 1)] + x * x;
    }
  }

  std::int64_t horizon() const { return n_; }
  int order() const { return d_; }

  /// Summary of the inclusive 1-based step range [r, s].
  IntervalSummary between(std::int64_t r, std::int64_t s) const {
    if (r < 1 || s < r || s > n_) throw std::invalid_argument("PrefixSummaries: bad interval");
    IntervalSummary out;
    out.r = r;
    out.s = s;
    out.gram.resize(d_, d_);
    out.cross.resize(d_);
    const double* ga = &gram_[static_cast<std::size_t>(r - 1) * d_ * d_];
    const double* gb = &gram_[static_cast<std::size_t>(s) * d_ * d_];
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) out.gram(i, j) = gb[i * d_ + j] - ga[i * d_ + j];
    }
    const double* ca = &cross_[static_cast<std::size_t>(r - 1) * d_];
    const double* cb = &cross_[static_cast<std::size_t>(s) * d_];
    for (int i = 0; i < d_; ++i) out.cross(i) = cb[i] - ca[i];
    out.sq = sq_[static_cast<std::size_t>(s)] - sq_[static_cast<std::size_t>(r - 1)];
    return out;
  }

 private:
  int d_ = 0;
  std::int64_t n_ = 0;
  std::vector<double> gram_, cross_, sq_;
};

struct BallRegression {
  Vec filter;
  double loss = 0.0;
  double multiplier = 0.0;  // Lagrange multiplier; 0 when the ball is inactive
};

/// Hindsight comparator: minimizes sum (x - w'Y)^2 over |w| <= radius.
/// A singular normal matrix yields the minimum-norm least-squares solution
/// (eigenvalue cutoff 1e-12 * lambda_max). When that solution leaves the
/// ball, the multiplier of (gram + mu I) w = cross is bisected until
/// ||w(mu)| - R| <= 1e-10 R (at most 200 iterations); the constrained
/// minimizer is generally not the radial projection of the unconstrained one.
inline BallRegression best_fixed_filter(const IntervalSummary& sum, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("best_fixed_filter: radius must be > 0");
  const int d = static_cast<int>(sum.cross.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sum.gram);
  if (eig.info() != Eigen::Success) throw std::runtime_error("best_fixed_filter: eig failed");
  const Vec& lam = eig.eigenvalues();
  const Eigen::MatrixXd& q = eig.eigenvectors();
  Vec b = q.transpose() * sum.cross;
  const double lam_max = std::max(lam(d - 1), 0.0);
  const double cutoff = 1e-12 * lam_max;
  Vec lam_eff(d);
  for (int i = 0; i < d; ++i) {
    lam_eff(i) = std::max(lam(i), 0.0);
    if (lam(i) <= cutoff) b(i) = 0.0;  // cross lies in range(gram); drop fp residue
  }

  const auto coords = [&](double mu) {
    Vec u(d);
    for (int i = 0; i < d; ++i) {
      const double den = lam_eff(i) + mu;
      u(i) = (b(i) == 0.0) ? 0.0 : b(i) / den;
    }
    return u;
  };

  double mu = 0.0;
  Vec u = coords(0.0);
  if (u.norm() > radius) {
    double lo = 0.0;
    double hi = b.norm() / radius;  // |w(hi)| <= |b|/hi = radius
    for (int it = 0; it < 200; ++it) {
      mu = 0.5 * (lo + hi);
      u = coords(mu);
      const double n = u.norm();
      if (std::fabs(n - radius) <= 1e-10 * radius) break;
      (n > radius ? lo : hi) = mu;
    }
  }

  BallRegression out;
  out.filter = q * u;
  out.multiplier = mu;
  out.loss = sum.sq - 2.0 * out.filter.dot(sum.cross) + out.filter.dot(sum.gram * out.filter);
  return out;
}

/// Regret of recorded per-step losses against the interval's own comparator.
inline double interval_regret(std::span<const double> algorithm_losses,
                              const PrefixSummaries& summaries, std::int64_t r, std::int64_t s,
                              double radius) {
  if (r < 1 || s < r || s > static_cast<std::int64_t>(algorithm_losses.size()) ||
      s > summaries.horizon()) {
    throw std::invalid_argument("interval_regret: bad interval");
  }
  double alg = 0.0;
  for (std::int64_t t = r - 1; t < s; ++t) alg += algorithm_losses[static_cast<std::size_t>(t)];
  return alg - best_fixed_filter(summaries.between(r, s), radius).loss;
}

struct ScanResult {
  std::int64_t r = 1;
  std::int64_t s = 1;
  double value = 0.0;
};

/// Maximizes interval_regret over intervals whose endpoints sit on the
/// stride grid (the final endpoint T is always included, so the full
/// interval is always a candidate). Stride 1 is the exact supremum.
inline ScanResult adaptive_regret_scan(std::span<const double> algorithm_losses,
                                       const PrefixSummaries& summaries, double radius,
                                       std::int64_t stride) {
  if (stride < 1) throw std::invalid_argument("adaptive_regret_scan: stride must be >= 1");
  const std::int64_t n = summaries.horizon();
  if (static_cast<std::int64_t>(algorithm_losses.size()) != n) {
    throw std::invalid_argument("adaptive_regret_scan: losses/summaries length mismatch");
  }
  std::vector<std::int64_t> grid;
  for (std::int64_t g = 0; g < n; g += stride) grid.push_back(g);
  grid.push_back(n);

  std::vector<double> loss_prefix(static_cast<std::size_t>(n + 1), 0.0);
  for (std::int64_t t = 0; t < n; ++t) {
    loss_prefix[static_cast<std::size_t>(t + 1)] =
        loss_prefix[static_cast<std::size_t>(t)] + algorithm_losses[static_cast<std::size_t>(t)];
  }

  ScanResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a + 1 < grid.size(); ++a) {
    for (std::size_t bb = a + 1; bb < grid.size(); ++bb) {
      const std::int64_t lo = grid[a];
      const std::int64_t hi = grid[bb];
      const double alg =
          loss_prefix[static_cast<std::size_t>(hi)] - loss_prefix[static_cast<std::size_t>(lo)];
      const double value = alg - best_fixed_filter(summaries.between(lo + 1, hi), radius).loss;
      if (value > best.value) {
        best.r = lo + 1;
        best.s = hi;
        best.value = value;
      }
    }
  }
  return best;
}

struct CovarianceReport {
  Eigen::MatrixXd deviation;  // sample mean of YY' minus XX' + sigma2 I
  Eigen::MatrixXd se;         // entrywise standard error of the mean
  double max_abs_deviation = 0.0;
  double se_at_max = 0.0;

  /// Largest |deviation|/se over entries. The denominator is floored at
  /// 1e-12: degenerate entries (e.g. a Rademacher diagonal, whose samples
  /// are constant up to roundoff) would otherwise divide one rounding
  /// residue by another.
  double max_z() const {
    double worst = 0.0;
    for (int i = 0; i < deviation.rows(); ++i) {
      for (int j = 0; j < deviation.cols(); ++j) {
        worst = std::max(worst, std::fabs(deviation(i, j)) / std::max(se(i, j), 1e-12));
      }
    }
    return worst;
  }

  /// Entrywise |deviation| <= z * se (entries with zero se must vanish).
  bool within(double z) const { return max_z() <= z; }
};

/// Monte Carlo check of E[YY'] = XX' + sigma2 I for one clean window X and
/// i.i.d. window noise drawn from the spec's distribution.
inline CovarianceReport covariance_check(const Vec& clean_window, const NoiseSpec& noise,
                                         std::int64_t samples) {
  if (samples < 2) throw std::invalid_argument("covariance_check: need at least 2 samples");
  const int d = static_cast<int>(clean_window.size());
  NoiseSpec draw = noise;
  const double sigma2 = noise.variance();
  Rng rng = Rng::stream(noise.seed, kMonteCarloStream);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(d, d);
  Vec y(d);
  const double s = draw.effective_scale();
  const double beta = draw.kind == NoiseKind::kTruncatedGaussian ? draw.bound / s : 0.0;
  const double lo = draw.kind == NoiseKind::kTruncatedGaussian ? detail::normal_cdf(-beta) : 0.0;
  const double hi = draw.kind == NoiseKind::kTruncatedGaussian ? detail::normal_cdf(beta) : 0.0;
  for (std::int64_t m = 1; m <= samples; ++m) {
    for (int i = 0; i < d; ++i) {
      double n = 0.0;
      switch (draw.kind) {
        case NoiseKind::kUniform: n = rng.uniform(-draw.bound, draw.bound); break;
        case NoiseKind::kRademacher: n = draw.bound * rng.sign(); break;
        case NoiseKind::kTruncatedGaussian:
          n = s * detail::normal_quantile(lo + rng.unit() * (hi - lo));
          break;
      }
      y(i) = clean_window(i) + n;
    }
    // Welford per entry.
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const double v = y(i) * y(j);
        const double delta = v - mean(i, j);
        mean(i, j) += delta / static_cast<double>(m);
        m2(i, j) += delta * (v - mean(i, j));
      }
    }
  }
  CovarianceReport report;
  report.deviation = mean - clean_window * clean_window.transpose() -
                     sigma2 * Eigen::MatrixXd::Identity(d, d);
  report.se = (m2 / (static_cast<double>(samples - 1) * static_cast<double>(samples)))
                  .cwiseSqrt();
  report.max_abs_deviation = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (std::fabs(report.deviation(i, j)) >= report.max_abs_deviation) {
        report.max_abs_deviation = std::fabs(report.deviation(i, j));
        report.se_at_max = report.se(i, j);
      }
    }
  }
  return report;
}

}  // namespace unifilt

#endif  // UNIFILT_ORACLE_HPP
