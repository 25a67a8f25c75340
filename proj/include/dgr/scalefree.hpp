#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dgr {

struct PowerLawFit {
  double alpha = 0.0;
  std::uint64_t xmin = 0;
  std::size_t n_tail = 0;
  double loglik = 0.0;  // tail log-likelihood at alpha
  double ks_distance = 0.0;
};

struct ScaleFreeVerdict {
  double lr = 0.0;  // power law minus exponential, summed over the tail
  double p = 1.0;   // two-sided
  double lambda = 0.0;  // fitted exponential rate on x - xmin
  double normalized_ratio = 0.0;
  bool is_scale_free = false;
};

/// Hurwitz zeta, sum over k >= 0 of (k + q)^-s.
double hurwitz_zeta(double s, double q);

/// Log-likelihood of a discrete power law with lower bound `xmin` for a tail
/// summarised by its size and the sum of ln x.
double power_law_loglik(double alpha, std::uint64_t xmin, std::size_t n_tail, double sum_log);

/// Discrete power-law fit. Zeros are dropped. For every distinct value as
/// xmin (with at least two distinct values in its tail) alpha maximises the
/// zeta-normalised likelihood on [1.01, 6] by golden-section search to 1e-4;
/// the xmin with the smallest Kolmogorov-Smirnov distance wins (ties to the
/// smaller xmin).
/// Throws InsufficientData below 10 nonzero values and DegenerateSequence
/// when they are all equal.
PowerLawFit fit_power_law(std::span<const std::uint64_t> values);

/// Likelihood-ratio test of the fitted power law against a discrete
/// exponential fitted to the same tail. Throws InconclusiveTest when the
/// pointwise differences have zero variance.
ScaleFreeVerdict compare_exponential(const PowerLawFit& fit, std::span<const std::uint64_t> values);

std::vector<std::uint64_t> to_u64(std::span<const std::size_t> values);

}  // namespace dgr
