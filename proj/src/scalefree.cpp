#include "dgr/scalefree.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

constexpr double kAlphaLow = 1.01;
constexpr double kAlphaHigh = 6.0;
constexpr double kAlphaTolerance = 1e-4;

struct TailStats {
  std::size_t n = 0;
  double sum_log = 0.0;
};

double log_hzeta(double s, double q) { return std::log(hurwitz_zeta(s, q)); }

double golden_section_max(double lo, double hi, auto&& f) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > kAlphaTolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

std::map<std::uint64_t, std::size_t> nonzero_counts(std::span<const std::uint64_t> values) {
  std::map<std::uint64_t, std::size_t> counts;
  for (auto v : values) {
    if (v > 0) ++counts[v];
  }
  return counts;
}

}  // namespace

double hurwitz_zeta(double s, double q) {
  gsl_sf_result result;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  int status = gsl_sf_hzeta_e(s, q, &result);
  gsl_set_error_handler(old);
  if (status != GSL_SUCCESS) {
    throw std::domain_error("Hurwitz zeta evaluation failed: " + std::string(gsl_strerror(status)));
  }
  return result.val;
}

double power_law_loglik(double alpha, std::uint64_t xmin, std::size_t n_tail, double sum_log) {
  return -static_cast<double>(n_tail) * log_hzeta(alpha, static_cast<double>(xmin)) -
         alpha * sum_log;
}

std::vector<std::uint64_t> to_u64(std::span<const std::size_t> values) {
  return {values.begin(), values.end()};
}

PowerLawFit fit_power_law(std::span<const std::uint64_t> values) {
  auto counts = nonzero_counts(values);
  std::size_t total = 0;
  for (const auto& [v, c] : counts) total += c;
  if (total < 10) throw InsufficientData("power-law fit needs at least 10 nonzero values");
  if (counts.size() == 1) throw DegenerateSequence("power-law fit of a constant sequence");

  std::vector<std::pair<std::uint64_t, std::size_t>> distinct(counts.begin(), counts.end());
  // Suffix sums give each candidate's tail size and sum of logs.
  std::vector<TailStats> suffix(distinct.size() + 1);
  for (std::size_t i = distinct.size(); i-- > 0;) {
    suffix[i].n = suffix[i + 1].n + distinct[i].second;
    suffix[i].sum_log = suffix[i + 1].sum_log +
                        static_cast<double>(distinct[i].second) *
                            std::log(static_cast<double>(distinct[i].first));
  }

  PowerLawFit best;
  bool have = false;
  // The last distinct value would leave a constant tail.
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    const std::uint64_t xmin = distinct[i].first;
    const TailStats tail = suffix[i];
    auto loglik = [&](double a) { return power_law_loglik(a, xmin, tail.n, tail.sum_log); };
    const double alpha = golden_section_max(kAlphaLow, kAlphaHigh, loglik);

    const double norm = hurwitz_zeta(alpha, static_cast<double>(xmin));
    const double n = static_cast<double>(tail.n);
    double ks = 0.0;
    std::size_t seen = 0;
    for (std::size_t j = i; j < distinct.size(); ++j) {
      seen += distinct[j].second;
      double empirical = static_cast<double>(seen) / n;
      double fitted =
          1.0 - hurwitz_zeta(alpha, static_cast<double>(distinct[j].first) + 1.0) / norm;
      ks = std::max(ks, std::abs(empirical - fitted));
    }
    if (!have || ks < best.ks_distance) {
      have = true;
      best.alpha = alpha;
      best.xmin = xmin;
      best.n_tail = tail.n;
      best.loglik = loglik(alpha);
      best.ks_distance = ks;
    }
  }
  return best;
}

ScaleFreeVerdict compare_exponential(const PowerLawFit& fit, std::span<const std::uint64_t> values) {
  auto counts = nonzero_counts(values);
  std::vector<std::pair<std::uint64_t, std::size_t>> tail;
  std::size_t n = 0;
  double excess = 0.0;
  for (const auto& [v, c] : counts) {
    if (v < fit.xmin) continue;
    tail.emplace_back(v, c);
    n += c;
    excess += static_cast<double>(c) * static_cast<double>(v - fit.xmin);
  }
  if (n < 2) throw InconclusiveTest("likelihood-ratio test needs at least two tail values");
  const double mean_excess = excess / static_cast<double>(n);
  if (mean_excess <= 0.0) throw InconclusiveTest("exponential fit of a constant tail");

  ScaleFreeVerdict out;
  out.lambda = std::log1p(1.0 / mean_excess);
  const double log_norm_exp = std::log(-std::expm1(-out.lambda));
  const double log_norm_pl = log_hzeta(fit.alpha, static_cast<double>(fit.xmin));

  std::vector<double> diff;
  diff.reserve(tail.size());
  double sum = 0.0;
  for (const auto& [v, c] : tail) {
    const double pl = -fit.alpha * std::log(static_cast<double>(v)) - log_norm_pl;
    const double ex = log_norm_exp - out.lambda * static_cast<double>(v - fit.xmin);
    diff.push_back(pl - ex);
    sum += static_cast<double>(c) * diff.back();
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  double variance = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double dev = diff[i] - mean;
    variance += static_cast<double>(tail[i].second) * dev * dev;
  }
  variance /= nn;
  if (variance <= 1e-15 * std::max(1.0, mean * mean)) {
    throw InconclusiveTest("pointwise log-likelihood differences have zero variance");
  }
  out.lr = sum;
  out.normalized_ratio = sum / std::sqrt(nn * variance);
  out.p = std::erfc(std::abs(sum) / std::sqrt(2.0 * nn * variance));
  out.is_scale_free = out.lr > 0.0 && out.p < 0.05;
  return out;
}

}  // namespace dgr
