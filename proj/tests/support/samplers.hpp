#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace dgr::testing {

// Hurwitz zeta by Euler-Maclaurin summation; independent of the library's
// implementation.
inline double em_hurwitz_zeta(double s, double q) {
  constexpr int kDirect = 12;
  // B_2j / (2j)!
  constexpr double kCoeff[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
                               1.0 / 47900160.0, -691.0 / 1307674368000.0};
  double sum = 0.0;
  for (int k = 0; k < kDirect; ++k) sum += std::pow(q + k, -s);
  const double a = q + kDirect;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  double rising = s;  // s (s+1) ... (s+2j-2)
  double power = std::pow(a, -s - 1.0);
  for (int j = 0; j < 6; ++j) {
    sum += kCoeff[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= a * a;
  }
  return sum;
}

// Inverse-CDF draw from P(x) proportional to x^-alpha for integer x >= xmin.
inline std::uint64_t sample_power_law(std::mt19937_64& rng, double alpha, std::uint64_t xmin) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double norm = em_hurwitz_zeta(alpha, static_cast<double>(xmin));
  // Smallest x with P(X > x) = zeta(alpha, x + 1) / norm <= 1 - u.
  auto survives = [&](std::uint64_t x) {
    return em_hurwitz_zeta(alpha, static_cast<double>(x + 1)) / norm > 1.0 - u;
  };
  std::uint64_t lo = xmin, hi = xmin;
  while (survives(hi)) {
    lo = hi + 1;
    hi = hi * 2 + 1;
  }
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (survives(mid)) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

inline std::vector<std::uint64_t> power_law_sample(std::uint64_t seed, std::size_t n, double alpha,
                                                   std::uint64_t xmin) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> out(n);
  for (auto& x : out) x = sample_power_law(rng, alpha, xmin);
  return out;
}

inline std::vector<std::uint64_t> geometric_sample(std::uint64_t seed, std::size_t n, double p) {
  std::mt19937_64 rng(seed);
  std::geometric_distribution<std::uint64_t> geo(p);
  std::vector<std::uint64_t> out(n);
  for (auto& x : out) x = geo(rng) + 1;
  return out;
}

}  // namespace dgr::testing
