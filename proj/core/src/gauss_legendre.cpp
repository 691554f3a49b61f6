#include "gauss_legendre.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace becflow::detail {

namespace {

// Newton iteration on P_n from the Chebyshev initial guess.
GaussRule build_rule() {
  constexpr int n = static_cast<int>(kGaussOrder);
  constexpr long double eps = std::numeric_limits<long double>::epsilon();
  GaussRule rule;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L;
      long double p1 = 0.0L;
      for (int j = 1; j <= n; ++j) {
        const long double p2 = p1;
        p1 = p0;
        p0 = ((2.0L * j - 1.0L) * z * p1 - (j - 1.0L) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0L);
      const long double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) <= 2.0L * eps) break;
    }
    const long double w = 2.0L / ((1.0L - z * z) * dp * dp);
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre16() {
  static const GaussRule rule = build_rule();
  return rule;
}

}  // namespace becflow::detail
