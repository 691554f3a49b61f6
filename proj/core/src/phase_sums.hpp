#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace becflow::detail {

enum class SinePower { one, two };

// True when t[j] = t[0] + j * dt up to rounding.
inline bool is_uniform(std::span<const double> t) {
  if (t.size() < 3) return false;
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) return false;
  for (std::size_t j = 2; j < t.size(); ++j) {
    const double expect = t[0] + static_cast<double>(j) * dt;
    if (std::abs(t[j] - expect) > 1e-9 * dt) return false;
  }
  return true;
}

/// out[j] = sum_i weight[i] * sin(freq[i] * phase[j])^p for p = 1 or 2.
///
/// Uniform phase grids advance exp(i freq dt) by complex multiplication and
/// re-anchor with exact sin/cos every kAnchor steps, which bounds the
/// accumulated rounding to a few dozen ulps. Nodes are processed in blocks
/// so the rotation state stays in cache across the time loop.
inline std::vector<double> phase_sums(std::span<const double> freq,
                                      std::span<const double> weight,
                                      std::span<const double> phase, SinePower power) {
  constexpr std::size_t kBlock = 1024;
  constexpr std::size_t kAnchor = 32;
  const std::size_t n_t = phase.size();
  const std::size_t n_k = freq.size();
  std::vector<double> out(n_t, 0.0);

  if (!is_uniform(phase)) {
    for (std::size_t j = 0; j < n_t; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n_k; ++i) {
        const double s = std::sin(freq[i] * phase[j]);
        acc += weight[i] * (power == SinePower::one ? s : s * s);
      }
      out[j] = acc;
    }
    return out;
  }

  const double p0 = phase[0];
  const double dp = (phase[n_t - 1] - p0) / static_cast<double>(n_t - 1);
  std::vector<double> zr(kBlock), zi(kBlock), rr(kBlock), ri(kBlock);

  for (std::size_t b0 = 0; b0 < n_k; b0 += kBlock) {
    const std::size_t len = std::min(kBlock, n_k - b0);
    const double* f = freq.data() + b0;
    const double* w = weight.data() + b0;
    for (std::size_t i = 0; i < len; ++i) {
      rr[i] = std::cos(f[i] * dp);
      ri[i] = std::sin(f[i] * dp);
    }
    for (std::size_t j = 0; j < n_t; ++j) {
      if (j % kAnchor == 0) {
        const double p = p0 + static_cast<double>(j) * dp;
        for (std::size_t i = 0; i < len; ++i) {
          zr[i] = std::cos(f[i] * p);
          zi[i] = std::sin(f[i] * p);
        }
      }
      // Four partial sums let the compiler vectorize without reassociation.
      double acc[4] = {0.0, 0.0, 0.0, 0.0};
      std::size_t i = 0;
      if (power == SinePower::one) {
        for (; i + 4 <= len; i += 4) {
          for (std::size_t l = 0; l < 4; ++l) acc[l] += w[i + l] * zi[i + l];
        }
        for (; i < len; ++i) acc[0] += w[i] * zi[i];
      } else {
        for (; i + 4 <= len; i += 4) {
          for (std::size_t l = 0; l < 4; ++l) acc[l] += w[i + l] * zi[i + l] * zi[i + l];
        }
        for (; i < len; ++i) acc[0] += w[i] * zi[i] * zi[i];
      }
      out[j] += (acc[0] + acc[1]) + (acc[2] + acc[3]);
      for (std::size_t m = 0; m < len; ++m) {
        const double nr = zr[m] * rr[m] - zi[m] * ri[m];
        zi[m] = zr[m] * ri[m] + zi[m] * rr[m];
        zr[m] = nr;
      }
    }
  }
  return out;
}

}  // namespace becflow::detail
