#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace becflow::detail {

inline constexpr std::size_t kGaussOrder = 16;

/// Gauss-Legendre nodes and weights on [-1, 1], extended precision.
struct GaussRule {
  std::array<long double, kGaussOrder> x{};
  std::array<long double, kGaussOrder> w{};
};

const GaussRule& gauss_legendre16();

/// Quadrature nodes on a panel partition.
template <class Real = double>
struct PanelNodes {
  std::vector<Real> x;
  std::vector<Real> w;

  std::size_t size() const { return x.size(); }
};

/// Expands each panel [breaks[i], breaks[i+1]] into pieces[i] equal
/// sub-panels and places 16 Gauss-Legendre nodes on each. Node positions
/// are formed in long double and rounded once to Real.
template <class Real = double>
PanelNodes<Real> expand_panels(std::span<const double> breaks, std::span<const int> pieces) {
  const auto& gl = gauss_legendre16();
  std::size_t total = 0;
  for (int p : pieces) total += static_cast<std::size_t>(p) * kGaussOrder;

  PanelNodes<Real> out;
  out.x.reserve(total);
  out.w.reserve(total);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const long double a = breaks[i];
    const long double width = (static_cast<long double>(breaks[i + 1]) - a) / pieces[i];
    for (int p = 0; p < pieces[i]; ++p) {
      const long double half = 0.5L * width;
      const long double mid = a + (p + 0.5L) * width;
      for (std::size_t j = 0; j < kGaussOrder; ++j) {
        out.x.push_back(static_cast<Real>(mid + half * gl.x[j]));
        out.w.push_back(static_cast<Real>(half * gl.w[j]));
      }
    }
  }
  return out;
}

}  // namespace becflow::detail
