#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: constants, couplings, kernels and quadratures are written out
// again here in the most direct form available.

#include <becflow/params.hpp>
#include <becflow/spectral.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double amu = 1.66053906660e-27;
inline constexpr double a0 = 5.29177210903e-11;

// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Trapezoid on [a, b] with n intervals.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

// Directional average of sin^2(k.L) with |k| L = x.
inline double angular_average(int dimension, double x) {
  if (dimension == 1) {
    const double s = std::sin(x);
    return s * s;
  }
  if (dimension == 2) {
    // Periodic integrand: the plain trapezoid converges geometrically.
    const int n = 4096;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = std::sin(x * std::cos(2.0 * pi * i / n));
      acc += s * s;
    }
    return acc / n;
  }
  auto f = [x](double mu) {
    const double s = std::sin(x * mu);
    return s * s;
  };
  return 0.5 * simpson(f, -1.0, 1.0, 20000);
}

// The same averages in closed form.
inline double kernel_closed(int dimension, double x) {
  if (dimension == 1) return std::sin(x) * std::sin(x);
  if (dimension == 2) return 0.5 * (1.0 - std::cyl_bessel_j(0.0, 2.0 * x));
  return x == 0.0 ? 0.0 : 0.5 * (1.0 - std::sin(2.0 * x) / (2.0 * x));
}

// Couplings straight from the closed formulas, SI.
struct SiModel {
  int dimension;
  double m_B;
  double u;    // J
  double A;    // J m^D / s, times the angular measure S_D/(2 pi)^D
  double tau;  // m
  double L;    // m
};

inline SiModel si_model(const becflow::PhysicalConfig& p) {
  const double m_AB = p.m_A * p.m_B / (p.m_A + p.m_B);
  const double h2 = hbar * hbar;
  double g_B = 0, g_AB = 0, n = 0, measure = 0;
  switch (p.dimension) {
    case 3:
      g_B = 4 * pi * h2 * p.a_B / p.m_B;
      g_AB = 2 * pi * h2 * p.a_AB / m_AB;
      n = p.n0;
      measure = 4 * pi / std::pow(2 * pi, 3);
      break;
    case 2:
      g_B = std::sqrt(8 * pi) * h2 * p.a_B / (p.m_B * p.a_z);
      g_AB = std::sqrt(2 * pi) * h2 * p.a_AB / (m_AB * p.a_z);
      n = std::sqrt(pi) * p.n0 * p.a_z;
      measure = 2 * pi / std::pow(2 * pi, 2);
      break;
    default:
      g_B = 2 * h2 * p.a_B / (p.m_B * p.a_perp * p.a_perp);
      g_AB = h2 * p.a_AB / (m_AB * p.a_perp * p.a_perp);
      n = p.n0 * pi * p.a_perp * p.a_perp;
      measure = 2 / (2 * pi);
      break;
  }
  return {p.dimension, p.m_B, 2 * g_B * n, 4 * g_AB * g_AB * n / hbar * measure, p.tau, p.L};
}

inline double si_free_energy(const SiModel& m, double k) { return hbar * hbar * k * k / (2 * m.m_B); }

inline double si_energy(const SiModel& m, double k) {
  const double e = si_free_energy(m, k);
  return std::sqrt(e * (e + m.u));
}

// Radial integrand of the SI rate without the sine, units 1/(s m^-1).
inline double si_weight(const SiModel& m, double k) {
  if (k == 0.0) return 0.0;
  const double e = si_free_energy(m, k);
  return m.A * std::pow(k, m.dimension - 1) * kernel_closed(m.dimension, k * m.L) *
         std::exp(-0.5 * k * k * m.tau * m.tau) / (e + m.u);
}

// Same integrand in reduced units, written independently of the library.
inline double reduced_integrand(const becflow::ReducedModel& m, double k, double t_red) {
  if (k == 0.0) return 0.0;
  const double e = 0.5 * k * k;
  const double E = std::sqrt(e * (e + m.u_tilde));
  const double W = kernel_closed(m.dimension, k * m.ell);
  return m.A_tilde * std::pow(k, m.dimension - 1) * W * std::exp(-e) / (e + m.u_tilde) *
         std::sin(E * t_red);
}

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Random physical configuration inside the validated region. The
// observation window is drawn from [0.2, 2] ms to keep the cost bounded.
inline becflow::PhysicalConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
  auto p = becflow::default_config();
  p.dimension = 1 + static_cast<int>(rng() % 3);
  p.a_B = between(0.0, 0.8 * becflow::diluteness_cap(p.dimension));
  p.a_AB = between(20.0, 100.0) * a0;
  p.n0 = between(0.5e20, 2e20);
  p.tau = between(35e-9, 60e-9);
  p.L = between(40e-9, 120e-9);
  p.t_obs = between(0.2e-3, 2e-3);
  return p;
}

// Gamma(t_i) by integrating the engine's rate in time: 16-point
// Gauss-Legendre on panels of width at most 0.5 t0. The m-th node of every
// panel lies on a uniform grid, so each node offset is one batch call.
inline std::vector<double> cumulative_gamma(const becflow::DecayRate& engine,
                                            const std::vector<double>& times) {
  // Nodes and weights of the 16-point rule on [0, 1].
  static const std::vector<std::pair<double, double>> gl = [] {
    std::vector<std::pair<double, double>> r;
    const int n = 16;
    for (int i = 1; i <= n; ++i) {
      double x = std::cos(pi * (i - 0.25) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.emplace_back(0.5 * (1 - x), 1.0 / ((1 - x * x) * dp * dp));
    }
    return r;
  }();

  const double t_end = times.back();
  const double t0 = engine.model().t0;
  const auto panels = static_cast<std::size_t>(std::ceil(t_end / (0.5 * t0)));
  const double h = t_end / static_cast<double>(panels);

  // panel_sum[j] = integral over panel j.
  std::vector<double> panel_sum(panels, 0.0);
  for (const auto& [x, w] : gl) {
    std::vector<double> ts(panels);
    for (std::size_t j = 0; j < panels; ++j) ts[j] = (static_cast<double>(j) + x) * h;
    const auto g = engine.rate(ts);
    for (std::size_t j = 0; j < panels; ++j) panel_sum[j] += w * h * g[j];
  }

  // Each requested time: whole panels plus a partial one done directly.
  std::vector<double> out;
  for (double t : times) {
    const auto whole = static_cast<std::size_t>(std::floor(t / h));
    double acc = 0.0;
    for (std::size_t j = 0; j < std::min(whole, panels); ++j) acc += panel_sum[j];
    const double rest = t - static_cast<double>(whole) * h;
    if (rest > 1e-15 * h && whole < panels) {
      const double a = static_cast<double>(whole) * h;
      for (const auto& [x, w] : gl) acc += w * rest * engine.rate(a + x * rest);
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace oracle
