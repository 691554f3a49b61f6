#include "becflow/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "becflow/constants.hpp"
#include "becflow/errors.hpp"
#include "gauss_legendre.hpp"
#include "phase_sums.hpp"

namespace becflow {

namespace c = constants;

double free_energy(double k, double m_B) { return c::hbar * c::hbar * k * k / (2.0 * m_B); }

double bogoliubov_energy(double k, double u, double m_B) {
  const double eps = free_energy(k, m_B);
  return std::sqrt(eps * (eps + u));
}

namespace {

// Below this argument the kernels switch to their Taylor series; 1 - J0 and
// 1 - sin(y)/y cancel badly for small y.
constexpr double kSeriesArg = 0.1;

// 1 - J0(y) = sum_{n>=1} (-1)^(n+1) (y/2)^(2n) / (n!)^2
template <class Real>
Real one_minus_j0_series(Real y) {
  const Real q = Real(0.25) * y * y;
  Real term = q;
  Real sum = q;
  for (int n = 2; n <= 7; ++n) {
    term *= -q / (static_cast<Real>(n) * n);
    sum += term;
  }
  return sum;
}

// 1 - sin(y)/y = sum_{n>=1} (-1)^(n+1) y^(2n) / (2n+1)!
template <class Real>
Real one_minus_sinc_series(Real y) {
  const Real y2 = y * y;
  Real term = y2 / 6;
  Real sum = term;
  for (int n = 2; n <= 7; ++n) {
    term *= -y2 / ((Real(2) * n) * (Real(2) * n + 1));
    sum += term;
  }
  return sum;
}

// Small-k branch. W_D(x) ~ c_D x^2 (1 - a_D x^2), exp(-k^2/2) ~ 1 - k^2/2.
constexpr double kSmallK = 1e-4;
constexpr std::array<double, 4> kKernelLead = {0.0, 1.0, 0.5, 1.0 / 3.0};
constexpr std::array<double, 4> kKernelNext = {0.0, 1.0 / 3.0, 0.25, 0.2};

template <class Real>
Real kernel(int dimension, Real x) {
  switch (dimension) {
    case 1: {
      const Real s = std::sin(x);
      return s * s;
    }
    case 2: {
      const Real y = 2 * x;
      if (y < kSeriesArg) return one_minus_j0_series(y) / 2;
      return (1 - std::cyl_bessel_j(Real(0), y)) / 2;
    }
    case 3: {
      const Real y = 2 * x;
      if (y < kSeriesArg) return one_minus_sinc_series(y) / 2;
      return (1 - std::sin(y) / y) / 2;
    }
    default:
      throw DomainError("angular_kernel: dimension must be 1, 2 or 3");
  }
}

template <class Real>
Real energy_of(const ReducedModel& m, Real k) {
  const Real e = k * k / 2;
  return std::sqrt(e * (e + m.u_tilde));
}

template <class Real>
Real weight_of(const ReducedModel& m, Real k) {
  const int d = m.dimension;
  const Real k2 = k * k;
  const Real radial = d == 1 ? Real(1) : (d == 2 ? k : k2);
  if (k < kSmallK) {
    const Real ell2 = Real(m.ell) * m.ell;
    const Real shape = kKernelLead[d] * ell2 * (1 - kKernelNext[d] * k2 * ell2 - k2 / 2);
    // k^2 / (k^2/2 + u) written without the 0/0 at u = 0.
    const Real ratio = m.u_tilde == 0.0 ? Real(2) : k2 / (k2 / 2 + m.u_tilde);
    return m.A_tilde * radial * shape * ratio;
  }
  return m.A_tilde * radial * kernel(d, k * m.ell) * std::exp(-k2 / 2) / (k2 / 2 + m.u_tilde);
}

}  // namespace

double angular_kernel(int dimension, double x) { return kernel(dimension, x); }

double reduced_energy(const ReducedModel& m, double k) { return energy_of(m, k); }

double reduced_group_velocity(const ReducedModel& m, double k) {
  // dE/dk = (k^2 + u) / sqrt(k^2 + 2u), finite as k -> 0.
  const double num = k * k + m.u_tilde;
  if (num == 0.0) return 0.0;
  return num / std::sqrt(k * k + 2.0 * m.u_tilde);
}

double radial_weight(const ReducedModel& m, double k) { return weight_of(m, k); }

// ---------------------------------------------------------------------------

namespace {

constexpr int kGradedPanels = 24;  // [2^-24, 1] by factors of two
constexpr double kUniformWidth = 0.25;
constexpr std::size_t kCheckPoints = 16;

// Base panel breaks in k (reduced units): geometric grading toward k = 0,
// where the pole at k = i sqrt(2u) sits, then uniform to the cutoff.
std::vector<double> k_breaks(double k_cut) {
  std::vector<double> b{0.0};
  for (int j = kGradedPanels; j >= 0; --j) b.push_back(std::ldexp(1.0, -j));
  if (k_cut <= 1.0) {
    while (b.back() >= k_cut) b.pop_back();
    b.push_back(k_cut);
    return b;
  }
  const int n = static_cast<int>(std::ceil((k_cut - 1.0) / kUniformWidth));
  const double w = (k_cut - 1.0) / n;
  for (int i = 1; i <= n; ++i) b.push_back(1.0 + i * w);
  return b;
}

double relative_change(double fine, double coarse, double floor) {
  const double scale = std::max(std::abs(fine), floor);
  if (scale == 0.0) return std::abs(fine - coarse) == 0.0 ? 0.0 : INFINITY;
  return std::abs(fine - coarse) / scale;
}

}  // namespace

DecayRate::Rule DecayRate::build(int level) const {
  const auto breaks = k_breaks(options_.k_cutoff);
  const double t_red = horizon_ / model_.t0;
  std::vector<int> pieces(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    // Each panel sees at most half an oscillation of sin(E t) at the horizon.
    // The group velocity grows with k, so the right end bounds it.
    const double phase = (breaks[i + 1] - breaks[i]) *
                         reduced_group_velocity(model_, breaks[i + 1]) * t_red;
    const int base = std::max(1, static_cast<int>(std::ceil(phase / c::pi)));
    pieces[i] = base << level;
  }
  const auto nodes = detail::expand_panels<long double>(breaks, pieces);

  Rule r;
  r.energy.resize(nodes.size());
  r.rate_w.resize(nodes.size());
  r.deco_w.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const long double k = nodes.x[i];
    const long double e = energy_of(model_, k);
    const double f = static_cast<double>(nodes.w[i]) * weight_of(model_, static_cast<double>(k));
    r.energy[i] = e;
    r.rate_w[i] = f;
    r.deco_w[i] = f / e;
  }
  return r;
}

namespace {

// sin of a long-double phase: the reduction to [-pi, pi] keeps the extra
// bits, the sine itself runs in double.
double sin_of_phase(long double phase) {
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  constexpr long double inv_two_pi = 1.0L / two_pi;
  // Phases here are non-negative, so truncation after +0.5 rounds.
  const auto turns = static_cast<long long>(phase * inv_two_pi + 0.5L);
  return std::sin(static_cast<double>(phase - static_cast<long double>(turns) * two_pi));
}

}  // namespace

double DecayRate::rate_sum(const Rule& r, long double t_red) {
  double acc = 0.0;
  for (std::size_t i = 0; i < r.energy.size(); ++i) acc += r.rate_w[i] * sin_of_phase(r.energy[i] * t_red);
  return acc;
}

double DecayRate::deco_sum(const Rule& r, long double t_red) {
  // 1 - cos(x) = 2 sin^2(x/2) avoids cancellation at small E t.
  double acc = 0.0;
  for (std::size_t i = 0; i < r.energy.size(); ++i) {
    const double s = sin_of_phase(r.energy[i] * t_red / 2);
    acc += r.deco_w[i] * 2.0 * s * s;
  }
  return acc;
}

DecayRate::DecayRate(const ReducedModel& model, double horizon, QuadratureOptions options)
    : model_(model), horizon_(horizon), options_(options) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw DomainError("DecayRate: horizon must be finite and non-negative");
  }
  if (model.dimension < 1 || model.dimension > 3) {
    throw DomainError("DecayRate: model dimension must be 1, 2 or 3");
  }

  std::vector<double> checks;
  if (horizon == 0.0) {
    checks.push_back(0.0);
  } else {
    for (std::size_t j = 1; j <= kCheckPoints; ++j) {
      checks.push_back(horizon * static_cast<double>(j) / kCheckPoints);
    }
  }

  Rule coarse = build(0);
  for (int level = 1; level <= options_.max_refinements; ++level) {
    Rule fine = build(level);
    double l1 = 0.0;
    for (double w : fine.rate_w) l1 += std::abs(w);

    double worst = 0.0;
    for (double t : checks) {
      const long double tr = static_cast<long double>(t) / model_.t0;
      worst = std::max(worst, relative_change(rate_sum(fine, tr), rate_sum(coarse, tr), 1e-3 * l1));
      worst = std::max(worst, relative_change(deco_sum(fine, tr), deco_sum(coarse, tr), 1e-300));
    }
    achieved_ = worst;
    if (worst <= options_.rel_tol) {
      level_ = level + std::max(0, options_.extra_levels);
      if (level_ != level) fine = build(level_);
      rule_ = std::move(fine);
      energy_.assign(rule_.energy.begin(), rule_.energy.end());
      return;
    }
    coarse = std::move(fine);
  }
  throw ConvergenceError("decay-rate quadrature did not converge", achieved_);
}

double DecayRate::rate(double t) const {
  if (t < 0.0 || t > horizon_ * (1.0 + 1e-12)) {
    throw DomainError("DecayRate::rate: time outside [0, horizon]");
  }
  return rate_sum(rule_, static_cast<long double>(t) / model_.t0) / model_.t0;
}

double DecayRate::decoherence(double t) const {
  if (t < 0.0 || t > horizon_ * (1.0 + 1e-12)) {
    throw DomainError("DecayRate::decoherence: time outside [0, horizon]");
  }
  return deco_sum(rule_, static_cast<long double>(t) / model_.t0);
}

std::vector<double> DecayRate::rate(std::span<const double> times) const {
  std::vector<double> phases(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] < 0.0 || times[j] > horizon_ * (1.0 + 1e-12)) {
      throw DomainError("DecayRate::rate: time outside [0, horizon]");
    }
    phases[j] = times[j] / model_.t0;
  }
  auto out = detail::phase_sums(energy_, rule_.rate_w, phases, detail::SinePower::one);
  for (double& v : out) v /= model_.t0;
  return out;
}

std::vector<double> DecayRate::decoherence(std::span<const double> times) const {
  std::vector<double> phases(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] < 0.0 || times[j] > horizon_ * (1.0 + 1e-12)) {
      throw DomainError("DecayRate::decoherence: time outside [0, horizon]");
    }
    phases[j] = 0.5 * times[j] / model_.t0;
  }
  auto out = detail::phase_sums(energy_, rule_.deco_w, phases, detail::SinePower::two);
  for (double& v : out) v *= 2.0;
  return out;
}

double rate(const ReducedModel& model, double t, QuadratureOptions options) {
  if (t < 0.0) throw DomainError("rate: t must be non-negative");
  return DecayRate(model, t, options).rate(t);
}

double decoherence(const ReducedModel& model, double t, QuadratureOptions options) {
  if (t < 0.0) throw DomainError("decoherence: t must be non-negative");
  return DecayRate(model, t, options).decoherence(t);
}

namespace {

void require_time_grid(std::span<const double> times) {
  if (times.empty()) throw DomainError("time grid is empty");
  if (times.front() < 0.0) throw DomainError("time grid must be non-negative");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("time grid must be strictly increasing");
  }
}

}  // namespace

RateTrace rate_trace(const ReducedModel& model, std::span<const double> times,
                     QuadratureOptions options) {
  require_time_grid(times);
  DecayRate engine(model, times.back(), options);
  RateTrace out;
  out.times.assign(times.begin(), times.end());
  out.gamma = engine.rate(times);
  out.rel_tol = engine.achieved_tol();
  out.model = model;
  return out;
}

DecoherenceTrace decoherence_trace(const ReducedModel& model, std::span<const double> times,
                                   QuadratureOptions options) {
  require_time_grid(times);
  DecayRate engine(model, times.back(), options);
  DecoherenceTrace out;
  out.times.assign(times.begin(), times.end());
  out.Gamma = engine.decoherence(times);
  out.coherence.resize(out.Gamma.size());
  std::transform(out.Gamma.begin(), out.Gamma.end(), out.coherence.begin(),
                 [](double g) { return std::exp(-g); });
  out.rel_tol = engine.achieved_tol();
  return out;
}

std::vector<double> uniform_grid(double t_max, std::size_t points) {
  if (points < 2 || !(t_max > 0.0)) throw DomainError("uniform_grid: need t_max > 0, points >= 2");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw DomainError("log_grid: need 0 < lo < hi, points >= 2");
  }
  std::vector<double> g(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  g.back() = hi;
  return g;
}

// ---------------------------------------------------------------------------

namespace {

double wavenumber_at_energy(const ReducedModel& m, double e_red) {
  // E^2 = eps (eps + u)  =>  eps = 2E^2 / (u + sqrt(u^2 + 4E^2)), stable at u = 0.
  const double eps = 2.0 * e_red * e_red /
                     (m.u_tilde + std::sqrt(m.u_tilde * m.u_tilde + 4.0 * e_red * e_red));
  return std::sqrt(2.0 * eps);
}

double density_reduced(const ReducedModel& m, double e_red) {
  const double k = wavenumber_at_energy(m, e_red);
  return radial_weight(m, k) / reduced_group_velocity(m, k);
}

}  // namespace

double effective_spectral_density(const ReducedModel& model, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("effective_spectral_density: omega must be positive");
  }
  return density_reduced(model, omega * model.t0);
}

SpectralProfile effective_spectral_density(const ReducedModel& model,
                                           std::span<const double> omegas,
                                           std::optional<FitWindow> window) {
  if (omegas.size() < 2) throw DomainError("effective_spectral_density: need >= 2 frequencies");
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] > 0.0) || (i > 0 && !(omegas[i] > omegas[i - 1]))) {
      throw DomainError("effective_spectral_density: grid must be positive and increasing");
    }
  }
  SpectralProfile p;
  p.omegas.assign(omegas.begin(), omegas.end());
  p.J.resize(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    p.J[i] = effective_spectral_density(model, omegas[i]);
  }
  p.fit_window = window ? *window : FitWindow{omegas.front(), 10.0 * omegas.front()};
  p.s_fit = fit_exponent(p.omegas, p.J, p.fit_window);
  return p;
}

double fit_exponent(std::span<const double> omegas, std::span<const double> J, FitWindow w) {
  if (omegas.size() != J.size()) throw DomainError("fit_exponent: size mismatch");
  if (!(w.lo > 0.0) || w.hi < 10.0 * w.lo * (1.0 - 1e-12)) {
    throw DomainError("fit_exponent: degenerate window (must span at least one decade)");
  }
  if (omegas.empty() || w.lo < omegas.front() * (1.0 - 1e-12) ||
      w.hi > omegas.back() * (1.0 + 1e-12)) {
    throw DomainError("fit_exponent: window not inside the frequency grid");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (omegas[i] < w.lo * (1.0 - 1e-12) || omegas[i] > w.hi * (1.0 + 1e-12)) continue;
    if (!(J[i] > 0.0)) throw DomainError("fit_exponent: J must be positive on the window");
    const double x = std::log(omegas[i]);
    const double y = std::log(J[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw DomainError("fit_exponent: fewer than two grid points in the window");
  const double nn = static_cast<double>(n);
  const double den = nn * sxx - sx * sx;
  if (den <= 0.0) throw DomainError("fit_exponent: degenerate window");
  return (nn * sxy - sx * sy) / den;
}

double fit_exponent(const SpectralProfile& profile, FitWindow window) {
  return fit_exponent(profile.omegas, profile.J, window);
}

double rate_from_spectral_density(const ReducedModel& model, double t, QuadratureOptions options) {
  if (t < 0.0) throw DomainError("rate_from_spectral_density: t must be non-negative");
  const double t_red = t / model.t0;
  const double e_cut = reduced_energy(model, options.k_cutoff);

  // Energy panels: graded toward 0 (the density can behave like E^(-1/2)
  // there), then uniform, then split so each holds <= half an oscillation.
  std::vector<double> breaks{0.0};
  for (int j = 40; j >= 0; --j) {
    const double b = std::ldexp(1.0, -j);
    if (b < e_cut) breaks.push_back(b);
  }
  const double start = breaks.back();
  const int n_uniform = std::max(1, static_cast<int>(std::ceil((e_cut - start) / 0.5)));
  for (int i = 1; i <= n_uniform; ++i) breaks.push_back(start + (e_cut - start) * i / n_uniform);

  auto integrate = [&](int level) {
    std::vector<int> pieces(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double phase = (breaks[i + 1] - breaks[i]) * t_red;
      pieces[i] = std::max(1, static_cast<int>(std::ceil(phase / c::pi))) << level;
    }
    const auto nodes = detail::expand_panels(breaks, pieces);
    double acc = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double term = nodes.w[i] * density_reduced(model, nodes.x[i]);
      acc += term * std::sin(nodes.x[i] * t_red);
      l1 += std::abs(term);
    }
    return std::pair{acc, l1};
  };

  auto [coarse, l1] = integrate(0);
  double achieved = INFINITY;
  for (int level = 1; level <= options.max_refinements; ++level) {
    auto [fine, l1_fine] = integrate(level);
    achieved = relative_change(fine, coarse, 1e-3 * l1_fine);
    if (achieved <= options.rel_tol) return fine / model.t0;
    coarse = fine;
  }
  throw ConvergenceError("spectral-density reconstruction did not converge", achieved);
}

}  // namespace becflow
