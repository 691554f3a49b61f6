#include <algorithm>
#include <cmath>
#include <vector>

#include "becflow/analysis.hpp"
#include "becflow/constants.hpp"
#include "becflow/errors.hpp"
#include "becflow/spectral.hpp"
#include "gauss_legendre.hpp"
#include "phase_sums.hpp"

namespace becflow {

namespace {

// Nodes in x = omega / omega_c with weights w x^(s-1) exp(-x^2); the rate
// at reduced time tau = omega_c t is sum_i weight_i sin(x_i tau).
struct ToyRule {
  std::vector<double> x;
  std::vector<double> weight;
  double l1 = 0.0;
};

ToyRule build_rule(double s, double tau_max, const ToyOptions& opt, int level) {
  std::vector<double> breaks{0.0};
  for (int e = -30; e <= 0; ++e) breaks.push_back(std::ldexp(1.0, e));
  for (double x = 1.25; x < opt.omega_cut - 1e-12; x += 0.25) breaks.push_back(x);
  breaks.push_back(opt.omega_cut);

  std::vector<int> pieces(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double phase = (breaks[i + 1] - breaks[i]) * tau_max;
    const int base = std::max(1, static_cast<int>(std::ceil(phase / constants::pi)));
    pieces[i] = base << level;
  }
  const auto nodes = detail::expand_panels(breaks, pieces);

  ToyRule rule;
  rule.x = nodes.x;
  rule.weight.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes.x[i];
    rule.weight[i] = nodes.w[i] * std::pow(x, s - 1.0) * std::exp(-x * x);
    rule.l1 += std::abs(rule.weight[i]);
  }
  return rule;
}

double rule_sum(const ToyRule& r, double tau) {
  double acc = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.weight[i] * std::sin(r.x[i] * tau);
  return acc;
}

// Doubles the panel count until 16 probe times agree between neighbouring
// levels.
ToyRule converged_rule(double s, double tau_max, const ToyOptions& opt) {
  constexpr int kProbes = 16;
  ToyRule coarse = build_rule(s, tau_max, opt, 0);
  double worst = INFINITY;
  for (int level = 1; level <= opt.max_refinements; ++level) {
    ToyRule fine = build_rule(s, tau_max, opt, level);
    worst = 0.0;
    bool ok = true;
    for (int j = 1; j <= kProbes; ++j) {
      const double tau = tau_max * j / kProbes;
      const double a = rule_sum(coarse, tau);
      const double b = rule_sum(fine, tau);
      const double scale = std::max(std::abs(b), 1e-3 * fine.l1);
      const double rel = std::abs(a - b) / scale;
      worst = std::max(worst, rel);
      if (rel > opt.rel_tol) ok = false;
    }
    if (ok) return fine;
    coarse = std::move(fine);
  }
  throw ConvergenceError("toy rate quadrature did not converge", worst);
}

void require_toy(const ToyModel& toy) {
  if (!(toy.s > 0.0) || !std::isfinite(toy.s)) throw DomainError("toy: s must be positive");
  if (!(toy.omega_c > 0.0) || !std::isfinite(toy.omega_c)) {
    throw DomainError("toy: omega_c must be positive");
  }
}

}  // namespace

double toy_rate(const ToyModel& toy, double t, const ToyOptions& options) {
  require_toy(toy);
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("toy_rate: t must be non-negative");
  const double tau = toy.omega_c * t;
  const auto rule = converged_rule(toy.s, std::max(tau, options.t_span), options);
  return std::pow(toy.omega_c, toy.s) * rule_sum(rule, tau);
}

std::vector<double> toy_trace(const ToyModel& toy, const std::vector<double>& times,
                              const ToyOptions& options) {
  require_toy(toy);
  double t_hi = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
      throw DomainError("toy_trace: times must be non-negative");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DomainError("toy_trace: times must be strictly increasing");
    }
    t_hi = std::max(t_hi, times[i]);
  }
  if (times.empty()) return {};
  const auto rule = converged_rule(toy.s, std::max(toy.omega_c * t_hi, options.t_span), options);
  std::vector<double> tau(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) tau[i] = toy.omega_c * times[i];
  auto out = detail::phase_sums(rule.x, rule.weight, tau, detail::SinePower::one);
  const double scale = std::pow(toy.omega_c, toy.s);
  for (double& v : out) v *= scale;
  return out;
}

Regime toy_classify(const ToyModel& toy, const ToyOptions& options) {
  require_toy(toy);
  if (options.grid_size < 2) throw DomainError("toy_classify: grid_size must be >= 2");
  const auto times = uniform_grid(options.t_span / toy.omega_c, options.grid_size + 1);
  const auto g = toy_trace(toy, times, options);
  return has_negative_dip(g, options.noise_fraction) ? Regime::non_markovian : Regime::markovian;
}

double toy_critical_s(double omega_c, double tol, const ToyOptions& options) {
  if (!(tol >= 1e-3)) throw DomainError("toy_critical_s: tol must be >= 1e-3");
  double lo = 1.0;
  double hi = 3.0;
  if (toy_classify({lo, omega_c}, options) != Regime::markovian) {
    throw BracketError("toy_critical_s: s = 1 is not Markovian");
  }
  if (toy_classify({hi, omega_c}, options) != Regime::non_markovian) {
    throw BracketError("toy_critical_s: s = 3 is not non-Markovian");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (toy_classify({mid, omega_c}, options) == Regime::markovian) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace becflow
