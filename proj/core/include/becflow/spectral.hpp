#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "becflow/params.hpp"

namespace becflow {

/// Free-particle energy hbar^2 k^2 / (2 m_B), SI.
double free_energy(double k, double m_B);

/// Bogoliubov energy sqrt(eps_k (eps_k + u)), SI. u = 2 g_B n_D.
double bogoliubov_energy(double k, double u, double m_B);

/// Average of sin^2(k.L) over directions of k in D dimensions, x = kL.
///   D=1: sin^2 x,  D=2: (1 - J0(2x))/2,  D=3: (1 - sin(2x)/(2x))/2.
double angular_kernel(int dimension, double x);

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double k_cutoff = 8.0;  // in units of 1/tau; exp(-k^2 tau^2/2) < e^-32 beyond
  int max_refinements = 6;
  // Halve the panel width this many more times after the rule converged.
  int extra_levels = 0;
};

struct RateTrace {
  std::vector<double> times;  // s
  std::vector<double> gamma;  // 1/s
  double rel_tol = 0.0;       // achieved
  ReducedModel model;
};

struct DecoherenceTrace {
  std::vector<double> times;  // s
  std::vector<double> Gamma;
  std::vector<double> coherence;  // exp(-Gamma)
  double rel_tol = 0.0;
};

struct FitWindow {
  double lo = 0.0;  // 1/s
  double hi = 0.0;
};

struct SpectralProfile {
  std::vector<double> omegas;  // 1/s
  std::vector<double> J;       // dimensionless: gamma(t) = int dw J(w) sin(w t)
  double s_fit = 0.0;
  FitWindow fit_window;
};

/// Radial integrand of the decay rate in reduced units without the sine:
///   A_tilde * k^(D-1) W_D(k ell) exp(-k^2/2) / (k^2/2 + u_tilde).
double radial_weight(const ReducedModel& model, double k);

/// Reduced Bogoliubov energy sqrt(e (e + u_tilde)), e = k^2/2.
double reduced_energy(const ReducedModel& model, double k);

/// d(reduced_energy)/dk.
double reduced_group_velocity(const ReducedModel& model, double k);

/// Decay rate and decoherence function for one model, with the quadrature
/// rule fixed for every time in [0, horizon]. Construction runs the panel
/// doubling check; evaluation afterwards is a plain weighted sum.
class DecayRate {
 public:
  DecayRate(const ReducedModel& model, double horizon, QuadratureOptions options = {});

  const ReducedModel& model() const { return model_; }
  double horizon() const { return horizon_; }
  /// Largest relative change seen between the accepted rule and the one
  /// with half the panel width.
  double achieved_tol() const { return achieved_; }
  std::size_t node_count() const { return energy_.size(); }
  /// Number of panel halvings in the rule in use.
  int level() const { return level_; }

  /// gamma(t) in 1/s.
  double rate(double t) const;
  /// Gamma(t) = int_0^t gamma, closed form in t.
  double decoherence(double t) const;

  /// Batch evaluation. Uniformly spaced times use a phase-rotation update.
  std::vector<double> rate(std::span<const double> times) const;
  std::vector<double> decoherence(std::span<const double> times) const;

 private:
  // Energies and phases in extended precision: late in the window the sum
  // cancels to ~1e-6 of its terms, and a double-rounded E t alone would
  // cost ~1e-9 there.
  struct Rule {
    std::vector<long double> energy;  // reduced E at each node
    std::vector<double> rate_w;       // w * radial_weight
    std::vector<double> deco_w;       // w * radial_weight / E
  };
  Rule build(int level) const;
  static double rate_sum(const Rule& r, long double t_red);
  static double deco_sum(const Rule& r, long double t_red);

  ReducedModel model_;
  double horizon_;
  QuadratureOptions options_;
  double achieved_ = 0.0;
  int level_ = 0;
  Rule rule_;
  std::vector<double> energy_;  // rounded copy for the batch evaluator
};

double rate(const ReducedModel& model, double t, QuadratureOptions options = {});
double decoherence(const ReducedModel& model, double t, QuadratureOptions options = {});

RateTrace rate_trace(const ReducedModel& model, std::span<const double> times,
                     QuadratureOptions options = {});
DecoherenceTrace decoherence_trace(const ReducedModel& model, std::span<const double> times,
                                   QuadratureOptions options = {});

/// points >= 2 samples from 0 to t_max inclusive.
std::vector<double> uniform_grid(double t_max, std::size_t points);
/// points >= 2 log-spaced samples from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// J_eff(omega) = radial weight / group velocity at the k with E_k = hbar omega.
double effective_spectral_density(const ReducedModel& model, double omega);

/// Profile over a positive increasing grid. The fit window defaults to the
/// first decade of the grid.
SpectralProfile effective_spectral_density(const ReducedModel& model,
                                           std::span<const double> omegas,
                                           std::optional<FitWindow> window = {});

/// Least-squares slope of log J against log omega over grid points inside
/// the window. The window must span at least a decade and J must be
/// positive on it.
double fit_exponent(std::span<const double> omegas, std::span<const double> J, FitWindow window);
double fit_exponent(const SpectralProfile& profile, FitWindow window);

/// gamma(t) rebuilt as int_0^inf dw J_eff(w) sin(w t), integrated over
/// frequency on its own panel set.
double rate_from_spectral_density(const ReducedModel& model, double t,
                                  QuadratureOptions options = {});

}  // namespace becflow
