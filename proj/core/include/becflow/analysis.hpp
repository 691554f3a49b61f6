#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "becflow/constants.hpp"
#include "becflow/dynamics.hpp"
#include "becflow/params.hpp"

namespace becflow {

enum class Regime { markovian, non_markovian };

const char* to_string(Regime regime);

/// Non-Markovian iff find_negative_intervals finds an interval.
Regime classify(const ReducedModel& model, double t_max, const IntervalOptions& options = {});

/// Classification over the configuration's observation window.
Regime classify(const PhysicalConfig& config, const IntervalOptions& options = {});

struct CrossoverOptions {
  double tol = 1e-3 * constants::a_rb;  // bracket width (m)
  IntervalOptions intervals{};
};

struct CrossoverResult {
  int dimension = 3;
  double a_crit = 0.0;          // m, bracket midpoint
  double a_crit_over_aRb = 0.0;
  std::array<double, 2> bracket{};  // Markovian at [0], non-Markovian at [1]
  int evaluations = 0;
};

/// Bisection in a_B over [0, diluteness_cap(dimension)]. Every other field
/// of `config` is kept; the dimension is overridden. Throws BracketError if
/// both ends classify alike.
CrossoverResult find_crossover(int dimension, PhysicalConfig config,
                               const CrossoverOptions& options = {});

enum class SweepAxis { a_B, L, dimension };

const char* to_string(SweepAxis axis);

enum class FailureKind { none, invalid_config, no_convergence, other };

struct SweepRow {
  double value = 0.0;  // axis value in SI (m) or the dimension
  bool ok = false;
  FailureKind failure = FailureKind::none;
  std::string error;
  NonMarkovianityResult result;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::a_B;
  std::vector<double> values;
  std::vector<SweepRow> rows;
};

/// N at each axis value, in input order. Values must be strictly
/// increasing. Per-point failures are recorded and the sweep continues.
SweepTable sweep(SweepAxis axis, const std::vector<double>& values, const PhysicalConfig& config,
                 HorizonPolicy policy = HorizonPolicy::fixed,
                 const IntervalOptions& options = {});

// --- Toy dephasing spectrum J(w) = w^s exp(-w^2/wc^2) ----------------------

struct ToyModel {
  double s = 1.0;
  double omega_c = 1.0;
};

struct ToyOptions {
  double rel_tol = 1e-9;
  double omega_cut = 8.0;   // in units of omega_c
  double t_span = 60.0;     // classification window in units of 1/omega_c
  std::size_t grid_size = 2000;
  double noise_fraction = 1e-6;
  int max_refinements = 6;
};

/// gamma(t) = int_0^inf dw J(w)/w sin(w t), the rate of
/// Gamma(t) = int dw J(w) (1 - cos w t) / w^2.
double toy_rate(const ToyModel& toy, double t, const ToyOptions& options = {});

/// toy_rate on (0, t_span/omega_c].
std::vector<double> toy_trace(const ToyModel& toy, const std::vector<double>& times,
                              const ToyOptions& options = {});

/// min_t gamma < -noise_fraction * max|gamma| on the classification window.
Regime toy_classify(const ToyModel& toy, const ToyOptions& options = {});

/// Bisection on s over [1, 3]. tol >= 1e-3.
double toy_critical_s(double omega_c, double tol = 1e-3, const ToyOptions& options = {});

}  // namespace becflow
