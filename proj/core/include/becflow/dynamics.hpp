#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "becflow/params.hpp"
#include "becflow/spectral.hpp"

namespace becflow {

/// Qubit state as a Bloch vector, |bloch| <= 1.
class QubitState {
 public:
  QubitState(double x, double y, double z);
  explicit QubitState(const std::array<double, 3>& bloch) : QubitState(bloch[0], bloch[1], bloch[2]) {}

  const std::array<double, 3>& bloch() const { return bloch_; }
  double x() const { return bloch_[0]; }
  double y() const { return bloch_[1]; }
  double z() const { return bloch_[2]; }

 private:
  std::array<double, 3> bloch_;
};

struct QubitPair {
  QubitState first;
  QubitState second;
};

/// Pure dephasing: z kept, transverse part scaled by exp(-Gamma).
QubitState evolve(const QubitState& state, double Gamma);

/// Half the Euclidean distance between Bloch vectors.
double trace_distance(const QubitState& a, const QubitState& b);

/// sigma = dD/dt for a pair prepared at t = 0, given Gamma(t) and gamma(t):
///   sigma = -gamma |d_perp|^2 exp(-2 Gamma) / (4 D(t)).
/// Throws DomainError when the evolved states coincide.
double information_flux(const QubitPair& initial, double Gamma, double gamma);

/// Flux on the common grid of two traces.
std::vector<double> information_flux(const QubitPair& initial, const DecoherenceTrace& Gamma,
                                     const RateTrace& gamma);

/// Flux at a time that must be one of the trace grid points.
double information_flux(const QubitPair& initial, const DecoherenceTrace& Gamma,
                        const RateTrace& gamma, double t);

struct NegativeInterval {
  double a = 0.0;  // s
  double b = 0.0;  // s
  // The rate was still negative at the end of the scan; b is the scan end.
  bool open_end = false;
};

struct IntervalOptions {
  std::size_t grid_size = 2000;
  double time_rel_tol = 1e-10;
  // Dips shallower than noise_fraction * max|gamma| are ignored.
  double noise_fraction = 1e-6;
  QuadratureOptions quadrature{};
};

/// Scans the rate on a uniform grid over (0, t_max], keeps sign changes
/// whose dip passes the noise guard and bisects both ends.
std::vector<NegativeInterval> find_negative_intervals(const ReducedModel& model, double t_max,
                                                      const IntervalOptions& options = {});

/// True when samples of the rate contain a run of negative values whose
/// minimum is below -noise_fraction * max|samples|. This is the detection
/// criterion of find_negative_intervals without the endpoint refinement.
bool has_negative_dip(std::span<const double> samples, double noise_fraction);

/// Same scan for an arbitrary rate function.
std::vector<NegativeInterval> find_negative_intervals(const std::function<double(double)>& rate,
                                                      double t_max,
                                                      const IntervalOptions& options = {});

struct MeasureDiagnostics {
  std::size_t grid_size = 0;
  std::size_t interval_count = 0;
  bool multiple_intervals = false;
  double rate_rel_tol = 0.0;  // achieved by the quadrature
  double noise_floor = 0.0;   // 1/s
  double max_abs_rate = 0.0;  // 1/s
  double Gamma_a = 0.0;
  double Gamma_b = 0.0;
};

struct NonMarkovianityResult {
  double N = 0.0;      // fraction of lost distinguishability regained, first interval
  double N_blp = 0.0;  // sum over intervals of exp(-Gamma(b)) - exp(-Gamma(a))
  std::vector<NegativeInterval> intervals;
  double t_max_used = 0.0;  // s
  MeasureDiagnostics diagnostics;
};

/// (exp(-Gamma_b) - exp(-Gamma_a)) / (1 - exp(-Gamma_a)).
double normalized_measure(double Gamma_a, double Gamma_b);

NonMarkovianityResult measure(const ReducedModel& model, double t_max,
                              const IntervalOptions& options = {});

enum class HorizonPolicy {
  fixed,     // the configuration's observation window
  adaptive,  // from 50 t0, doubling until the rate has decayed
};

/// Starts at 50 t0 and doubles until max|gamma| on the last quarter of the
/// window falls below 1e-4 of the global max. Fails past 6400 t0.
double adaptive_horizon(const ReducedModel& model, const IntervalOptions& options = {});

double select_horizon(const PhysicalConfig& config, HorizonPolicy policy,
                      const IntervalOptions& options = {});

NonMarkovianityResult measure(const PhysicalConfig& config,
                              HorizonPolicy policy = HorizonPolicy::fixed,
                              const IntervalOptions& options = {});

/// Distinguishability gained back by a pair over the given intervals.
double regained_distinguishability(const QubitPair& initial,
                                   const std::vector<NegativeInterval>& intervals,
                                   const std::vector<std::array<double, 2>>& Gamma_at_ends);

struct OptimalPairReport {
  std::size_t pairs = 0;
  double optimal_regain = 0.0;     // equatorial antipodal pair
  double max_random_regain = 0.0;
  double max_excess = 0.0;         // max(random - optimal)
  double max_ratio = 0.0;          // max(random / optimal); 0 without intervals
  std::size_t interval_count = 0;
};

/// Samples pairs uniformly in the Bloch ball and compares their regain with
/// the pair (1,0,0), (-1,0,0). Needs n_pairs >= 100.
OptimalPairReport verify_optimal_pair(const ReducedModel& model, double t_max,
                                      std::size_t n_pairs, std::uint64_t seed = 20120416,
                                      const IntervalOptions& options = {});

}  // namespace becflow
