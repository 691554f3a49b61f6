#include "becflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>

#include "becflow/errors.hpp"

namespace becflow {

QubitState::QubitState(double x, double y, double z) : bloch_{x, y, z} {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(norm) || norm > 1.0 + 1e-12) {
    throw DomainError("QubitState: Bloch vector norm must be <= 1");
  }
}

QubitState evolve(const QubitState& state, double Gamma) {
  if (!(Gamma >= 0.0)) throw DomainError("evolve: Gamma must be non-negative");
  const double damp = std::exp(-Gamma);
  return QubitState(state.x() * damp, state.y() * damp, state.z());
}

double trace_distance(const QubitState& a, const QubitState& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return 0.5 * std::sqrt(dx * dx + dy * dy + dz * dz);
}

double information_flux(const QubitPair& initial, double Gamma, double gamma) {
  const double dx = initial.first.x() - initial.second.x();
  const double dy = initial.first.y() - initial.second.y();
  const double perp2 = dx * dx + dy * dy;
  const double dist = trace_distance(evolve(initial.first, Gamma), evolve(initial.second, Gamma));
  if (dist == 0.0) throw DomainError("information_flux: states coincide, flux undefined");
  if (perp2 == 0.0) return 0.0;
  return -gamma * perp2 * std::exp(-2.0 * Gamma) / (4.0 * dist);
}

std::vector<double> information_flux(const QubitPair& initial, const DecoherenceTrace& Gamma,
                                     const RateTrace& gamma) {
  if (Gamma.times != gamma.times) {
    throw DomainError("information_flux: traces must share a time grid");
  }
  std::vector<double> out(Gamma.times.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = information_flux(initial, Gamma.Gamma[i], gamma.gamma[i]);
  }
  return out;
}

double information_flux(const QubitPair& initial, const DecoherenceTrace& Gamma,
                        const RateTrace& gamma, double t) {
  if (Gamma.times != gamma.times) {
    throw DomainError("information_flux: traces must share a time grid");
  }
  const auto& ts = Gamma.times;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (std::abs(ts[i] - t) <= 1e-12 * std::max(std::abs(t), 1e-300)) {
      return information_flux(initial, Gamma.Gamma[i], gamma.gamma[i]);
    }
  }
  throw DomainError("information_flux: t is not a grid point of the traces");
}

// ---------------------------------------------------------------------------

namespace {

template <class Eval>
double bisect_sign(Eval&& eval, double lo, double hi, bool negative_at_hi, double rel_tol) {
  // Invariant: eval(lo) and eval(hi) lie on opposite sides of zero.
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    const bool neg = eval(mid) < 0.0;
    if (neg == negative_at_hi) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ScanResult {
  std::vector<NegativeInterval> intervals;
  double max_abs = 0.0;
  double floor = 0.0;
};

template <class Eval>
ScanResult scan_intervals(std::span<const double> t, std::span<const double> g, Eval&& eval,
                          const IntervalOptions& opt) {
  ScanResult out;
  for (double v : g) out.max_abs = std::max(out.max_abs, std::abs(v));
  out.floor = opt.noise_fraction * out.max_abs;
  if (out.max_abs == 0.0) return out;

  const std::size_t n = g.size();
  std::size_t j = 1;
  while (j < n) {
    if (!(g[j] < 0.0)) {
      ++j;
      continue;
    }
    const std::size_t first = j;
    double lowest = g[j];
    while (j < n && g[j] < 0.0) {
      lowest = std::min(lowest, g[j]);
      ++j;
    }
    const std::size_t last = j - 1;
    if (!(lowest < -out.floor)) continue;

    NegativeInterval iv;
    iv.a = bisect_sign(eval, t[first - 1], t[first], true, opt.time_rel_tol);
    if (last + 1 < n) {
      iv.b = bisect_sign(eval, t[last], t[last + 1], false, opt.time_rel_tol);
    } else {
      iv.b = t[last];
      iv.open_end = true;
    }
    out.intervals.push_back(iv);
  }
  return out;
}

void require_scan_args(double t_max, const IntervalOptions& opt) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw DomainError("find_negative_intervals: t_max must be positive");
  }
  if (opt.grid_size < 2) throw DomainError("find_negative_intervals: grid_size must be >= 2");
}

}  // namespace

std::vector<NegativeInterval> find_negative_intervals(const ReducedModel& model, double t_max,
                                                      const IntervalOptions& options) {
  require_scan_args(t_max, options);
  DecayRate engine(model, t_max, options.quadrature);
  const auto grid = uniform_grid(t_max, options.grid_size + 1);
  const auto g = engine.rate(grid);
  return scan_intervals(grid, g, [&](double t) { return engine.rate(t); }, options).intervals;
}

std::vector<NegativeInterval> find_negative_intervals(const std::function<double(double)>& rate,
                                                      double t_max,
                                                      const IntervalOptions& options) {
  require_scan_args(t_max, options);
  const auto grid = uniform_grid(t_max, options.grid_size + 1);
  std::vector<double> g(grid.size());
  std::transform(grid.begin(), grid.end(), g.begin(), rate);
  return scan_intervals(grid, g, rate, options).intervals;
}

bool has_negative_dip(std::span<const double> samples, double noise_fraction) {
  double max_abs = 0.0;
  double lowest = 0.0;
  for (double v : samples) {
    max_abs = std::max(max_abs, std::abs(v));
    lowest = std::min(lowest, v);
  }
  return max_abs > 0.0 && lowest < -noise_fraction * max_abs;
}

double normalized_measure(double Gamma_a, double Gamma_b) {
  if (!(Gamma_a > 0.0)) throw DomainError("normalized_measure: Gamma(a) must be positive");
  // exp(-Gb) - exp(-Ga) = exp(-Ga) expm1(Ga - Gb);  1 - exp(-Ga) = -expm1(-Ga)
  return std::exp(-Gamma_a) * std::expm1(Gamma_a - Gamma_b) / -std::expm1(-Gamma_a);
}

NonMarkovianityResult measure(const ReducedModel& model, double t_max,
                              const IntervalOptions& options) {
  require_scan_args(t_max, options);
  DecayRate engine(model, t_max, options.quadrature);
  const auto grid = uniform_grid(t_max, options.grid_size + 1);
  const auto g = engine.rate(grid);
  auto scan = scan_intervals(grid, g, [&](double t) { return engine.rate(t); }, options);

  NonMarkovianityResult res;
  res.t_max_used = t_max;
  res.intervals = std::move(scan.intervals);
  res.diagnostics.grid_size = options.grid_size;
  res.diagnostics.interval_count = res.intervals.size();
  res.diagnostics.multiple_intervals = res.intervals.size() > 1;
  res.diagnostics.rate_rel_tol = engine.achieved_tol();
  res.diagnostics.noise_floor = scan.floor;
  res.diagnostics.max_abs_rate = scan.max_abs;
  if (res.intervals.empty()) return res;

  for (std::size_t i = 0; i < res.intervals.size(); ++i) {
    const double Ga = engine.decoherence(res.intervals[i].a);
    const double Gb = engine.decoherence(res.intervals[i].b);
    res.N_blp += std::max(0.0, std::exp(-Gb) - std::exp(-Ga));
    if (i == 0) {
      res.diagnostics.Gamma_a = Ga;
      res.diagnostics.Gamma_b = Gb;
      res.N = std::clamp(normalized_measure(Ga, Gb), 0.0, 1.0);
    }
  }
  return res;
}

double adaptive_horizon(const ReducedModel& model, const IntervalOptions& options) {
  constexpr double kStart = 50.0;
  constexpr double kCap = 6400.0;
  constexpr double kTailFraction = 1e-4;
  double last_ratio = INFINITY;
  for (double span = kStart; span <= kCap; span *= 2.0) {
    const double t_max = span * model.t0;
    DecayRate engine(model, t_max, options.quadrature);
    const auto grid = uniform_grid(t_max, options.grid_size + 1);
    const auto g = engine.rate(grid);
    double global = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      global = std::max(global, std::abs(g[i]));
      if (grid[i] >= 0.75 * t_max) tail = std::max(tail, std::abs(g[i]));
    }
    last_ratio = global > 0.0 ? tail / global : 0.0;
    if (last_ratio < kTailFraction) return t_max;
  }
  throw ConvergenceError("rate did not decay within 6400 t0", last_ratio);
}

double select_horizon(const PhysicalConfig& config, HorizonPolicy policy,
                      const IntervalOptions& options) {
  if (policy == HorizonPolicy::fixed) return observation_window(config);
  return adaptive_horizon(make_model(config), options);
}

NonMarkovianityResult measure(const PhysicalConfig& config, HorizonPolicy policy,
                              const IntervalOptions& options) {
  const auto model = make_model(config);
  const double t_max = policy == HorizonPolicy::fixed ? observation_window(config)
                                                      : adaptive_horizon(model, options);
  return measure(model, t_max, options);
}

// ---------------------------------------------------------------------------

double regained_distinguishability(const QubitPair& initial,
                                   const std::vector<NegativeInterval>& intervals,
                                   const std::vector<std::array<double, 2>>& Gamma_at_ends) {
  if (intervals.size() != Gamma_at_ends.size()) {
    throw DomainError("regained_distinguishability: size mismatch");
  }
  double total = 0.0;
  for (const auto& G : Gamma_at_ends) {
    const double Da = trace_distance(evolve(initial.first, G[0]), evolve(initial.second, G[0]));
    const double Db = trace_distance(evolve(initial.first, G[1]), evolve(initial.second, G[1]));
    total += Db - Da;
  }
  return total;
}

OptimalPairReport verify_optimal_pair(const ReducedModel& model, double t_max,
                                      std::size_t n_pairs, std::uint64_t seed,
                                      const IntervalOptions& options) {
  if (n_pairs < 100) throw DomainError("verify_optimal_pair: need at least 100 pairs");
  require_scan_args(t_max, options);

  DecayRate engine(model, t_max, options.quadrature);
  const auto grid = uniform_grid(t_max, options.grid_size + 1);
  const auto g = engine.rate(grid);
  const auto intervals =
      scan_intervals(grid, g, [&](double t) { return engine.rate(t); }, options).intervals;

  std::vector<std::array<double, 2>> ends;
  ends.reserve(intervals.size());
  for (const auto& iv : intervals) {
    ends.push_back({engine.decoherence(iv.a), engine.decoherence(iv.b)});
  }

  OptimalPairReport rep;
  rep.pairs = n_pairs;
  rep.interval_count = intervals.size();
  const QubitPair optimal{QubitState(1.0, 0.0, 0.0), QubitState(-1.0, 0.0, 0.0)};
  rep.optimal_regain = regained_distinguishability(optimal, intervals, ends);
  rep.max_random_regain = -INFINITY;
  rep.max_excess = -INFINITY;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample = [&] {
    double v[3];
    double norm = 0.0;
    do {
      for (double& c : v) c = normal(rng);
      norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    } while (norm == 0.0);
    // Uniform in the ball: radius ~ U^(1/3).
    const double r = std::cbrt(unit(rng)) / norm;
    return QubitState(v[0] * r, v[1] * r, v[2] * r);
  };

  for (std::size_t i = 0; i < n_pairs; ++i) {
    const QubitPair pair{sample(), sample()};
    const double regain = regained_distinguishability(pair, intervals, ends);
    rep.max_random_regain = std::max(rep.max_random_regain, regain);
    rep.max_excess = std::max(rep.max_excess, regain - rep.optimal_regain);
    if (rep.optimal_regain > 0.0) {
      rep.max_ratio = std::max(rep.max_ratio, regain / rep.optimal_regain);
    }
  }
  return rep;
}

}  // namespace becflow
