#include "becflow/analysis.hpp"

#include <cmath>
#include <exception>

#include "becflow/errors.hpp"
#include "becflow/spectral.hpp"

namespace becflow {

const char* to_string(Regime regime) {
  return regime == Regime::markovian ? "markovian" : "non_markovian";
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::a_B:
      return "a_B";
    case SweepAxis::L:
      return "L";
    case SweepAxis::dimension:
      return "dimension";
  }
  return "unknown";
}

Regime classify(const ReducedModel& model, double t_max, const IntervalOptions& options) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw DomainError("classify: t_max must be positive");
  }
  if (options.grid_size < 2) throw DomainError("classify: grid_size must be >= 2");
  DecayRate engine(model, t_max, options.quadrature);
  const auto grid = uniform_grid(t_max, options.grid_size + 1);
  const auto g = engine.rate(grid);
  return has_negative_dip(g, options.noise_fraction) ? Regime::non_markovian : Regime::markovian;
}

Regime classify(const PhysicalConfig& config, const IntervalOptions& options) {
  return classify(make_model(config), observation_window(config), options);
}

CrossoverResult find_crossover(int dimension, PhysicalConfig config,
                               const CrossoverOptions& options) {
  if (dimension < 1 || dimension > 3) throw ConfigError("find_crossover: dimension must be 1, 2 or 3");
  if (!(options.tol > 0.0)) throw ConfigError("find_crossover: tol must be positive");
  config.dimension = dimension;

  CrossoverResult res;
  res.dimension = dimension;
  auto regime_at = [&](double a_B) {
    config.a_B = a_B;
    ++res.evaluations;
    return classify(config, options.intervals);
  };

  double lo = 0.0;
  double hi = diluteness_cap(dimension);
  if (regime_at(lo) != Regime::markovian) {
    throw BracketError("find_crossover: the non-interacting gas is already non-Markovian");
  }
  if (regime_at(hi) != Regime::non_markovian) {
    throw BracketError("find_crossover: still Markovian at the diluteness cap");
  }
  while (hi - lo > options.tol) {
    const double mid = 0.5 * (lo + hi);
    if (regime_at(mid) == Regime::markovian) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  res.bracket = {lo, hi};
  res.a_crit = 0.5 * (lo + hi);
  res.a_crit_over_aRb = res.a_crit / constants::a_rb;
  return res;
}

SweepTable sweep(SweepAxis axis, const std::vector<double>& values, const PhysicalConfig& config,
                 HorizonPolicy policy, const IntervalOptions& options) {
  if (values.empty()) throw ConfigError("sweep: no axis values");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] == values[i - 1]) throw ConfigError("sweep: duplicate axis value");
    if (!(values[i] > values[i - 1])) throw ConfigError("sweep: axis values must be increasing");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("sweep: axis values must be finite");
  }

  SweepTable table;
  table.axis = axis;
  table.values = values;
  table.rows.reserve(values.size());
  for (double v : values) {
    SweepRow row;
    row.value = v;
    try {
      PhysicalConfig point = config;
      switch (axis) {
        case SweepAxis::a_B:
          point.a_B = v;
          break;
        case SweepAxis::L:
          point.L = v;
          break;
        case SweepAxis::dimension:
          if (v != std::round(v) || v < 1.0 || v > 3.0) {
            throw ConfigError("dimension must be 1, 2 or 3");
          }
          point.dimension = static_cast<int>(v);
          break;
      }
      row.result = measure(point, policy, options);
      row.ok = true;
    } catch (const ConfigError& e) {
      row.failure = FailureKind::invalid_config;
      row.error = e.what();
    } catch (const ConvergenceError& e) {
      row.failure = FailureKind::no_convergence;
      row.error = e.what();
    } catch (const std::exception& e) {
      row.failure = FailureKind::other;
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace becflow
