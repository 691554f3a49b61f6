#include "becflow/params.hpp"

#include <cmath>
#include <sstream>

#include "becflow/constants.hpp"
#include "becflow/errors.hpp"

namespace becflow {

namespace c = constants;

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << name << " must be finite and strictly positive, got " << value;
    throw ConfigError(msg.str());
  }
}

void require_dimension(int dimension) {
  if (dimension < 1 || dimension > 3) {
    throw ConfigError("dimension must be 1, 2 or 3, got " + std::to_string(dimension));
  }
}

constexpr double kGasParameterWarn = 0.1;
constexpr double kGasParameterReject = 0.3;
constexpr double kConfinementRatioWarn = 0.1;

}  // namespace

PhysicalConfig default_config() {
  PhysicalConfig cfg;
  cfg.dimension = 3;
  cfg.m_B = c::mass_rb87;
  cfg.m_A = c::mass_na23;
  cfg.a_B = c::a_rb;
  cfg.a_AB = 55.0 * c::bohr_radius;
  cfg.n0 = 1e20;
  cfg.tau = 45e-9;
  cfg.L = 75e-9;
  cfg.a_z = 100e-9;
  cfg.a_perp = 100e-9;
  cfg.lambda_lattice = 600e-9;
  return cfg;
}

double gas_parameter(const PhysicalConfig& config) {
  return std::sqrt(config.a_B * config.a_B * config.a_B * config.n0);
}

std::vector<std::string> validate(const PhysicalConfig& config) {
  require_dimension(config.dimension);
  require_positive(config.m_B, "m_B");
  require_positive(config.m_A, "m_A");
  require_positive(config.a_AB, "a_AB");
  require_positive(config.n0, "n0");
  require_positive(config.tau, "tau");
  require_positive(config.L, "L");
  require_positive(config.a_z, "a_z");
  require_positive(config.a_perp, "a_perp");
  require_positive(config.lambda_lattice, "lambda_lattice");
  // a_B = 0 is the free gas and stays allowed.
  if (!(config.a_B >= 0.0) || !std::isfinite(config.a_B)) {
    throw ConfigError("a_B must be finite and non-negative");
  }
  if (config.t_obs) require_positive(*config.t_obs, "t_obs");

  std::vector<std::string> warnings;
  const double gp = gas_parameter(config);
  if (gp > kGasParameterReject) {
    std::ostringstream msg;
    msg << "gas parameter sqrt(a_B^3 n0) = " << gp << " exceeds " << kGasParameterReject
        << "; the weakly interacting description does not apply";
    throw ConfigError(msg.str());
  }
  if (gp > kGasParameterWarn) {
    std::ostringstream msg;
    msg << "gas parameter sqrt(a_B^3 n0) = " << gp << " is above " << kGasParameterWarn;
    warnings.push_back(msg.str());
  }
  if (config.dimension == 2 && config.a_B / config.a_z > kConfinementRatioWarn) {
    warnings.push_back("a_B / a_z above 0.1: quasi-2D coupling formula is marginal");
  }
  if (config.dimension == 1 && config.a_B / config.a_perp > kConfinementRatioWarn) {
    warnings.push_back("a_B / a_perp above 0.1: quasi-1D coupling formula is marginal");
  }
  return warnings;
}

DerivedCouplings derive_couplings(const PhysicalConfig& config) {
  require_dimension(config.dimension);
  const double hb2 = c::hbar * c::hbar;
  const double m_AB = config.m_A * config.m_B / (config.m_A + config.m_B);

  // The impurity coupling uses the same dimensional reduction as g_B, with
  // (a_AB, m_AB) in place of (a_B, m_B). Since 4 pi hbar^2 a / m with
  // m -> 2 m_AB gives 2 pi hbar^2 a_AB / m_AB, the reduced-dimension
  // versions follow by the same substitution.
  DerivedCouplings out;
  switch (config.dimension) {
    case 3:
      out.g_B = 4.0 * c::pi * hb2 * config.a_B / config.m_B;
      out.g_AB = 2.0 * c::pi * hb2 * config.a_AB / m_AB;
      out.n_D = config.n0;
      break;
    case 2:
      out.g_B = std::sqrt(8.0 * c::pi) * hb2 * config.a_B / (config.m_B * config.a_z);
      out.g_AB = std::sqrt(2.0 * c::pi) * hb2 * config.a_AB / (m_AB * config.a_z);
      out.n_D = std::sqrt(c::pi) * config.n0 * config.a_z;
      break;
    case 1:
      out.g_B = 2.0 * hb2 * config.a_B / (config.m_B * config.a_perp * config.a_perp);
      out.g_AB = hb2 * config.a_AB / (m_AB * config.a_perp * config.a_perp);
      out.n_D = config.n0 * c::pi * config.a_perp * config.a_perp;
      break;
    default:
      break;
  }
  out.u = 2.0 * out.g_B * out.n_D;
  out.A = 4.0 * out.g_AB * out.g_AB * out.n_D / c::hbar;
  return out;
}

ReducedModel reduce(const DerivedCouplings& couplings, const PhysicalConfig& config) {
  const int d = config.dimension;
  ReducedModel m;
  m.dimension = d;
  m.E0 = c::hbar * c::hbar / (config.m_B * config.tau * config.tau);
  m.t0 = c::hbar / m.E0;
  m.u_tilde = couplings.u / m.E0;
  m.ell = config.L / config.tau;

  // Surface of the unit D-sphere over (2 pi)^D; the 1D "sphere" is the two
  // points +-k.
  const double surface = d == 3 ? 4.0 * c::pi : (d == 2 ? 2.0 * c::pi : 2.0);
  const double measure = surface / std::pow(2.0 * c::pi, d);
  m.A_tilde = couplings.A * measure * c::hbar / (m.E0 * m.E0 * std::pow(config.tau, d));
  return m;
}

ReducedModel make_model(const PhysicalConfig& config) {
  validate(config);
  return reduce(derive_couplings(config), config);
}

double default_observation_window(int dimension) {
  require_dimension(dimension);
  return dimension == 1 ? 4e-3 : 2e-3;
}

double observation_window(const PhysicalConfig& config) {
  return config.t_obs ? *config.t_obs : default_observation_window(config.dimension);
}

double diluteness_cap(int dimension) {
  require_dimension(dimension);
  return static_cast<double>(dimension) * c::a_rb;
}

}  // namespace becflow
