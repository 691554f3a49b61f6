#pragma once

#include <optional>
#include <string>
#include <vector>

namespace becflow {

/// Experimental inputs, SI units throughout.
struct PhysicalConfig {
  int dimension = 3;
  double m_B = 0.0;     // background boson mass (kg)
  double m_A = 0.0;     // impurity mass (kg)
  double a_B = 0.0;     // boson-boson scattering length (m)
  double a_AB = 0.0;    // impurity-boson scattering length (m)
  double n0 = 0.0;      // 3D condensate density (m^-3)
  double tau = 0.0;     // trap parameter (m)
  double L = 0.0;       // half the distance between the wells (m)
  double a_z = 0.0;     // axial confinement length, quasi-2D (m)
  double a_perp = 0.0;  // transverse confinement length, quasi-1D (m)
  double lambda_lattice = 0.0;  // metadata only (m)
  // Observation window for the non-Markovianity measure (s). Unset means
  // default_observation_window(dimension).
  std::optional<double> t_obs;

  bool operator==(const PhysicalConfig&) const = default;
};

/// Couplings and density for the active dimension. Units carry a factor m^D.
struct DerivedCouplings {
  double g_AB = 0.0;  // J m^D
  double g_B = 0.0;   // J m^D
  double n_D = 0.0;   // m^-D
  double u = 0.0;     // interaction energy 2 g_B n_D (J)
  double A = 0.0;     // rate prefactor 4 g_AB^2 n_D / hbar (J m^D / s)
};

/// Dimensionless model. Energies in E0 = hbar^2/(m_B tau^2), wavenumbers in
/// 1/tau, times in t0 = hbar/E0. A_tilde absorbs the angular measure
/// S_D/(2 pi)^D, so gamma_SI(t) = gamma_reduced(t/t0) / t0.
struct ReducedModel {
  int dimension = 3;
  double u_tilde = 0.0;
  double ell = 0.0;  // L / tau
  double A_tilde = 0.0;
  double E0 = 0.0;  // J
  double t0 = 0.0;  // s

  bool operator==(const ReducedModel&) const = default;
};

PhysicalConfig default_config();

/// Throws ConfigError on hard violations. Returns soft-limit warnings
/// (weak-interaction parameter above 0.1, a_B above 0.1 of the confinement
/// length).
std::vector<std::string> validate(const PhysicalConfig& config);

/// sqrt(a_B^3 n0).
double gas_parameter(const PhysicalConfig& config);

DerivedCouplings derive_couplings(const PhysicalConfig& config);
ReducedModel reduce(const DerivedCouplings& couplings, const PhysicalConfig& config);

/// validate + derive_couplings + reduce.
ReducedModel make_model(const PhysicalConfig& config);

/// 2 ms for 3D and quasi-2D gases, 4 ms for quasi-1D.
double default_observation_window(int dimension);
double observation_window(const PhysicalConfig& config);

/// Largest a_B (m) compatible with the dilute-gas assumption: 3, 2 and 1
/// times a_Rb for D = 3, 2, 1.
double diluteness_cap(int dimension);

}  // namespace becflow
