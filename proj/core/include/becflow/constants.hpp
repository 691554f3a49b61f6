#pragma once

#include <numbers>

namespace becflow::constants {

// CODATA 2018, rounded to 10 significant digits.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double atomic_mass = 1.660539067e-27;  // kg
inline constexpr double bohr_radius = 5.291772109e-11;  // m

// Isotope masses (AME), in atomic mass units.
inline constexpr double mass_rb87_u = 86.90918053;
inline constexpr double mass_na23_u = 22.98976928;

inline constexpr double mass_rb87 = mass_rb87_u * atomic_mass;
inline constexpr double mass_na23 = mass_na23_u * atomic_mass;

// Natural s-wave scattering length of 87Rb used as the unit for a_B.
inline constexpr double a_rb = 5.3e-9;  // m

inline constexpr double pi = std::numbers::pi;

}  // namespace becflow::constants
