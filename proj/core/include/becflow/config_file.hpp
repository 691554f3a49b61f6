#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "becflow/params.hpp"

namespace becflow {

// Flat key=value config files. Keys carry their unit as a suffix:
//
//   dimension=3
//   a_B_over_aRb=1.0      # or a_B_nm=5.3
//   a_AB_a0=55            # or a_AB_nm=...
//   n0_per_m3=1e20
//   tau_nm=45
//   L_nm=75
//   a_z_nm=100
//   a_perp_nm=100
//   m_B_u=86.90918053
//   m_A_u=22.98976928
//   lambda_lattice_nm=600
//   t_obs_ms=2
//
// '#' starts a comment. Unknown keys and duplicate assignments are errors.

/// Keys accepted by the parser, in canonical order.
const std::vector<std::string>& config_keys();

/// Sets one field from a key and its textual value. Throws ConfigError.
void apply_config_entry(PhysicalConfig& config, std::string_view key, std::string_view value);

PhysicalConfig parse_config(std::string_view text, PhysicalConfig base = default_config());
PhysicalConfig load_config(const std::filesystem::path& path,
                           PhysicalConfig base = default_config());

/// Canonical serialization: every field, one per line, 12 significant digits.
/// t_obs_ms is written only when set.
std::string format_config(const PhysicalConfig& config);

/// Locale-independent parse of a floating-point literal. Throws ConfigError.
double parse_number(std::string_view text, std::string_view what);

}  // namespace becflow
