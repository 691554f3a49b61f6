#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "becflow/params.hpp"
#include "json.hpp"

namespace becflow::cli {

/// Everything that determines the bytes of an output file. The wall-clock
/// time is kept out of the digest and lives only in the sidecar file.
struct RunManifest {
  std::string tool = "becflow";
  std::string version;
  std::string command;
  PhysicalConfig config;
  nlohmann::json options = nlohmann::json::object();

  nlohmann::json to_json() const;
  /// "fnv1a64:" followed by 16 hex digits of the compact JSON.
  std::string digest() const;
};

RunManifest manifest_from_json(const nlohmann::json& j);

/// SI fields at full precision, so a manifest rebuilds the exact config.
nlohmann::json config_to_json(const PhysicalConfig& config);
PhysicalConfig config_from_json(const nlohmann::json& j);

std::uint64_t fnv1a64(std::string_view bytes);

/// Current UTC time as YYYY-MM-DDThh:mm:ssZ.
std::string utc_timestamp();

}  // namespace becflow::cli
