#include "manifest.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>

#include "becflow/errors.hpp"

namespace becflow::cli {

using nlohmann::json;

json config_to_json(const PhysicalConfig& p) {
  json j = {
      {"dimension", p.dimension},
      {"m_B_kg", p.m_B},
      {"m_A_kg", p.m_A},
      {"a_B_m", p.a_B},
      {"a_AB_m", p.a_AB},
      {"n0_per_m3", p.n0},
      {"tau_m", p.tau},
      {"L_m", p.L},
      {"a_z_m", p.a_z},
      {"a_perp_m", p.a_perp},
      {"lambda_lattice_m", p.lambda_lattice},
  };
  j["t_obs_s"] = p.t_obs ? json(*p.t_obs) : json(nullptr);
  return j;
}

PhysicalConfig config_from_json(const json& j) {
  try {
    PhysicalConfig p;
    p.dimension = j.at("dimension").get<int>();
    p.m_B = j.at("m_B_kg").get<double>();
    p.m_A = j.at("m_A_kg").get<double>();
    p.a_B = j.at("a_B_m").get<double>();
    p.a_AB = j.at("a_AB_m").get<double>();
    p.n0 = j.at("n0_per_m3").get<double>();
    p.tau = j.at("tau_m").get<double>();
    p.L = j.at("L_m").get<double>();
    p.a_z = j.at("a_z_m").get<double>();
    p.a_perp = j.at("a_perp_m").get<double>();
    p.lambda_lattice = j.at("lambda_lattice_m").get<double>();
    if (const auto& t = j.at("t_obs_s"); !t.is_null()) p.t_obs = t.get<double>();
    if (j.size() != 12) throw ConfigError("manifest config has unknown fields");
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad manifest config: ") + e.what());
  }
}

json RunManifest::to_json() const {
  return {{"tool", tool},
          {"version", version},
          {"command", command},
          {"config", config_to_json(config)},
          {"options", options}};
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunManifest::digest() const {
  std::array<char, 17> hex{};
  std::snprintf(hex.data(), hex.size(), "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_json().dump())));
  return std::string("fnv1a64:") + hex.data();
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.tool = j.at("tool").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.config = config_from_json(j.at("config"));
    m.options = j.at("options");
    if (!m.options.is_object()) throw ConfigError("manifest options must be an object");
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad manifest: ") + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

}  // namespace becflow::cli
