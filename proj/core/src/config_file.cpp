#include "becflow/config_file.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "becflow/constants.hpp"
#include "becflow/errors.hpp"

namespace becflow {

namespace c = constants;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct KeySpec {
  const char* key;
  const char* field;  // keys that share a field are alternatives
  std::function<void(PhysicalConfig&, double)> set;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {"dimension", "dimension",
       [](PhysicalConfig& p, double v) {
         if (v != static_cast<int>(v)) throw ConfigError("dimension must be an integer");
         p.dimension = static_cast<int>(v);
       }},
      {"m_B_u", "m_B", [](PhysicalConfig& p, double v) { p.m_B = v * c::atomic_mass; }},
      {"m_A_u", "m_A", [](PhysicalConfig& p, double v) { p.m_A = v * c::atomic_mass; }},
      {"a_B_nm", "a_B", [](PhysicalConfig& p, double v) { p.a_B = v * 1e-9; }},
      {"a_B_over_aRb", "a_B", [](PhysicalConfig& p, double v) { p.a_B = v * c::a_rb; }},
      {"a_AB_a0", "a_AB", [](PhysicalConfig& p, double v) { p.a_AB = v * c::bohr_radius; }},
      {"a_AB_nm", "a_AB", [](PhysicalConfig& p, double v) { p.a_AB = v * 1e-9; }},
      {"n0_per_m3", "n0", [](PhysicalConfig& p, double v) { p.n0 = v; }},
      {"tau_nm", "tau", [](PhysicalConfig& p, double v) { p.tau = v * 1e-9; }},
      {"L_nm", "L", [](PhysicalConfig& p, double v) { p.L = v * 1e-9; }},
      {"a_z_nm", "a_z", [](PhysicalConfig& p, double v) { p.a_z = v * 1e-9; }},
      {"a_perp_nm", "a_perp", [](PhysicalConfig& p, double v) { p.a_perp = v * 1e-9; }},
      {"lambda_lattice_nm", "lambda_lattice",
       [](PhysicalConfig& p, double v) { p.lambda_lattice = v * 1e-9; }},
      {"t_obs_ms", "t_obs", [](PhysicalConfig& p, double v) { p.t_obs = v * 1e-3; }},
  };
  return specs;
}

const KeySpec& find_spec(std::string_view key) {
  for (const auto& s : key_specs()) {
    if (key == s.key) return s;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string fmt12(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError("cannot parse '" + std::string(text) + "' as a number for " +
                      std::string(what));
  }
  return v;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& s : key_specs()) k.emplace_back(s.key);
    return k;
  }();
  return keys;
}

void apply_config_entry(PhysicalConfig& config, std::string_view key, std::string_view value) {
  const auto& spec = find_spec(trim(key));
  spec.set(config, parse_number(value, spec.key));
}

PhysicalConfig parse_config(std::string_view text, PhysicalConfig base) {
  std::set<std::string> assigned;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto& spec = find_spec(key);
    if (!assigned.insert(spec.field).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": field '" + spec.field +
                        "' assigned twice");
    }
    spec.set(base, parse_number(line.substr(eq + 1), spec.key));
  }
  return base;
}

PhysicalConfig load_config(const std::filesystem::path& path, PhysicalConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string format_config(const PhysicalConfig& p) {
  std::ostringstream out;
  out << "dimension=" << p.dimension << '\n'
      << "m_B_u=" << fmt12(p.m_B / c::atomic_mass) << '\n'
      << "m_A_u=" << fmt12(p.m_A / c::atomic_mass) << '\n'
      << "a_B_nm=" << fmt12(p.a_B * 1e9) << '\n'
      << "a_AB_nm=" << fmt12(p.a_AB * 1e9) << '\n'
      << "n0_per_m3=" << fmt12(p.n0) << '\n'
      << "tau_nm=" << fmt12(p.tau * 1e9) << '\n'
      << "L_nm=" << fmt12(p.L * 1e9) << '\n'
      << "a_z_nm=" << fmt12(p.a_z * 1e9) << '\n'
      << "a_perp_nm=" << fmt12(p.a_perp * 1e9) << '\n'
      << "lambda_lattice_nm=" << fmt12(p.lambda_lattice * 1e9) << '\n';
  if (p.t_obs) out << "t_obs_ms=" << fmt12(*p.t_obs * 1e3) << '\n';
  return out.str();
}

}  // namespace becflow
