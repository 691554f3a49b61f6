#include "app.hpp"

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "becflow/analysis.hpp"
#include "becflow/config_file.hpp"
#include "becflow/constants.hpp"
#include "becflow/dynamics.hpp"
#include "becflow/errors.hpp"
#include "becflow/spectral.hpp"
#include "csv.hpp"

#ifndef BECFLOW_VERSION
#define BECFLOW_VERSION "0.0.0"
#endif

namespace becflow::cli {

using nlohmann::json;

namespace {

struct Override {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr std::array kOverrides = {
    Override{"--dimension", "dimension", "Condensate dimension: 1, 2 or 3"},
    Override{"--a-b-over-arb", "a_B_over_aRb", "Boson scattering length in units of a_Rb"},
    Override{"--a-b-nm", "a_B_nm", "Boson scattering length (nm)"},
    Override{"--a-ab-a0", "a_AB_a0", "Impurity-boson scattering length (Bohr radii)"},
    Override{"--a-ab-nm", "a_AB_nm", "Impurity-boson scattering length (nm)"},
    Override{"--n0", "n0_per_m3", "Condensate density (m^-3)"},
    Override{"--tau-nm", "tau_nm", "Trap parameter tau (nm)"},
    Override{"--l-nm", "L_nm", "Half the distance between the wells (nm)"},
    Override{"--a-z-nm", "a_z_nm", "Axial confinement length, quasi-2D (nm)"},
    Override{"--a-perp-nm", "a_perp_nm", "Transverse confinement length, quasi-1D (nm)"},
    Override{"--m-b-u", "m_B_u", "Boson mass (u)"},
    Override{"--m-a-u", "m_A_u", "Impurity mass (u)"},
    Override{"--lambda-nm", "lambda_lattice_nm", "Lattice wavelength (nm), recorded only"},
    Override{"--t-obs-ms", "t_obs_ms", "Observation window for the measure (ms)"},
};

struct Inputs {
  std::optional<std::string> config_path;
  std::optional<std::string> out_path;
  std::array<std::optional<std::string>, kOverrides.size()> overrides;
  std::uint64_t seed = 20120416;
  double rel_tol = 1e-9;
  std::size_t grid_size = 2000;
  std::string horizon = "fixed";

  std::optional<double> t_max_ms;
  std::size_t points = 201;
  double tol_over_arb = 1e-3;
  std::string axis;
  std::vector<std::string> values;
  double omega_min = 1e2;
  double omega_max = 1e7;
  std::optional<double> fit_lo;
  std::optional<double> fit_hi;
  double s = 1.0;
  double omega_c = 1.0;
  std::optional<double> toy_t_max;
  bool critical = false;
  double toy_tol = 1e-3;
  std::size_t pairs = 1000;
  std::string manifest_path;
};

void add_common(CLI::App& sub, Inputs& in) {
  sub.add_option("--config", in.config_path, "key=value config file");
  sub.add_option("--out", in.out_path, "Output CSV path (default stdout)");
  sub.add_option("--seed", in.seed, "Seed for randomized checks");
  sub.add_option("--rel-tol", in.rel_tol, "Quadrature relative tolerance");
  for (std::size_t i = 0; i < kOverrides.size(); ++i) {
    sub.add_option(kOverrides[i].flag, in.overrides[i], kOverrides[i].help);
  }
}

void add_scan(CLI::App& sub, Inputs& in) {
  sub.add_option("--grid-size", in.grid_size, "Scan intervals over the window");
  sub.add_option("--horizon", in.horizon, "Observation window policy")
      ->check(CLI::IsMember({"fixed", "adaptive"}));
}

PhysicalConfig resolve_config(const Inputs& in, std::ostream& err) {
  PhysicalConfig config = default_config();
  if (in.config_path) config = load_config(*in.config_path, config);

  // Flags replace whatever the file said; two flags for one field conflict.
  auto field_of = [](std::string_view key) -> std::string_view {
    if (key == "a_B_over_aRb" || key == "a_B_nm") return "a_B";
    if (key == "a_AB_a0" || key == "a_AB_nm") return "a_AB";
    return key;
  };
  std::vector<std::string_view> seen;
  for (std::size_t i = 0; i < kOverrides.size(); ++i) {
    if (!in.overrides[i]) continue;
    const auto field = field_of(kOverrides[i].key);
    for (auto f : seen) {
      if (f == field) {
        throw ConfigError(std::string("conflicting flags for ") + std::string(field));
      }
    }
    seen.push_back(field);
    apply_config_entry(config, kOverrides[i].key, *in.overrides[i]);
  }
  for (const auto& w : validate(config)) err << "warning: " << w << '\n';
  return config;
}

json scan_options(const Inputs& in) {
  return {{"rel_tol", in.rel_tol},
          {"k_cutoff", QuadratureOptions{}.k_cutoff},
          {"grid_size", in.grid_size},
          {"noise_fraction", IntervalOptions{}.noise_fraction},
          {"time_rel_tol", IntervalOptions{}.time_rel_tol},
          {"horizon", in.horizon}};
}

json command_options(const std::string& command, const Inputs& in, const PhysicalConfig& config) {
  json o = scan_options(in);
  o["seed"] = in.seed;
  if (command == "rate" || command == "decoherence") {
    o["t_max_s"] = in.t_max_ms ? *in.t_max_ms * 1e-3 : observation_window(config);
    o["points"] = in.points;
  } else if (command == "crossover") {
    o["tol_over_aRb"] = in.tol_over_arb;
  } else if (command == "sweep") {
    o["axis"] = in.axis;
    json values = json::array();
    for (const auto& v : in.values) {
      const double x = parse_number(v, "sweep value");
      values.push_back(in.axis == "a_B" ? x * constants::a_rb : x * 1e-9);
    }
    o["values"] = values;
  } else if (command == "spectrum") {
    o["omega_min_per_s"] = in.omega_min;
    o["omega_max_per_s"] = in.omega_max;
    o["points"] = in.points;
    o["fit_lo_per_s"] = in.fit_lo.value_or(in.omega_min);
    o["fit_hi_per_s"] = in.fit_hi.value_or(10.0 * in.omega_min);
  } else if (command == "toy") {
    o["s"] = in.s;
    o["omega_c"] = in.omega_c;
    o["critical"] = in.critical;
    o["tol"] = in.toy_tol;
    o["t_max"] = in.toy_t_max.value_or(ToyOptions{}.t_span / in.omega_c);
    o["points"] = in.points;
  } else if (command == "verify-pairs") {
    o["pairs"] = in.pairs;
  }
  return o;
}

QuadratureOptions quadrature_from(const json& o) {
  QuadratureOptions q;
  q.rel_tol = o.at("rel_tol").get<double>();
  q.k_cutoff = o.at("k_cutoff").get<double>();
  return q;
}

IntervalOptions intervals_from(const json& o) {
  IntervalOptions iv;
  iv.grid_size = o.at("grid_size").get<std::size_t>();
  iv.noise_fraction = o.at("noise_fraction").get<double>();
  iv.time_rel_tol = o.at("time_rel_tol").get<double>();
  iv.quadrature = quadrature_from(o);
  return iv;
}

HorizonPolicy horizon_from(const json& o) {
  const auto h = o.at("horizon").get<std::string>();
  if (h == "fixed") return HorizonPolicy::fixed;
  if (h == "adaptive") return HorizonPolicy::adaptive;
  throw ConfigError("unknown horizon policy '" + h + "'");
}

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }

// --- commands -------------------------------------------------------------

int cmd_rate(const RunManifest& m, CsvWriter& csv) {
  const auto& o = m.options;
  const auto model = make_model(m.config);
  const auto grid = uniform_grid(o.at("t_max_s").get<double>(), o.at("points").get<std::size_t>());
  const auto trace = rate_trace(model, grid, quadrature_from(o));
  csv.comment("quadrature_rel_tol " + num(trace.rel_tol));
  csv.header({"t_s", "gamma_per_s"});
  for (std::size_t i = 0; i < grid.size(); ++i) csv.row({num(trace.times[i]), num(trace.gamma[i])});
  return kOk;
}

int cmd_decoherence(const RunManifest& m, CsvWriter& csv) {
  const auto& o = m.options;
  const auto model = make_model(m.config);
  const auto grid = uniform_grid(o.at("t_max_s").get<double>(), o.at("points").get<std::size_t>());
  const auto trace = decoherence_trace(model, grid, quadrature_from(o));
  csv.comment("quadrature_rel_tol " + num(trace.rel_tol));
  csv.header({"t_s", "Gamma", "coherence"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row({num(trace.times[i]), num(trace.Gamma[i]), num(trace.coherence[i])});
  }
  return kOk;
}

int cmd_measure(const RunManifest& m, CsvWriter& csv, std::ostream& err) {
  const auto& o = m.options;
  const auto r = measure(m.config, horizon_from(o), intervals_from(o));
  for (std::size_t i = 0; i < r.intervals.size(); ++i) {
    const auto& iv = r.intervals[i];
    csv.comment("interval " + std::to_string(i) + " a_s=" + num(iv.a) + " b_s=" + num(iv.b) +
                " open_end=" + (iv.open_end ? "1" : "0"));
  }
  csv.header({"N", "N_blp", "regime", "t_max_used_s", "interval_count", "multiple_intervals",
              "Gamma_a", "Gamma_b", "rate_rel_tol"});
  const auto regime = r.intervals.empty() ? Regime::markovian : Regime::non_markovian;
  csv.row({num(r.N), num(r.N_blp), to_string(regime), num(r.t_max_used),
           num(r.intervals.size()), r.diagnostics.multiple_intervals ? "1" : "0",
           num(r.diagnostics.Gamma_a), num(r.diagnostics.Gamma_b),
           num(r.diagnostics.rate_rel_tol)});
  err << "N=" << num(r.N) << " N_blp=" << num(r.N_blp) << " intervals=" << r.intervals.size()
      << " t_max_used_s=" << num(r.t_max_used) << '\n';
  return kOk;
}

int cmd_crossover(const RunManifest& m, CsvWriter& csv) {
  const auto& o = m.options;
  CrossoverOptions opt;
  opt.tol = o.at("tol_over_aRb").get<double>() * constants::a_rb;
  opt.intervals = intervals_from(o);
  const auto r = find_crossover(m.config.dimension, m.config, opt);
  csv.header({"dimension", "a_crit_m", "a_crit_over_aRb", "bracket_lo_m", "bracket_hi_m",
              "evaluations"});
  csv.row({std::to_string(r.dimension), num(r.a_crit), num(r.a_crit_over_aRb),
           num(r.bracket[0]), num(r.bracket[1]), std::to_string(r.evaluations)});
  return kOk;
}

int cmd_sweep(const RunManifest& m, CsvWriter& csv) {
  const auto& o = m.options;
  const auto axis_name = o.at("axis").get<std::string>();
  SweepAxis axis;
  double to_cli = 1.0;
  const char* column = nullptr;
  if (axis_name == "a_B") {
    axis = SweepAxis::a_B;
    to_cli = 1.0 / constants::a_rb;
    column = "a_B_over_aRb";
  } else if (axis_name == "L") {
    axis = SweepAxis::L;
    to_cli = 1e9;
    column = "L_nm";
  } else {
    throw ConfigError("sweep axis must be a_B or L");
  }
  const auto values = o.at("values").get<std::vector<double>>();
  const auto table = sweep(axis, values, m.config, horizon_from(o), intervals_from(o));

  int code = kOk;
  csv.header({column, "N", "N_blp", "interval_count", "status", "error"});
  for (const auto& row : table.rows) {
    if (row.ok) {
      csv.row({num(row.value * to_cli), num(row.result.N), num(row.result.N_blp),
               num(row.result.intervals.size()), "ok", ""});
      continue;
    }
    csv.row({num(row.value * to_cli), "", "", "", "failed", row.error});
    const int row_code = row.failure == FailureKind::invalid_config   ? kInvalidConfig
                         : row.failure == FailureKind::no_convergence ? kNoConvergence
                                                                      : kFailure;
    if (code == kOk) code = row_code;
  }
  return code;
}

int cmd_spectrum(const RunManifest& m, CsvWriter& csv) {
  const auto& o = m.options;
  const auto model = make_model(m.config);
  const auto omegas = log_grid(o.at("omega_min_per_s").get<double>(),
                               o.at("omega_max_per_s").get<double>(),
                               o.at("points").get<std::size_t>());
  const FitWindow window{o.at("fit_lo_per_s").get<double>(), o.at("fit_hi_per_s").get<double>()};
  const auto profile = effective_spectral_density(model, omegas, window);
  csv.comment("s_fit " + num(profile.s_fit));
  csv.comment("fit_window_per_s " + num(profile.fit_window.lo) + " " + num(profile.fit_window.hi));
  csv.header({"omega_per_s", "J"});
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    csv.row({num(profile.omegas[i]), num(profile.J[i])});
  }
  return kOk;
}

int cmd_toy(const RunManifest& m, CsvWriter& csv) {
  const auto& o = m.options;
  ToyOptions opt;
  opt.rel_tol = o.at("rel_tol").get<double>();
  opt.grid_size = o.at("grid_size").get<std::size_t>();
  opt.noise_fraction = o.at("noise_fraction").get<double>();
  const double omega_c = o.at("omega_c").get<double>();
  if (o.at("critical").get<bool>()) {
    const double s_crit = toy_critical_s(omega_c, o.at("tol").get<double>(), opt);
    csv.header({"omega_c", "s_crit"});
    csv.row({num(omega_c), num(s_crit)});
    return kOk;
  }
  const ToyModel toy{o.at("s").get<double>(), omega_c};
  const auto times = uniform_grid(o.at("t_max").get<double>(), o.at("points").get<std::size_t>());
  const auto gamma = toy_trace(toy, times, opt);
  csv.comment("regime " + std::string(to_string(toy_classify(toy, opt))));
  csv.header({"t", "gamma"});
  for (std::size_t i = 0; i < times.size(); ++i) csv.row({num(times[i]), num(gamma[i])});
  return kOk;
}

int cmd_verify_pairs(const RunManifest& m, CsvWriter& csv) {
  constexpr double kExcessTol = 1e-9;
  const auto& o = m.options;
  const auto opt = intervals_from(o);
  const auto model = make_model(m.config);
  const double t_max = select_horizon(m.config, horizon_from(o), opt);
  const auto seed = o.at("seed").get<std::uint64_t>();
  const auto rep = verify_optimal_pair(model, t_max, o.at("pairs").get<std::size_t>(), seed, opt);
  const bool pass = rep.max_excess <= kExcessTol;
  csv.header({"pairs", "seed", "interval_count", "optimal_regain", "max_random_regain",
              "max_excess", "max_ratio", "status"});
  csv.row({num(rep.pairs), std::to_string(seed), num(rep.interval_count), num(rep.optimal_regain),
           num(rep.max_random_regain), num(rep.max_excess), num(rep.max_ratio),
           pass ? "pass" : "fail"});
  return pass ? kOk : kFailure;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << bytes;
  if (!f) throw ConfigError("write failed for " + path);
}

int emit(const RunManifest& manifest, const std::optional<std::string>& out_path,
         std::ostream& out, std::ostream& err) {
  std::ostringstream body;
  const int code = execute(manifest, body, err);
  if (!out_path) {
    out << body.str();
    return code;
  }
  write_file(*out_path, body.str());
  json sidecar = manifest.to_json();
  sidecar["digest"] = manifest.digest();
  sidecar["wall_clock"] = utc_timestamp();
  write_file(*out_path + ".manifest.json", sidecar.dump(2) + "\n");
  return code;
}

}  // namespace

int execute(const RunManifest& m, std::ostream& out, std::ostream& err) {
  try {
    CsvWriter csv(out);
    csv.comment(m.tool + " " + m.version + " " + m.command);
    csv.comment("manifest " + m.digest());
    const auto& c = m.command;
    if (c == "rate") return cmd_rate(m, csv);
    if (c == "decoherence") return cmd_decoherence(m, csv);
    if (c == "measure") return cmd_measure(m, csv, err);
    if (c == "crossover") return cmd_crossover(m, csv);
    if (c == "sweep") return cmd_sweep(m, csv);
    if (c == "spectrum") return cmd_spectrum(m, csv);
    if (c == "toy") return cmd_toy(m, csv);
    if (c == "verify-pairs") return cmd_verify_pairs(m, csv);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad manifest options: ") + e.what());
  }
  throw ConfigError("unknown command '" + m.command + "'");
}

int report_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const DomainError& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const ConvergenceError& e) {
    err << "error: no convergence: " << e.what() << " (achieved " << format_number(e.achieved())
        << ")\n";
    return kNoConvergence;
  } catch (const BracketError& e) {
    err << "error: bracket failure: " << e.what() << '\n';
    return kBracketFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Inputs in;
  CLI::App app{"Dephasing of an impurity qubit in a Bose-Einstein condensate"};
  app.name("becflow");
  app.require_subcommand(1);

  auto* rate = app.add_subcommand("rate", "Decay rate gamma(t)");
  auto* deco = app.add_subcommand("decoherence", "Decoherence function Gamma(t)");
  for (auto* sub : {rate, deco}) {
    add_common(*sub, in);
    sub->add_option("--t-max-ms", in.t_max_ms, "End of the time grid (ms)");
    sub->add_option("--points", in.points, "Number of grid points including t = 0")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  }

  auto* meas = app.add_subcommand("measure", "Non-Markovianity measure N");
  add_common(*meas, in);
  add_scan(*meas, in);

  auto* cross = app.add_subcommand("crossover", "Critical a_B between the two regimes");
  add_common(*cross, in);
  add_scan(*cross, in);
  cross->add_option("--tol-over-arb", in.tol_over_arb, "Bracket width in units of a_Rb")
      ->check(CLI::PositiveNumber);

  auto* sw = app.add_subcommand("sweep", "N along a_B (units of a_Rb) or L (nm)");
  add_common(*sw, in);
  add_scan(*sw, in);
  sw->add_option("--axis", in.axis, "a_B or L")->required()->check(CLI::IsMember({"a_B", "L"}));
  sw->add_option("--values", in.values, "Comma-separated increasing axis values")
      ->required()
      ->delimiter(',');

  auto* spec = app.add_subcommand("spectrum", "Effective spectral density J(omega)");
  add_common(*spec, in);
  spec->add_option("--omega-min", in.omega_min, "Lowest angular frequency (1/s)");
  spec->add_option("--omega-max", in.omega_max, "Highest angular frequency (1/s)");
  spec->add_option("--points", in.points, "Log-spaced grid points")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  spec->add_option("--fit-lo", in.fit_lo, "Fit window start (1/s), default omega-min");
  spec->add_option("--fit-hi", in.fit_hi, "Fit window end (1/s), default 10 omega-min");

  auto* toy = app.add_subcommand("toy", "Rate for J(w) = w^s exp(-w^2/wc^2)");
  add_common(*toy, in);
  toy->add_option("--s", in.s, "Ohmicity exponent");
  toy->add_option("--omega-c", in.omega_c, "Cut-off frequency");
  toy->add_option("--t-max", in.toy_t_max, "End of the time grid, default 60/omega_c");
  toy->add_option("--points", in.points, "Number of grid points including t = 0")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  toy->add_option("--grid-size", in.grid_size, "Classification scan intervals");
  toy->add_flag("--critical", in.critical, "Print the critical exponent instead of a trace");
  toy->add_option("--tol", in.toy_tol, "Bisection width on s (>= 1e-3)");

  auto* pairs = app.add_subcommand("verify-pairs", "Random pairs never beat the optimal pair");
  add_common(*pairs, in);
  add_scan(*pairs, in);
  pairs->add_option("--pairs", in.pairs, "Number of random pairs")
      ->check(CLI::Range(std::size_t{100}, std::size_t{100000000}));

  auto* replay = app.add_subcommand("replay", "Re-run a saved manifest");
  replay->add_option("--manifest", in.manifest_path, "Manifest JSON file")->required();
  replay->add_option("--out", in.out_path, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    RunManifest manifest;
    if (replay->parsed()) {
      std::ifstream f(in.manifest_path);
      if (!f) throw ConfigError("cannot open manifest " + in.manifest_path);
      json j;
      try {
        j = json::parse(f);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
      }
      manifest = manifest_from_json(j);
      if (manifest.tool != "becflow") throw ConfigError("manifest was not written by becflow");
      if (manifest.version != BECFLOW_VERSION) {
        err << "warning: manifest from version " << manifest.version << ", running "
            << BECFLOW_VERSION << '\n';
      }
      if (j.contains("digest") && j["digest"] != manifest.digest()) {
        throw ConfigError("manifest digest does not match its contents");
      }
    } else {
      const auto* sub = app.get_subcommands().front();
      manifest.version = BECFLOW_VERSION;
      manifest.command = sub->get_name();
      manifest.config = resolve_config(in, err);
      manifest.options = command_options(manifest.command, in, manifest.config);
    }
    return emit(manifest, in.out_path, out, err);
  } catch (...) {
    return report_exception(err);
  }
}

}  // namespace becflow::cli
