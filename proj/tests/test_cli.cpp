#include <becflow/analysis.hpp>
#include <becflow/constants.hpp>
#include <becflow/spectral.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "app.hpp"
#include "csv.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace becflow;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "becflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> r;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) r.push_back(l);
  return r;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> r;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) r.push_back(cell);
  if (!line.empty() && line.back() == ',') r.push_back("");
  return r;
}

// Header and data rows, comments dropped.
std::vector<std::vector<std::string>> table(const std::string& text) {
  std::vector<std::vector<std::string>> r;
  for (const auto& l : lines(text)) {
    if (!l.empty() && l[0] != '#') r.push_back(split(l));
  }
  return r;
}

double to_double(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  REQUIRE(res.ec == std::errc{});
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("becflow_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

const std::vector<std::string> kShortRate = {"rate", "--t-max-ms", "0.05", "--points", "6"};

}  // namespace

TEST_CASE("rate output") {
  const auto r = run_cli(kShortRate);
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() >= 4);
  CHECK(ls[0] == "# becflow " BECFLOW_VERSION " rate");
  CHECK(ls[1].rfind("# manifest fnv1a64:", 0) == 0);
  CHECK(ls[1].size() == std::string("# manifest fnv1a64:").size() + 16);

  const auto t = table(r.out);
  REQUIRE(t.size() == 7);
  CHECK(t[0] == std::vector<std::string>{"t_s", "gamma_per_s"});
  CHECK(t[1] == std::vector<std::string>{"0", "0"});

  // Values agree with the library at the printed precision.
  const auto model = make_model(default_config());
  for (std::size_t i = 2; i < t.size(); ++i) {
    const double ts = to_double(t[i][0]);
    CHECK(ts == doctest::Approx(0.05e-3 * (i - 1) / 5.0).epsilon(1e-11));
    CHECK(to_double(t[i][1]) == doctest::Approx(rate(model, ts)).epsilon(1e-10));
  }
}

TEST_CASE("decoherence output") {
  const auto r = run_cli({"decoherence", "--t-max-ms", "0.05", "--points", "3", "--dimension", "2"});
  REQUIRE(r.code == 0);
  const auto t = table(r.out);
  CHECK(t[0] == std::vector<std::string>{"t_s", "Gamma", "coherence"});
  REQUIRE(t.size() == 4);
  auto p = default_config();
  p.dimension = 2;
  const double G = decoherence(make_model(p), 0.05e-3);
  CHECK(to_double(t[3][1]) == doctest::Approx(G).epsilon(1e-10));
  CHECK(to_double(t[3][2]) == doctest::Approx(std::exp(-G)).epsilon(1e-10));
}

TEST_CASE("configuration precedence") {
  TempDir dir;
  const auto cfg = dir.path / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "dimension=1\nL_nm=60\n";
  }
  // File over defaults, flags over the file.
  const auto a = run_cli({"rate", "--t-max-ms", "0.02", "--points", "2", "--config", cfg.string(),
                          "--out", (dir.path / "a.csv").string()});
  const auto b = run_cli({"rate", "--t-max-ms", "0.02", "--points", "2", "--config", cfg.string(),
                          "--l-nm", "80", "--out", (dir.path / "b.csv").string()});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  const auto ja = nlohmann::json::parse(slurp(dir.path / "a.csv.manifest.json"));
  const auto jb = nlohmann::json::parse(slurp(dir.path / "b.csv.manifest.json"));
  CHECK(ja["config"]["dimension"] == 1);
  CHECK(ja["config"]["L_m"].get<double>() == doctest::Approx(60e-9));
  CHECK(jb["config"]["dimension"] == 1);
  CHECK(jb["config"]["L_m"].get<double>() == doctest::Approx(80e-9));

  auto p = default_config();
  p.dimension = 1;
  p.L = 80e-9;
  const auto t = table(slurp(dir.path / "b.csv"));
  CHECK(to_double(t[2][1]) == doctest::Approx(rate(make_model(p), 0.02e-3)).epsilon(1e-10));
}

TEST_CASE("exit codes") {
  SUBCASE("invalid configuration") {
    CHECK(run_cli({"rate", "--dimension", "4"}).code == cli::kInvalidConfig);
    CHECK(run_cli({"rate", "--a-b-nm", "1", "--a-b-over-arb", "1"}).code == cli::kInvalidConfig);
    CHECK(run_cli({"rate", "--config", "/nonexistent/x.cfg"}).code == cli::kInvalidConfig);
    CHECK(run_cli({"rate", "--bogus-flag"}).code == cli::kInvalidConfig);
    CHECK(run_cli({"sweep", "--axis", "L", "--values", "50,50"}).code == cli::kInvalidConfig);
    CHECK(run_cli({"sweep", "--axis", "L", "--values", "75,50"}).code == cli::kInvalidConfig);
    CHECK(run_cli({"toy", "--critical", "--tol", "1e-5"}).code == cli::kInvalidConfig);
    const auto r = run_cli({"rate", "--n0", "-1"});
    CHECK(r.code == cli::kInvalidConfig);
    CHECK(r.err.find("invalid configuration") != std::string::npos);
  }
  SUBCASE("no convergence") {
    const auto r = run_cli({"rate", "--t-max-ms", "0.05", "--points", "3", "--rel-tol", "1e-30"});
    CHECK(r.code == cli::kNoConvergence);
    CHECK(r.err.find("achieved") != std::string::npos);
  }
  SUBCASE("bracket failure") {
    CHECK(run_cli({"crossover", "--t-obs-ms", "0.02", "--tol-over-arb", "0.1"}).code ==
          cli::kBracketFailure);
  }
  SUBCASE("failed sweep rows") {
    // 200 a_Rb is far outside the dilute regime.
    const auto r = run_cli({"sweep", "--axis", "a_B", "--values", "0.01,200"});
    CHECK(r.code == cli::kInvalidConfig);
    const auto t = table(r.out);
    REQUIRE(t.size() == 3);
    CHECK(t[0] == std::vector<std::string>{"a_B_over_aRb", "N", "N_blp", "interval_count",
                                           "status", "error"});
    CHECK(t[1][4] == "ok");
    CHECK(t[1][1] == "0");
    CHECK(t[2][4] == "failed");
  }
  CHECK(run_cli({"--help"}).code == cli::kOk);
}

TEST_CASE("reproducible output and replay") {
  TempDir dir;
  const auto out1 = dir.path / "one.csv";
  const auto out2 = dir.path / "two.csv";
  auto args = kShortRate;
  args.insert(args.end(), {"--seed", "7", "--out", out1.string()});
  REQUIRE(run_cli(args).code == 0);
  args.back() = out2.string();
  REQUIRE(run_cli(args).code == 0);
  CHECK(slurp(out1) == slurp(out2));

  const auto sidecar = nlohmann::json::parse(slurp(out1.string() + ".manifest.json"));
  CHECK(sidecar.contains("wall_clock"));
  const auto digest = sidecar["digest"].get<std::string>();
  CHECK(lines(slurp(out1))[1] == "# manifest " + digest);
  CHECK(sidecar["command"] == "rate");
  CHECK(sidecar["options"]["seed"] == 7);

  // Output without --out is the same file body.
  auto stdout_args = kShortRate;
  stdout_args.insert(stdout_args.end(), {"--seed", "7"});
  CHECK(run_cli(stdout_args).out == slurp(out1));

  const auto replayed = dir.path / "replayed.csv";
  REQUIRE(run_cli({"replay", "--manifest", out1.string() + ".manifest.json", "--out",
                   replayed.string()})
              .code == 0);
  CHECK(slurp(replayed) == slurp(out1));

  // A different seed is a different run.
  args = kShortRate;
  args.insert(args.end(), {"--seed", "8"});
  CHECK(lines(run_cli(args).out)[1] != "# manifest " + digest);

  // Tampered manifests are rejected.
  auto tampered = sidecar;
  tampered["config"]["L_m"] = 1e-7;
  {
    std::ofstream f(dir.path / "bad.json");
    f << tampered.dump();
  }
  CHECK(run_cli({"replay", "--manifest", (dir.path / "bad.json").string()}).code ==
        cli::kInvalidConfig);
}

TEST_CASE("measure output") {
  const auto r = run_cli({"measure", "--a-b-over-arb", "1"});
  REQUIRE(r.code == 0);
  const auto t = table(r.out);
  REQUIRE(t.size() == 2);
  CHECK(t[0] == std::vector<std::string>{"N", "N_blp", "regime", "t_max_used_s", "interval_count",
                                         "multiple_intervals", "Gamma_a", "Gamma_b",
                                         "rate_rel_tol"});
  auto p = default_config();
  p.a_B = constants::a_rb;
  const auto direct = measure(p);
  CHECK(to_double(t[1][0]) == doctest::Approx(direct.N).epsilon(1e-10));
  CHECK(t[1][2] == "non_markovian");
  CHECK(r.out.find("# interval 0 a_s=") != std::string::npos);
  CHECK(r.err.find("N=") != std::string::npos);
}

TEST_CASE("toy, spectrum and pair commands") {
  SUBCASE("toy trace") {
    const auto r = run_cli({"toy", "--s", "3", "--points", "5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# regime non_markovian") != std::string::npos);
    const auto t = table(r.out);
    CHECK(t[0] == std::vector<std::string>{"t", "gamma"});
    CHECK(to_double(t[5][0]) == doctest::Approx(60.0));
  }
  SUBCASE("toy critical exponent") {
    const auto r = run_cli({"toy", "--critical", "--omega-c", "10", "--tol", "0.01"});
    REQUIRE(r.code == 0);
    const auto t = table(r.out);
    CHECK(t[0] == std::vector<std::string>{"omega_c", "s_crit"});
    CHECK(to_double(t[1][1]) == doctest::Approx(2.0).epsilon(0.01));
  }
  SUBCASE("spectrum") {
    const auto r = run_cli({"spectrum", "--omega-min", "1e2", "--omega-max", "1e4", "--points", "9"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# s_fit ") != std::string::npos);
    CHECK(r.out.find("# fit_window_per_s 100 1000") != std::string::npos);
    const auto t = table(r.out);
    REQUIRE(t.size() == 10);
    CHECK(t[0] == std::vector<std::string>{"omega_per_s", "J"});
    const auto model = make_model(default_config());
    CHECK(to_double(t[5][1]) ==
          doctest::Approx(effective_spectral_density(model, 1e3)).epsilon(1e-9));
  }
  SUBCASE("verify-pairs") {
    const auto r = run_cli({"verify-pairs", "--pairs", "200", "--a-b-over-arb", "1"});
    REQUIRE(r.code == 0);
    const auto t = table(r.out);
    CHECK(t[0].back() == "status");
    CHECK(t[1][0] == "200");
    CHECK(t[1].back() == "pass");
    CHECK(to_double(t[1][5]) <= 1e-9);
  }
}

TEST_CASE("number formatting") {
  CHECK(cli::format_number(0.0) == "0");
  CHECK(cli::format_number(1.5e-3) == "0.0015");
  CHECK(cli::escape_field("a,b") == "\"a,b\"");
  CHECK(cli::escape_field("say \"x\"") == "\"say \"\"x\"\"\"");
  CHECK(cli::escape_field("plain") == "plain");
}
