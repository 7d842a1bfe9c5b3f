#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qgem/io.hpp"
#include "qgem/sweep.hpp"

using namespace qgem;

namespace {

std::string cli_path() {
#ifdef QGEM_CLI_PATH
  return QGEM_CLI_PATH;
#else
  const char* path = std::getenv("QGEM_CLI_PATH");
  REQUIRE(path != nullptr);
  return path;
#endif
}

int run_cli(const std::string& arguments, const std::string& out_dir) {
  const std::string command = "QGEM_OUT_DIR=" + out_dir + " " + cli_path() +
                              " " + arguments + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string temp_dir(const std::string& tag) {
  const std::string dir = "qgem_cli_" + tag;
  const int status =
      std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
  REQUIRE(status == 0);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// every line except the volatile timestamp header
std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# timestamp", 0) != 0) out << line << '\n';
  return out.str();
}

}  // namespace

TEST_CASE("quantities accept the unit suffixes") {
  CHECK(parse_quantity("250um") == doctest::Approx(250e-6).epsilon(1e-14));
  CHECK(parse_quantity("0.2mm") == doctest::Approx(200e-6).epsilon(1e-14));
  CHECK(parse_quantity("200nm") == doctest::Approx(200e-9).epsilon(1e-14));
  CHECK(parse_quantity("2.5s") == doctest::Approx(2.5));
  CHECK(parse_quantity("1500ms") == doctest::Approx(1.5));
  CHECK(parse_quantity("75mHz") == doctest::Approx(0.075));
  CHECK(parse_quantity("2kHz") == doctest::Approx(2000.0));
  CHECK(parse_quantity("1e-14kg") == doctest::Approx(1e-14));
  CHECK(parse_quantity("10ug") == doctest::Approx(1e-8));
  CHECK(parse_quantity("4.712rad") == doctest::Approx(4.712));
  CHECK(parse_quantity("  3.5 ") == doctest::Approx(3.5));
  CHECK_THROWS_AS(parse_quantity("12parsec"), std::invalid_argument);
  CHECK_THROWS_AS(parse_quantity("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_quantity(""), std::invalid_argument);
}

TEST_CASE("doubles survive a text round trip unchanged") {
  for (const double value : {0.1, 1.0 / 3.0, 1e-14, 6.674e-11, kPi, -2.5e8,
                             0.0}) {
    const std::string text = format_double(value);
    CHECK(std::strtod(text.c_str(), nullptr) == value);
  }
}

TEST_CASE("configurations survive a json round trip") {
  ExperimentConfig config = ExperimentConfig::preset(Setup::linear, 5);
  config.decoherence_rate = 0.0375;
  config.mass_2 = 2e-14;
  const std::string text = config_to_json_text(config);
  const ExperimentConfig loaded = config_from_json_text(text);
  CHECK(loaded.dimension == 5);
  CHECK(loaded.theta_1 == doctest::Approx(config.theta_1).epsilon(1e-15));
  CHECK(loaded.theta_2 == doctest::Approx(config.theta_2).epsilon(1e-15));
  CHECK(loaded.decoherence_rate == doctest::Approx(0.0375).epsilon(1e-15));
  CHECK(loaded.mass_2 == doctest::Approx(2e-14).epsilon(1e-15));
  CHECK(loaded.superposition_width ==
        doctest::Approx(config.superposition_width).epsilon(1e-15));
}

TEST_CASE("setup presets apply before explicit keys") {
  const ExperimentConfig config = config_from_json_text(
      R"({"setup": "linear", "dimension": 3, "hold_time": 1.25})");
  CHECK(config.theta_1 == 0.0);
  CHECK(config.theta_2 == 0.0);
  CHECK(config.dimension == 3);
  CHECK(config.hold_time == doctest::Approx(1.25));
}

TEST_CASE("config errors name the offending key") {
  try {
    config_from_json_text(R"({"frobnicate": 1})");
    FAIL("expected rejection");
  } catch (const ConfigError& error) {
    CHECK(error.field() == "frobnicate");
  }
  try {
    config_from_json_text(R"({"dimension": 2.5})");
    FAIL("expected rejection");
  } catch (const ConfigError& error) {
    CHECK(error.field() == "dimension");
  }
  CHECK_THROWS_AS(config_from_json_text(R"({"dimension": 1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("[1,2]"), ConfigError);
}

TEST_CASE("manifests survive a json round trip") {
  RunManifest manifest;
  manifest.subcommand = "deco-sweep";
  manifest.seed = 123456789012345ull;
  manifest.config = ExperimentConfig::preset(Setup::parallel, 3);
  manifest.options = {{"dims", "2,3"}, {"grid_points", "31"}};
  manifest.outputs = {"deco_sweep.csv"};
  const std::string text = manifest_to_json_text(manifest);
  const RunManifest loaded = manifest_from_json_text(text);
  CHECK(loaded.subcommand == "deco-sweep");
  CHECK(loaded.seed == manifest.seed);
  CHECK(loaded.config.dimension == 3);
  REQUIRE(loaded.options.size() == 2);
  CHECK(loaded.options[0].first == "dims");
  CHECK(loaded.options[0].second == "2,3");
  CHECK(loaded.options[1].first == "grid_points");
  CHECK(loaded.outputs == manifest.outputs);
  CHECK(loaded.tool_version == kToolVersion);
}

TEST_CASE("csv tables serialize deterministically") {
  SweepTable table;
  table.columns = {"a", "b"};
  table.rows = {{1.0, 0.5}, {2.0, 1.0 / 3.0}};
  HeaderBlock header = {{"subcommand", "demo"}, {"seed", "7"}};

  std::ostringstream first, second;
  write_table_csv(table, header, first);
  write_table_csv(table, header, second);
  CHECK(first.str() == second.str());
  CHECK(first.str().find("# subcommand = demo\n") != std::string::npos);
  CHECK(first.str().find("a,b\n") != std::string::npos);

  SweepTable ragged = table;
  ragged.rows.push_back({1.0});
  std::ostringstream sink;
  CHECK_THROWS_AS(write_table_csv(ragged, header, sink), std::logic_error);
}

TEST_CASE("cli runs the entropy sweep and writes the manifest") {
  const std::string dir = temp_dir("entropy");
  CHECK(run_cli("entropy --setup parallel --grid-points 6", dir) == 0);
  const std::string csv = slurp(dir + "/entropy.csv");
  CHECK(csv.find("# tool_version = " + std::string(kToolVersion)) !=
        std::string::npos);
  CHECK(csv.find("tau_s,D,entropy_bits") != std::string::npos);
  const std::string manifest_text = slurp(dir + "/entropy_manifest.json");
  const RunManifest manifest = manifest_from_json_text(manifest_text);
  CHECK(manifest.subcommand == "entropy");
  CHECK(manifest.outputs == std::vector<std::string>{"entropy.csv"});
}

TEST_CASE("cli rejects bad configuration with exit code two") {
  const std::string dir = temp_dir("badcfg");
  CHECK(run_cli("entropy --setup parallel --dimension 1", dir) == 2);
  CHECK(run_cli("entropy --no-such-flag", dir) == 2);
  CHECK(run_cli("simulate --shots 100", dir) == 2);  // seed is mandatory
  CHECK(run_cli("simulate --seed 1", dir) == 2);     // no budget either
  CHECK(run_cli("frobnicate", dir) == 2);
}

TEST_CASE("cli reports numerical failures with exit code three") {
  const std::string dir = temp_dir("numfail");
  CHECK(run_cli("witness --setup parallel --tau 0", dir) == 3);
}

TEST_CASE("cli witness run emits the single-point summary") {
  const std::string dir = temp_dir("witness");
  CHECK(run_cli("witness --setup parallel", dir) == 0);
  const std::string csv = slurp(dir + "/witness.csv");
  CHECK(csv.find("tau_s,gamma_hz,D,expectation,negative_eigenvalue,"
                 "schmidt_max") != std::string::npos);
}

TEST_CASE("cli decompose and group write the term tables") {
  const std::string dir = temp_dir("terms");
  CHECK(run_cli("decompose --setup parallel --dimension 3", dir) == 0);
  const std::string decompose_text = slurp(dir + "/witness_terms.json");
  CHECK(decompose_text.find("\"terms\"") != std::string::npos);
  CHECK(decompose_text.find("\"groups\"") == std::string::npos);

  CHECK(run_cli("group --setup parallel --dimension 3", dir) == 0);
  const std::string grouped_text = slurp(dir + "/witness_terms.json");
  CHECK(grouped_text.find("\"groups\"") != std::string::npos);
}

TEST_CASE("simulate runs are reproducible and replayable byte for byte") {
  const std::string dir_a = temp_dir("sim_a");
  const std::string arguments =
      "simulate --setup parallel --shots 400 --reps 12 --seed 99";
  CHECK(run_cli(arguments, dir_a) == 0);

  // identical invocation reproduces identical bytes
  const std::string dir_b = temp_dir("sim_b");
  CHECK(run_cli(arguments, dir_b) == 0);
  CHECK(without_timestamp(slurp(dir_a + "/confidence.csv")) ==
        without_timestamp(slurp(dir_b + "/confidence.csv")));
  CHECK(without_timestamp(slurp(dir_a + "/trial.json")) ==
        without_timestamp(slurp(dir_b + "/trial.json")));

  // replaying the manifest reproduces the csv body as well
  const std::string dir_c = temp_dir("sim_c");
  CHECK(run_cli("replay --manifest " + dir_a + "/simulate_manifest.json",
                dir_c) == 0);
  CHECK(without_timestamp(slurp(dir_a + "/confidence.csv")) ==
        without_timestamp(slurp(dir_c + "/confidence.csv")));
}

TEST_CASE("confidence csv carries the aggregate columns") {
  const std::string dir = temp_dir("columns");
  CHECK(run_cli("simulate --setup parallel --budget-min 100 --budget-max 200 "
                "--points-per-decade 5 --reps 5 --seed 4",
                dir) == 0);
  const std::string csv = slurp(dir + "/confidence.csv");
  CHECK(csv.find("M,mean_confidence,std_confidence,W_mean,s_W_mean,mode,D,"
                 "gamma,tau,seed") != std::string::npos);
}
