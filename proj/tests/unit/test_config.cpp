#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "cayley/config.hpp"
#include "cayley/error.hpp"
#include "cayley/experiment.hpp"

using namespace cayley;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cayley_unit_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("presets") {
  const auto all = presets();
  REQUIRE(all.size() == 5);
  const double u[] = {1.82, 2.25, 1.67, 2.70, 5.41};
  const char* graph[] = {"G10", "G22", "G14", "G14", "G14"};
  for (int i = 0; i < 5; ++i) {
    CHECK(all[i].graph.coupling == u[i]);
    CHECK(all[i].graph.kind == graph[i]);
    CHECK(all[i].schedule.delta_final_mhz / all[i].constants.omega0_mhz == doctest::Approx(2.0));
    const double rb = blockade_radius(physical_constants(all[i]));
    CHECK(edge_length(all[i]) / rb == doctest::Approx(std::pow(u[i], -1.0 / 6)));
  }
  CHECK(all[0].shots == 672);
  CHECK(all[1].shots == 2208);
  CHECK(all[2].shots == 5113);
  CHECK(edge_length(all[4]) / blockade_radius(physical_constants(all[4])) == doctest::Approx(0.755).epsilon(1e-3));
  CHECK(edge_length(all[2]) / blockade_radius(physical_constants(all[2])) == doctest::Approx(0.918).epsilon(1e-3));
  CHECK(*all[3].reference_d_over_rb == 0.86);
  CHECK_THROWS_AS(preset(6), Error);
}

TEST_CASE("JSON round trip") {
  for (auto cfg : presets()) {
    cfg.phase_diagram.points = {{0.1, 0.2}, {1.0 / 3.0, -2.5}};
    cfg.holography.targets = {{1.5, -2.25, 1e-7}};
    cfg.graph.edge_length = 7.123456789012345;
    cfg.seed = 18446744073709551615ULL;
    const std::string text = config_to_json(cfg);
    const auto back = config_from_json(text);
    CHECK(back == cfg);
    CHECK(config_to_json(back) == text);
  }
  const auto d = config_from_json("{}");
  CHECK(d == ExperimentConfig{});
}

TEST_CASE("config validation") {
  const auto code = [](const std::string& text) {
    try {
      config_from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code(R"({"bogus": 1})") == ErrorCode::Config);
  CHECK(code(R"({"graph": {"kind": "G99"}})") == ErrorCode::Config);
  CHECK(code(R"({"graph": {"coupling": "x"}})") == ErrorCode::Config);
  CHECK(code(R"({"spam": {"p_down_given_up": 2}})") == ErrorCode::Config);
  CHECK(code(R"({"noise": {"convention": "half"}})") == ErrorCode::Config);
  CHECK(code("not json") == ErrorCode::Config);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), Error);
}

TEST_CASE("noise conventions") {
  ExperimentConfig c;
  CHECK(build_noise(c).individual == doctest::Approx(0.036));
  c.noise.convention = NoiseConvention::Linewidth;
  CHECK(build_noise(c).individual == doctest::Approx(kTwoPi * 0.036));
  c.noise.enabled = false;
  CHECK(!build_noise(c).active());
}

TEST_CASE("budgets") {
  auto g22 = preset(2);
  g22.noise.enabled = true;
  CHECK_THROWS_AS(check_budget(g22, Subcommand::Anneal), Error);
  g22.noise.enabled = false;
  CHECK_NOTHROW(check_budget(g22, Subcommand::Anneal));
  g22.phase_diagram.coupling.count = 100;
  g22.phase_diagram.delta.count = 100;
  CHECK_THROWS_AS(check_budget(g22, Subcommand::PhaseDiagram), Error);
  CHECK(graph_size(preset(3).graph) == 14);
  GraphConfig reg;
  reg.kind = "regular";
  reg.shells = 4;
  CHECK(graph_size(reg) == 22);
  CHECK(parse_subcommand("phase-diagram") == Subcommand::PhaseDiagram);
  CHECK_THROWS_AS(parse_subcommand("fly"), Error);
}

TEST_CASE("phase-diagram probe and geometry artifacts") {
  auto cfg = preset(1);
  cfg.output_dir = scratch("pd").string();
  cfg.phase_diagram.points = {{1, -1}, {1, 1}, {0.2, 1}};
  run_experiment(cfg, Subcommand::PhaseDiagram);
  const std::string csv = slurp(fs::path(cfg.output_dir) / "phase_diagram.csv");
  CHECK(csv ==
        "U_over_Omega0,Delta_over_Omega0,label,degeneracy,energy\n"
        "1,-1,I,1,-5\n"
        "1,1,III,1,-2\n"
        "0.2,1,II,1,-3.2\n");

  auto g = preset(2);
  g.output_dir = scratch("geo").string();
  const auto files = run_experiment(g, Subcommand::Geometry);
  CHECK(files.size() == 2);
  const std::string report = slurp(fs::path(g.output_dir) / "validation.json");
  CHECK(report.find("\"nonedge_distance_ok\": true") != std::string::npos);
}

TEST_CASE("holography targets") {
  ExperimentConfig c;
  CHECK(holography_targets(c).size() == 10);
  c.holography.random_targets = 7;
  CHECK(holography_targets(c).size() == 7);
  c.holography.targets = {{1, 2, 3}};
  CHECK(holography_targets(c).size() == 1);
}
