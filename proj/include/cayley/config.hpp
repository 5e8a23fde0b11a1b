#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cayley/dynamics.hpp"
#include "cayley/hamiltonian.hpp"
#include "cayley/holography.hpp"
#include "cayley/lattice.hpp"
#include "cayley/measurement.hpp"
#include "cayley/schedule.hpp"

namespace cayley {

/// Frequencies in MHz with the 2 pi implied (noise rates follow
/// NoiseConfig::convention), lengths in µm, times in µs.
struct GraphConfig {
  std::string kind = "G10";  // G10, G22, G14, regular, dual
  int branching = 3;
  int shells = 3;
  Layout layout = Layout::Planar;
  double coupling = 1.82;               // U / Omega0 on edges
  std::optional<double> edge_length;    // µm; overrides `coupling` when set

  friend bool operator==(const GraphConfig&, const GraphConfig&) = default;
};

struct ConstantsConfig {
  double c6_mhz_um6 = 1.004e6;
  double omega0_mhz = 1.1;

  friend bool operator==(const ConstantsConfig&, const ConstantsConfig&) = default;
};

struct ScheduleConfig {
  double t_final_us = 3.2 / 1.1;
  double omega_max_mhz = 1.1;
  double delta_initial_mhz = -2.2;
  double delta_final_mhz = 2.2;
  double ramp_fraction = 0.1;
  RampShape shape = RampShape::Linear;
  int samples = 201;

  friend bool operator==(const ScheduleConfig&, const ScheduleConfig&) = default;
};

enum class NoiseConvention { Rate, Linewidth };

/// Rate: gamma = value in 1/µs. Linewidth: gamma = 2 pi value.
struct NoiseConfig {
  bool enabled = true;
  double individual_mhz = 0.036;
  double collective_mhz = 0.003;
  NoiseConvention convention = NoiseConvention::Rate;
  int trajectories = 2000;

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

struct SpamConfig {
  bool enabled = true;
  double p_down_given_up = 0.18;
  double p_up_given_down = 0.02;

  friend bool operator==(const SpamConfig&, const SpamConfig&) = default;
};

struct AxisConfig {
  double start = 0;
  double stop = 0;
  int count = 1;

  std::vector<double> values() const;

  friend bool operator==(const AxisConfig&, const AxisConfig&) = default;
};

struct PhaseDiagramConfig {
  /// Explicit (U / Omega0, Delta_f / Omega0) probes; empty means the full grid.
  std::vector<std::pair<double, double>> points;
  AxisConfig coupling{0.1, 4.0, 40};
  AxisConfig delta{-1.0, 8.0, 37};

  friend bool operator==(const PhaseDiagramConfig&, const PhaseDiagramConfig&) = default;
};

struct HoloConfig {
  int width = 512;
  int height = 512;
  double pitch_um = 15.0;
  double focal_length_um = 4000.0;
  double wavelength_um = 0.82;
  int iterations = 5;
  /// Explicit sites; when empty, `random_targets` sites are drawn in a cube
  /// of half-width extent_um, or the graph's atom positions are used.
  std::vector<Vec3> targets;
  int random_targets = 0;
  double extent_um = 60.0;

  friend bool operator==(const HoloConfig&, const HoloConfig&) = default;
};

struct ExperimentConfig {
  std::string name = "custom";
  int preset = 0;
  std::optional<double> reference_d_over_rb;
  GraphConfig graph;
  ConstantsConfig constants;
  ScheduleConfig schedule;
  NoiseConfig noise;
  SpamConfig spam;
  PhaseDiagramConfig phase_diagram;
  HoloConfig holography;
  CouplingMode mode = CouplingMode::GraphIdeal;
  std::uint64_t shots = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string output_dir = "out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Circled parameter points 1..5.
ExperimentConfig preset(int index);
std::vector<ExperimentConfig> presets();

/// Throws Config on malformed input or unknown keys.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

/// Derived quantities in library units.
PhysicalConstants physical_constants(const ExperimentConfig& cfg);
double edge_coupling(const ExperimentConfig& cfg);   // rad/µs
double edge_length(const ExperimentConfig& cfg);     // µm
CayleyTree build_tree(const ExperimentConfig& cfg);
Schedule build_schedule(const ExperimentConfig& cfg);
NoiseModel build_noise(const ExperimentConfig& cfg);
SpamModel build_spam(const ExperimentConfig& cfg);
SlmPlane build_plane(const ExperimentConfig& cfg);

/// Atom count the graph section describes, without building it.
int graph_size(const GraphConfig& g);

}  // namespace cayley
