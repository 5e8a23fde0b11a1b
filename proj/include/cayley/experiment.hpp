#pragma once

#include <string>
#include <vector>

#include "cayley/config.hpp"
#include "cayley/dynamics.hpp"
#include "cayley/groundstate.hpp"
#include "cayley/lattice.hpp"

namespace cayley {

enum class Subcommand { Geometry, PhaseDiagram, Anneal, Sample, Neel, Holo };

Subcommand parse_subcommand(const std::string& name);
const char* to_string(Subcommand s);

/// Throws TooLarge when the configured problem exceeds the subcommand's budget.
void check_budget(const ExperimentConfig& cfg, Subcommand s);

inline constexpr int kMaxStateVectorAtoms = 24;
inline constexpr double kMaxPhaseDiagramWork = 2147483648.0;  // grid points * 2^N

struct AnnealRun {
  CayleyTree tree;
  GroundSet ground;
  EvolutionResult result;
  bool noisy = false;
};

/// Three-stage anneal from all-down; trajectories when noise is enabled.
AnnealRun run_anneal(const ExperimentConfig& cfg, bool keep_states = false);

/// Grid points of the phase-diagram section, in units of Omega0.
std::vector<std::pair<double, double>> phase_diagram_points(const ExperimentConfig& cfg);

/// Targets of the holography section.
std::vector<Vec3> holography_targets(const ExperimentConfig& cfg);

/// Writes the subcommand's artifacts into cfg.output_dir and returns their paths.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg, Subcommand s);

}  // namespace cayley
