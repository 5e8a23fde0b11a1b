#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "cayley/hamiltonian.hpp"
#include "cayley/lattice.hpp"
#include "cayley/types.hpp"

namespace cayley {

/// Classical target Hamiltonian
///   E(s) = sum_{j<k} U_jk n_j n_k - (Delta_f / 2) sum_j sz_j
/// over basis configurations s.
struct IsingProblem {
  int num_atoms = 0;
  std::vector<PairCoupling> pairs;
  double delta_final = 0;
  /// Ties are resolved within tie_tolerance() of the minimum.
  double energy_scale = 1;

  double tie_tolerance() const { return 1e-12 * energy_scale; }
};

/// GraphIdeal: U on edges only. FullVdW: U (d / r_jk)^6 on every pair, `geo` required.
IsingProblem make_ising_problem(const TreeGraph& g, double edge_coupling, double delta_final,
                                CouplingMode mode = CouplingMode::GraphIdeal,
                                const Geometry* geo = nullptr);

double classical_energy(Bitstring config, const IsingProblem& problem);

struct GroundSet {
  double energy = 0;
  std::vector<Bitstring> configs;  // ascending

  std::size_t degeneracy() const { return configs.size(); }
};

/// Exhaustive minimisation over all 2^N configurations.
GroundSet brute_force_ground(const IsingProblem& problem);

inline constexpr int kMaxEnumerationAtoms = 26;

enum class PhaseLabel {
  I_AllDown,
  II_AllUp,
  III_ShellAlternating,
  IV_CentersUpUp,
  V_CentersDegenerate,
  Other,
};

const char* to_string(PhaseLabel label);

/// Valence shell up, alternating shell by shell toward the center.
Bitstring shell_alternating_config(const TreeGraph& g);

PhaseLabel classify_phase(const GroundSet& ground, const TreeGraph& g);

struct PhasePoint {
  double coupling = 0;  // U / Omega0
  double delta = 0;     // Delta_f / Omega0
  PhaseLabel label = PhaseLabel::Other;
  std::size_t degeneracy = 0;
  double energy = 0;    // units of Omega0
};

/// Classifies each (U, Delta_f) grid point, both given in units of Omega0.
std::vector<PhasePoint> phase_diagram(const TreeGraph& g,
                                      std::span<const std::pair<double, double>> grid,
                                      CouplingMode mode = CouplingMode::GraphIdeal,
                                      const Geometry* geo = nullptr);

struct LanczosOptions {
  int krylov_dim = 80;
  int max_restarts = 400;
  double tolerance = 1e-8;  // residual relative to the norm bound
};

struct EigenPair {
  double energy = 0;
  StateVector state;
  int iterations = 0;
  double residual = 0;
};

inline constexpr int kMaxExactDiagonalizationAtoms = 14;

/// Lowest eigenpair of H at frozen controls by restarted Lanczos.
EigenPair exact_ground_state(const RydbergHamiltonian& h, Controls c, const LanczosOptions& opts = {});

}  // namespace cayley
