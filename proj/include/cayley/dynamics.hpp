#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cayley/hamiltonian.hpp"
#include "cayley/lattice.hpp"
#include "cayley/schedule.hpp"
#include "cayley/types.hpp"

namespace cayley {

using DensityMatrix = Eigen::MatrixXcd;

/// Dephasing channels: sqrt(individual) n_j for every atom and
/// sqrt(collective) sum_j n_j. Rates in 1/µs; the defaults read the quoted
/// 36 kHz and 3 kHz as plain rates.
struct NoiseModel {
  double individual = 0.036;
  double collective = 0.003;

  static NoiseModel none() { return {0.0, 0.0}; }
  /// Quoted values taken as linewidths, gamma = 2 pi f.
  static NoiseModel from_linewidths(double individual_mhz, double collective_mhz) {
    return {kTwoPi * individual_mhz, kTwoPi * collective_mhz};
  }
  bool active() const { return individual > 0 || collective > 0; }
};

struct StepPiece {
  double t0 = 0;
  double dt = 0;
  int count = 0;
};

/// Uniform steps no longer than max_step covering [t0, t1], split at schedule knots.
std::vector<StepPiece> plan_steps(const Schedule& schedule, double t0, double t1, double max_step);

/// Heuristic step for the split-step propagator: the inverse of the largest
/// drive, detuning and per-atom interaction scale along the schedule.
double default_max_step(const RydbergHamiltonian& h, const Schedule& schedule);

/// Fourth-order (Yoshida-composed Strang) split-step propagator. The diagonal
/// part (interactions, detuning and the non-Hermitian dephasing term) and the
/// transverse drive are each exponentiated exactly; controls are frozen at
/// sub-step midpoints. With an active NoiseModel it propagates under
/// H_eff = H - (i/2) sum L^dag L, so the norm decays. Jump operators are
/// L_j = sqrt(gamma) (n_j - 1/2) and L_c = sqrt(gamma_c) (sum_j n_j - N/2);
/// they give the same master equation as sqrt(gamma) n_j and sqrt(gamma_c) sum_j n_j.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const RydbergHamiltonian& h, const Schedule& schedule,
                      NoiseModel damping = NoiseModel::none());

  /// One step of length dt starting at t.
  void step(std::span<cplx> psi, double t, double dt);

  /// Advances from t0 to t1 with uniform steps no longer than max_step inside
  /// each interval between schedule knots. Returns the number of steps taken.
  int advance(std::span<cplx> psi, double t0, double t1, double max_step);

 private:
  void apply_diagonal(std::span<cplx> psi, double tau, double delta_tau);
  void rotate_x(std::span<cplx> psi, double theta);
  const std::vector<cplx>& interaction_phases(double tau);

  const RydbergHamiltonian& h_;
  const Schedule& schedule_;
  NoiseModel damping_;
  struct PhaseCache {
    double tau;
    std::vector<cplx> phases;
  };
  std::vector<PhaseCache> cache_;
};

/// Accuracy contract: the run is repeated with halved steps until the final
/// states of consecutive runs differ in fidelity by less than fidelity_tolerance.
struct StepControl {
  double max_step = 0;  // µs; 0 picks a step from the Hamiltonian's scales
  bool verify = true;
  double fidelity_tolerance = 1e-8;
  int max_refinements = 8;
};

struct EvolutionOptions {
  /// Snapshot times; empty means 201 uniform samples over [0, t_f].
  std::vector<double> sample_times;
  StepControl steps;
  /// Edges for the Néel order.
  std::vector<Edge> edges;
  /// Target configurations whose total population is reported.
  std::vector<Bitstring> ground_configs;
  bool keep_states = false;
};

std::vector<double> uniform_samples(double t_final, int count = 201);

struct EvolutionResult {
  int num_atoms = 0;
  std::vector<double> times;
  std::vector<double> norm;  // state norm or density-matrix trace
  std::vector<std::vector<double>> excitation;  // [sample][atom] <n_j>
  std::vector<std::vector<double>> excitation_stderr;
  std::vector<double> neel;
  std::vector<double> neel_stderr;
  std::vector<double> ground_probability;
  std::vector<double> ground_probability_stderr;
  std::vector<double> min_eigenvalue;      // density-matrix runs only
  std::vector<StateVector> states;         // when keep_states
  std::vector<double> final_probabilities; // |psi|^2, diag(rho) or trajectory mean
  StateVector final_state;                 // closed dynamics only
  DensityMatrix final_density;             // master-equation runs only
  int trajectories = 0;
  int jumps = 0;
  int steps = 0;
  double step_size = 0;
  double norm_drift = 0;
};

StateVector basis_state(int num_atoms, Bitstring config);

/// Schroedinger propagation under the accuracy contract in opts.steps.
/// Throws StepControlFailure when max_refinements halvings do not suffice.
EvolutionResult evolve_schrodinger(const RydbergHamiltonian& h, const Schedule& schedule,
                                   const StateVector& psi0, const EvolutionOptions& opts);

inline constexpr int kMaxLindbladAtoms = 7;
inline constexpr int kMaxTrajectoryAtoms = 14;

/// Dense master equation, fixed-step RK4 with the same halving contract
/// measured as the max-norm change of the final density matrix.
EvolutionResult evolve_lindblad(const RydbergHamiltonian& h, const Schedule& schedule,
                                const DensityMatrix& rho0, const NoiseModel& noise,
                                const EvolutionOptions& opts);

/// Quantum-jump unraveling. Trajectory i draws its randomness from a stream
/// derived from (seed, i) only, so results do not depend on the thread count.
EvolutionResult evolve_trajectories(const RydbergHamiltonian& h, const Schedule& schedule,
                                    const StateVector& psi0, const NoiseModel& noise,
                                    int num_trajectories, std::uint64_t seed,
                                    const EvolutionOptions& opts);

/// O_N = -(1/|E|) sum_E <sz_a sz_b>.
double neel_order(std::span<const cplx> state, std::span<const Edge> edges, int num_atoms);
double neel_order(const DensityMatrix& rho, std::span<const Edge> edges, int num_atoms);
double neel_order_from_probabilities(std::span<const double> probs, std::span<const Edge> edges,
                                     int num_atoms);

/// Weight of the state in the sector odd under the vertex permutation `swap`.
double antisymmetric_weight(std::span<const cplx> state, std::span<const int> swap);

/// antisymmetric_weight at every stored snapshot of `result` (needs keep_states).
std::vector<double> symmetry_overlap(const EvolutionResult& result, std::span<const int> swap);

/// Basis index permuted by a vertex map: bit of atom v moves to atom swap[v].
Bitstring permute_config(Bitstring config, std::span<const int> swap);

/// Independent 64-bit seed for stream `index` of `seed` (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace cayley
