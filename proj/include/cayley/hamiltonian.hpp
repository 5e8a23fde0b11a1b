#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cayley/lattice.hpp"
#include "cayley/types.hpp"

namespace cayley {

/// Frequencies are angular, in rad/µs; lengths in µm; hbar = 1.
struct PhysicalConstants {
  double c6 = kTwoPi * 1.004e6;  // rad µs^-1 µm^6 (71S)
  double omega0 = kTwoPi * 1.1;  // rad µs^-1
};

/// Angular frequency for a value quoted in (2 pi) MHz.
constexpr double angular_from_mhz(double mhz) { return kTwoPi * mhz; }

/// r_b = (C6 / Omega0)^(1/6).
double blockade_radius(const PhysicalConstants& consts);

/// Interatomic distance at which C6 / r^6 equals `coupling`.
double distance_for_coupling(const PhysicalConstants& consts, double coupling);

enum class CouplingMode { FullVdW, GraphIdeal };

struct PairCoupling {
  int j = 0;
  int k = 0;
  double u = 0;
};

/// Symmetric pair interactions U_jk >= 0 with zero diagonal.
class Couplings {
 public:
  Couplings() = default;
  explicit Couplings(int n) : n_(n), u_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double operator()(int j, int k) const { return u_[static_cast<std::size_t>(j) * n_ + k]; }
  void set(int j, int k, double u);
  std::vector<PairCoupling> nonzero() const;

 private:
  int n_ = 0;
  std::vector<double> u_;
};

/// FullVdW: C6 / r_jk^6 for every pair. GraphIdeal: C6 / d^6 on edges only.
Couplings interaction_matrix(const TreeGraph& g, const Geometry& geo, const PhysicalConstants& consts,
                             CouplingMode mode);

/// GraphIdeal: `edge_coupling` on edges only. FullVdW: edge_coupling * (d / r_jk)^6
/// on every pair, d being the nominal edge length.
Couplings scaled_couplings(const TreeGraph& g, const Geometry& geo, double edge_coupling,
                           CouplingMode mode);

/// Instantaneous drive values.
struct Controls {
  double omega = 0;  // Rabi frequency
  double delta = 0;  // detuning
};

/// H = 1/2 sum_j (Omega sx_j - Delta sz_j) + sum_{j<k} U_jk n_j n_k, applied
/// matrix-free: a diagonal per basis state plus single-bit flips of weight Omega/2.
class RydbergHamiltonian {
 public:
  static constexpr int kMaxAtoms = 26;

  RydbergHamiltonian(Couplings couplings, CouplingMode mode = CouplingMode::GraphIdeal);

  int num_atoms() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  CouplingMode mode() const { return mode_; }
  const Couplings& couplings() const { return couplings_; }

  /// sum_{j<k} U_jk n_j n_k for each basis state.
  std::span<const double> interaction_energies() const { return interaction_; }
  /// Number of up spins per basis state.
  std::span<const std::uint8_t> up_counts() const { return up_; }

  double diagonal(std::size_t k, Controls c) const {
    return interaction_[k] - 0.5 * c.delta * (2.0 * up_[k] - n_);
  }

  /// out = H(c) in. `in` and `out` must not alias.
  void apply(Controls c, std::span<const cplx> in, std::span<cplx> out) const;

  /// Upper bound on the spectral norm.
  double norm_bound(Controls c) const;

 private:
  int n_;
  CouplingMode mode_;
  Couplings couplings_;
  std::vector<double> interaction_;
  std::vector<std::uint8_t> up_;
  double max_interaction_ = 0;
};

/// Checked form of RydbergHamiltonian::apply; throws DimensionMismatch.
void apply_hamiltonian(const RydbergHamiltonian& h, Controls c, std::span<const cplx> in,
                       std::span<cplx> out);

/// Spin-glass form J sum_E sz sz + h_core sum_C sz + h_valence sum_V sz + offset.
struct IsingParameters {
  double coupling = 0;         // J = U/4
  double field_core = 0;       // 3U/4 - Delta_f/2
  double field_valence = 0;    // U/4 - Delta_f/2
  double offset_per_edge = 0;  // U/4

  double offset(int num_edges) const { return offset_per_edge * num_edges; }
};

IsingParameters ising_parameters(double edge_coupling, double delta_final);

/// Energy of a basis configuration in the spin-glass form, offset included.
double ising_energy(const IsingParameters& p, const TreeGraph& g, Bitstring config);

}  // namespace cayley
