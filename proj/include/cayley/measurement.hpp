#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cayley/dynamics.hpp"
#include "cayley/lattice.hpp"
#include "cayley/types.hpp"

namespace cayley {

/// Independent per-atom readout flips.
struct SpamModel {
  double p_down_given_up = 0.18;
  double p_up_given_down = 0.02;
};

struct ShotRecord {
  int num_atoms = 0;
  std::map<Bitstring, std::uint64_t> counts;
  std::uint64_t n_shots = 0;
  bool spam_applied = false;
  std::uint64_t seed = 0;
};

inline constexpr int kMaxLabelAtoms = 26;

/// I.i.d. draws from a probability vector over 2^N configurations.
/// Throws NotNormalized if the total deviates from 1 by more than 1e-6.
ShotRecord sample_bitstrings(std::span<const double> probabilities, int num_atoms,
                             std::uint64_t n_shots, std::uint64_t seed);
ShotRecord sample_bitstrings(std::span<const cplx> state, int num_atoms, std::uint64_t n_shots,
                             std::uint64_t seed);
ShotRecord sample_bitstrings(const DensityMatrix& rho, int num_atoms, std::uint64_t n_shots,
                             std::uint64_t seed);

/// Flips each bit of each shot; shot i (in label order) uses its own stream of `seed`.
/// Throws DoubleApplication if the record already carries SPAM.
ShotRecord apply_spam(const ShotRecord& record, const SpamModel& spam, std::uint64_t seed);

enum class Spin : std::uint8_t { Down = 0, Up = 1 };

/// Atom 0 is the most significant bit.
Bitstring encode_label(std::span<const Spin> spins);
std::vector<Spin> decode_label(Bitstring label, int num_atoms);

struct HistogramEntry {
  Bitstring label = 0;
  std::uint64_t count = 0;
  double probability = 0;
  double stderr_ = 0;  // Wilson interval half-width at one sigma
};

/// Observed labels sorted ascending.
std::vector<HistogramEntry> histogram(const ShotRecord& record);

/// Empirical O_N of the recorded shots.
double neel_order(const ShotRecord& record, std::span<const Edge> edges);

/// Expected O_N after SPAM for a distribution over configurations:
/// a^2 O_N - a b mean_E(<s_i> + <s_j>) - b^2 with a = 1 - p_du - p_ud and
/// b = p_ud - p_du.
double spam_neel_prediction(std::span<const double> probabilities, int num_atoms,
                            std::span<const Edge> edges, const SpamModel& spam);

}  // namespace cayley
