#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace cayley {

using cplx = std::complex<double>;

/// Amplitudes over the 2^N computational basis. Atom 0 is the most significant bit.
using StateVector = std::vector<cplx>;

/// Computational-basis label, |down> = 0 and |up> = 1 per atom, atom 0 most significant.
using Bitstring = std::uint64_t;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Bit mask of atom `atom` in an `num_atoms`-atom register.
constexpr Bitstring atom_mask(int atom, int num_atoms) {
  return Bitstring{1} << (num_atoms - 1 - atom);
}

constexpr bool is_up(Bitstring config, int atom, int num_atoms) {
  return (config & atom_mask(atom, num_atoms)) != 0;
}

}  // namespace cayley
