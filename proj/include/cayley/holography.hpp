#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cayley/lattice.hpp"
#include "cayley/types.hpp"

namespace cayley {

/// Phase-only SLM in the Fourier plane of a lens. Pixel (i, k) sits at
/// X = (i - (width-1)/2) pitch, Y = (k - (height-1)/2) pitch.
struct SlmPlane {
  int width = 512;
  int height = 512;
  double pitch = 15.0;          // µm
  double focal_length = 4000.0; // µm
  double wavelength = 0.82;     // µm

  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
  double x_of(int i) const { return (i - 0.5 * (width - 1)) * pitch; }
  double y_of(int k) const { return (k - 0.5 * (height - 1)) * pitch; }
};

struct TargetSet {
  std::vector<Vec3> sites;      // µm
  std::vector<double> weights;  // empty means uniform
};

/// T = 2 pi (x X + y Y) / (f lambda) + pi z (X^2 + Y^2) / (f^2 lambda).
double transfer_kernel(Vec3 site, double X, double Y, double focal_length, double wavelength);

/// Row-major phase pattern, height rows of width pixels, radians in [0, 2 pi).
using PhasePattern = std::vector<double>;

/// E(x, y, z) = sum_{X,Y} exp(i Phi) exp(-i T), evaluated directly.
std::vector<cplx> reconstruct_field(std::span<const double> phase, std::span<const Vec3> points,
                                    const SlmPlane& plane);

struct WgsResult {
  PhasePattern phase;
  std::vector<double> intensities;                 // final, per target
  std::vector<double> weights;                     // final, normalised
  std::vector<double> uniformity;                  // per iteration
  std::vector<std::vector<double>> intensity_history;  // [iteration][target]
};

/// Weighted Gerchberg-Saxton from a random initial phase drawn from `seed`.
/// Iteration i updates the weights from the current target amplitudes,
/// recomposes the phase and records the target intensities it produces.
WgsResult wgs_optimize(const TargetSet& targets, const SlmPlane& plane, int iterations,
                       std::uint64_t seed);

/// 1 - (max - min) / (max + min).
double uniformity(std::span<const double> intensities);

/// `width height` header line followed by raw little-endian float64 values.
void write_phase(std::ostream& os, std::span<const double> phase, int width, int height);
PhasePattern read_phase(std::istream& is, int& width, int& height);

}  // namespace cayley
