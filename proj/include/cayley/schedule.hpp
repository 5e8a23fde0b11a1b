#pragma once

#include <span>
#include <vector>

#include "cayley/hamiltonian.hpp"

namespace cayley {

enum class RampShape { Linear, Cosine };

struct Knot {
  double t = 0;      // µs
  double omega = 0;  // rad/µs
  double delta = 0;  // rad/µs
};

/// Piecewise control waveforms Omega(t), Delta(t) on [0, t_final], linear (or
/// raised-cosine) between knots.
class Schedule {
 public:
  explicit Schedule(std::vector<Knot> knots, RampShape shape = RampShape::Linear);

  /// Omega 0 -> omega_max over [0, f t_f] at delta_initial; delta_initial ->
  /// delta_final over [f t_f, (1 - f) t_f] at omega_max; omega_max -> 0 at
  /// delta_final over the last stage.
  static Schedule three_stage(double omega_max, double t_final, double delta_initial,
                              double delta_final, double ramp_fraction = 0.1,
                              RampShape shape = RampShape::Linear);

  /// Frozen controls over [0, t_final].
  static Schedule constant(Controls c, double t_final);

  Controls at(double t) const;
  double t_final() const { return knots_.back().t; }
  std::span<const Knot> knots() const { return knots_; }
  RampShape shape() const { return shape_; }

 private:
  std::vector<Knot> knots_;
  RampShape shape_;
};

/// t_f = 3.2 * 2 pi / Omega0.
double default_anneal_time(const PhysicalConstants& consts);

}  // namespace cayley
