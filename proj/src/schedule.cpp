#include "cayley/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "cayley/error.hpp"

namespace cayley {

Schedule::Schedule(std::vector<Knot> knots, RampShape shape) : knots_(std::move(knots)), shape_(shape) {
  if (knots_.size() < 2) throw Error(ErrorCode::InvalidArgument, "schedule needs at least two knots");
  if (knots_.front().t != 0.0) throw Error(ErrorCode::InvalidArgument, "schedule must start at t = 0");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (knots_[i].omega < 0) throw Error(ErrorCode::InvalidArgument, "Rabi frequency must be >= 0");
    if (i > 0 && !(knots_[i].t > knots_[i - 1].t)) {
      throw Error(ErrorCode::InvalidArgument, "schedule knot times must increase");
    }
  }
}

Schedule Schedule::three_stage(double omega_max, double t_final, double delta_initial,
                               double delta_final, double ramp_fraction, RampShape shape) {
  if (!(t_final > 0)) throw Error(ErrorCode::InvalidArgument, "t_final must be positive");
  if (!(ramp_fraction > 0 && ramp_fraction < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "ramp fraction must lie in (0, 0.5)");
  }
  return Schedule({{0.0, 0.0, delta_initial},
                   {ramp_fraction * t_final, omega_max, delta_initial},
                   {(1.0 - ramp_fraction) * t_final, omega_max, delta_final},
                   {t_final, 0.0, delta_final}},
                  shape);
}

Schedule Schedule::constant(Controls c, double t_final) {
  return Schedule({{0.0, c.omega, c.delta}, {t_final, c.omega, c.delta}});
}

Controls Schedule::at(double t) const {
  if (t <= knots_.front().t) return {knots_.front().omega, knots_.front().delta};
  if (t >= knots_.back().t) return {knots_.back().omega, knots_.back().delta};
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const Knot& k) { return v < k.t; });
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  double x = (t - a.t) / (b.t - a.t);
  if (shape_ == RampShape::Cosine) x = 0.5 * (1.0 - std::cos(kPi * x));
  return {a.omega + x * (b.omega - a.omega), a.delta + x * (b.delta - a.delta)};
}

double default_anneal_time(const PhysicalConstants& consts) { return 3.2 * kTwoPi / consts.omega0; }

}  // namespace cayley
