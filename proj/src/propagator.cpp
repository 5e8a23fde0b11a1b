#include <algorithm>
#include <cmath>
#if defined(__SSE2__)
#include <emmintrin.h>
#endif

#include "cayley/dynamics.hpp"
#include "cayley/error.hpp"
#include "cayley/parallel.hpp"

namespace cayley {

std::vector<StepPiece> plan_steps(const Schedule& schedule, double t0, double t1, double max_step) {
  if (!(max_step > 0)) throw Error(ErrorCode::InvalidArgument, "step size must be positive");
  std::vector<double> cuts{t0};
  for (const auto& k : schedule.knots()) {
    if (k.t > t0 && k.t < t1) cuts.push_back(k.t);
  }
  cuts.push_back(t1);
  std::vector<StepPiece> plan;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (len <= 0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(len / max_step - 1e-9)));
    plan.push_back({cuts[i], len / n, n});
  }
  return plan;
}

double default_max_step(const RydbergHamiltonian& h, const Schedule& schedule) {
  double drive = 0;
  for (const auto& k : schedule.knots()) {
    drive = std::max(drive, k.omega + std::abs(k.delta));
  }
  double row = 0;
  const auto& u = h.couplings();
  for (int j = 0; j < u.size(); ++j) {
    double s = 0;
    for (int k = 0; k < u.size(); ++k) s += u(j, k);
    row = std::max(row, s);
  }
  const double scale = drive + row;
  return scale > 0 ? 1.0 / scale : schedule.t_final();
}

namespace {

// Yoshida triple-jump weights.
const double kW1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kW0 = 1.0 - 2.0 * kW1;

constexpr std::size_t kTile = std::size_t{1} << 11;

// (a, b) <- exp(-i theta sx) (a, b) with c = cos(theta), s = sin(theta).
#if defined(__SSE2__)
struct Rotation {
  __m128d c, s;  // (c, c), (s, -s)
  Rotation(double cv, double sv) : c(_mm_set1_pd(cv)), s(_mm_set_pd(-sv, sv)) {}
};

inline void rotate_pair(cplx& a, cplx& b, const Rotation& r) {
  double* pa = reinterpret_cast<double*>(&a);
  double* pb = reinterpret_cast<double*>(&b);
  const __m128d va = _mm_loadu_pd(pa), vb = _mm_loadu_pd(pb);
  _mm_storeu_pd(pa, _mm_add_pd(_mm_mul_pd(r.c, va), _mm_mul_pd(r.s, _mm_shuffle_pd(vb, vb, 1))));
  _mm_storeu_pd(pb, _mm_add_pd(_mm_mul_pd(r.c, vb), _mm_mul_pd(r.s, _mm_shuffle_pd(va, va, 1))));
}
#else
struct Rotation {
  double c, s;
};

inline void rotate_pair(cplx& a, cplx& b, const Rotation& r) {
  const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
  a = {r.c * ar + r.s * bi, r.c * ai - r.s * br};
  b = {r.c * br + r.s * ai, r.c * bi - r.s * ar};
}
#endif

// Plain product; std::complex operator* goes through the NaN-checking libcall.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace

SplitStepPropagator::SplitStepPropagator(const RydbergHamiltonian& h, const Schedule& schedule,
                                         NoiseModel damping)
    : h_(h), schedule_(schedule), damping_(damping) {}

const std::vector<cplx>& SplitStepPropagator::interaction_phases(double tau) {
  for (const auto& entry : cache_) {
    if (std::abs(entry.tau - tau) <= 1e-13 * std::abs(tau)) return entry.phases;
  }
  if (cache_.size() >= 4) cache_.erase(cache_.begin());
  PhaseCache entry{tau, std::vector<cplx>(h_.dim())};
  const auto v = h_.interaction_energies();
  parallel::for_chunks(h_.dim(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) entry.phases[k] = std::polar(1.0, -tau * v[k]);
  });
  cache_.push_back(std::move(entry));
  return cache_.back().phases;
}

void SplitStepPropagator::apply_diagonal(std::span<cplx> psi, double tau, double delta_tau) {
  const int n = h_.num_atoms();
  std::vector<cplx> by_count(n + 1);
  for (int m = 0; m <= n; ++m) {
    const double shift = m - 0.5 * n;
    const double decay = 0.5 * tau * (0.25 * damping_.individual * n + damping_.collective * shift * shift);
    by_count[m] = std::polar(std::exp(-decay), 0.5 * delta_tau * (2.0 * m - n));
  }
  const auto& phases = interaction_phases(tau);
  const auto up = h_.up_counts();
  parallel::for_chunks(psi.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) psi[k] = mul(psi[k], mul(phases[k], by_count[up[k]]));
  });
}

void SplitStepPropagator::rotate_x(std::span<cplx> psi, double theta) {
  if (theta == 0.0) return;
  const Rotation rot{std::cos(theta), std::sin(theta)};
  const std::size_t dim = psi.size();
  const std::size_t tile = std::min(dim, kTile);
  const std::size_t tiles = dim / tile;

  // Bits below the tile size: all rotations within each tile while it is cached.
  parallel::for_chunks(tiles, [&](std::size_t tb, std::size_t te) {
    for (std::size_t t = tb; t < te; ++t) {
      cplx* base = psi.data() + t * tile;
      for (std::size_t m = 1; m < tile; m <<= 1) {
        for (std::size_t j = 0; j < tile; j += 2 * m) {
          for (std::size_t i = j; i < j + m; ++i) rotate_pair(base[i], base[i + m], rot);
        }
      }
    }
  }, 1);

  // Bits at or above the tile size, two at a time over groups of four tiles.
  std::vector<std::size_t> high;
  for (std::size_t m = tile; m < dim; m <<= 1) high.push_back(m);
  for (std::size_t p = 0; p < high.size(); p += 2) {
    const std::size_t m1 = high[p];
    const std::size_t m2 = p + 1 < high.size() ? high[p + 1] : 0;
    const std::size_t both = m1 | m2;
    parallel::for_chunks(tiles, [&](std::size_t tb, std::size_t te) {
      for (std::size_t t = tb; t < te; ++t) {
        const std::size_t start = t * tile;
        if (start & both) continue;
        cplx* a = psi.data() + start;
        cplx* b = a + m1;
        if (m2 == 0) {
          for (std::size_t i = 0; i < tile; ++i) rotate_pair(a[i], b[i], rot);
          continue;
        }
        cplx* cc = a + m2;
        cplx* d = a + m1 + m2;
        for (std::size_t i = 0; i < tile; ++i) {
          rotate_pair(a[i], b[i], rot);
          rotate_pair(cc[i], d[i], rot);
          rotate_pair(a[i], cc[i], rot);
          rotate_pair(b[i], d[i], rot);
        }
      }
    }, 1);
  }
}

void SplitStepPropagator::step(std::span<cplx> psi, double t, double dt) {
  const double weights[3] = {kW1, kW0, kW1};
  double tau = 0, delta_tau = 0, now = t;
  for (double w : weights) {
    const double sub = w * dt;
    const Controls c = schedule_.at(now + 0.5 * sub);
    tau += 0.5 * sub;
    delta_tau += 0.5 * sub * c.delta;
    apply_diagonal(psi, tau, delta_tau);
    rotate_x(psi, 0.5 * c.omega * sub);
    tau = 0.5 * sub;
    delta_tau = 0.5 * sub * c.delta;
    now += sub;
  }
  apply_diagonal(psi, tau, delta_tau);
}

int SplitStepPropagator::advance(std::span<cplx> psi, double t0, double t1, double max_step) {
  if (psi.size() != h_.dim()) throw Error(ErrorCode::DimensionMismatch, "state dimension mismatch");
  int steps = 0;
  for (const auto& piece : plan_steps(schedule_, t0, t1, max_step)) {
    for (int i = 0; i < piece.count; ++i) step(psi, piece.t0 + i * piece.dt, piece.dt);
    steps += piece.count;
  }
  return steps;
}

}  // namespace cayley
