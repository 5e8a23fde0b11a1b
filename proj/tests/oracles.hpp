// Independent dense references for the unit and acceptance tests.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Single-site operator on `site` of n; site 0 is the leftmost factor.
inline Mat embed(const Mat& op, int site, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, k == site ? op : Mat::Identity(2, 2));
  return out;
}

// Basis order |down> = 0, |up> = 1.
inline Mat sigma_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Mat sigma_z() {
  Mat m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}
inline Mat number() {
  Mat m(2, 2);
  m << 0, 0, 0, 1;
  return m;
}

// H = 1/2 sum (omega sx - delta sz) + sum_{j<k} U_jk n_j n_k.
inline Mat rydberg(const std::vector<std::vector<double>>& U, double omega, double delta) {
  const int n = static_cast<int>(U.size());
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (int j = 0; j < n; ++j) h += 0.5 * (omega * embed(sigma_x(), j, n) - delta * embed(sigma_z(), j, n));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      if (U[j][k] != 0) h += U[j][k] * embed(number(), j, n) * embed(number(), k, n);
  return h;
}

// Classical RK4 with many small steps on a dense generator.
inline Vec rk4(const std::function<Mat(double)>& h, Vec psi, double t0, double t1, int steps) {
  const double dt = (t1 - t0) / steps;
  const cplx mi{0, -1};
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    const Mat h0 = h(t), hm = h(t + 0.5 * dt), h1 = h(t + dt);
    const Vec k1 = mi * (h0 * psi);
    const Vec k2 = mi * (hm * (psi + 0.5 * dt * k1));
    const Vec k3 = mi * (hm * (psi + 0.5 * dt * k2));
    const Vec k4 = mi * (h1 * (psi + dt * k3));
    psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

// Piecewise-linear three-stage controls.
struct Ramp {
  double omega, tf, di, df, frac = 0.1;
  void at(double t, double& o, double& d) const {
    const double a = frac * tf, b = (1 - frac) * tf;
    if (t <= a) {
      o = omega * t / a;
      d = di;
    } else if (t <= b) {
      o = omega;
      d = di + (df - di) * (t - a) / (b - a);
    } else {
      o = omega * (tf - t) / (tf - b);
      d = df;
    }
  }
};

inline bool bit(std::uint64_t c, int atom, int n) { return (c >> (n - 1 - atom)) & 1; }

// E = sum_edges U n n - delta/2 sum sz.
inline double graph_energy(std::uint64_t c, int n, const std::vector<std::pair<int, int>>& edges, double U,
                           double delta) {
  double e = 0;
  for (const auto& [a, b] : edges) e += U * (bit(c, a, n) && bit(c, b, n));
  for (int j = 0; j < n; ++j) e -= 0.5 * delta * (bit(c, j, n) ? 1 : -1);
  return e;
}

struct Ground {
  double energy = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> configs;
};

inline Ground enumerate(int n, const std::vector<std::pair<int, int>>& edges, double U, double delta) {
  Ground g;
  const double tol = 1e-9 * (std::abs(U) + std::abs(delta));
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
    const double e = graph_energy(c, n, edges, U, delta);
    if (e < g.energy - tol) {
      g.energy = e;
      g.configs = {c};
    } else if (e <= g.energy + tol) {
      g.configs.push_back(c);
    }
  }
  return g;
}

// Monte Carlo of independent readout flips applied to one fixed configuration.
inline double spam_neel_monte_carlo(std::uint64_t config, int n, const std::vector<std::pair<int, int>>& edges,
                                    double p_du, double p_ud, int shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip_up(p_du), flip_down(p_ud);
  double acc = 0;
  std::vector<int> s(n);
  for (int shot = 0; shot < shots; ++shot) {
    for (int j = 0; j < n; ++j) {
      const bool up = bit(config, j, n);
      const bool measured_up = up ? !flip_up(rng) : flip_down(rng);
      s[j] = measured_up ? 1 : -1;
    }
    double corr = 0;
    for (const auto& [a, b] : edges) corr += s[a] * s[b];
    acc += corr / edges.size();
  }
  return -acc / shots;
}

}  // namespace oracle
