#include <cmath>
#include <random>

#include "doctest.h"
#include "../oracles.hpp"

#include "cayley/dynamics.hpp"
#include "cayley/error.hpp"
#include "cayley/groundstate.hpp"

using namespace cayley;

namespace {

constexpr double kOmega0 = kTwoPi * 1.1;

double fidelity(const StateVector& a, const oracle::Vec& b) {
  cplx ip = 0;
  for (std::size_t k = 0; k < a.size(); ++k) ip += std::conj(b(k)) * a[k];
  return std::norm(ip);
}

oracle::Vec to_eigen(const StateVector& s) {
  oracle::Vec v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) v(k) = s[k];
  return v;
}

std::vector<std::vector<double>> dense(const Couplings& c) {
  std::vector<std::vector<double>> u(c.size(), std::vector<double>(c.size()));
  for (int j = 0; j < c.size(); ++j)
    for (int k = 0; k < c.size(); ++k) u[j][k] = c(j, k);
  return u;
}

}  // namespace

TEST_CASE("schedule shape") {
  const auto s = Schedule::three_stage(kOmega0, 2.909, -2 * kOmega0, 2 * kOmega0);
  CHECK(s.at(0).omega == 0.0);
  CHECK(s.at(s.t_final()).omega == 0.0);
  CHECK(s.at(0).delta == doctest::Approx(-2 * kOmega0));
  CHECK(s.at(s.t_final()).delta == doctest::Approx(2 * kOmega0));
  CHECK(s.at(0.5 * 2.909).delta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.at(0.05 * 2.909).omega == doctest::Approx(0.5 * kOmega0));
  for (double t = 0; t <= 2.909; t += 0.001) {
    CHECK(s.at(t).omega >= 0);
    CHECK(std::abs(s.at(t + 1e-9).delta - s.at(t).delta) < 1e-6);
  }
  const auto c = Schedule::three_stage(kOmega0, 2.909, -2 * kOmega0, 2 * kOmega0, 0.1, RampShape::Cosine);
  CHECK(c.at(0.05 * 2.909).omega == doctest::Approx(0.5 * kOmega0));
  CHECK(default_anneal_time(PhysicalConstants{}) == doctest::Approx(2.909090909).epsilon(1e-9));
  CHECK_THROWS_AS(Schedule({{0.1, 0, 0}, {1, 0, 0}}), Error);
  CHECK_THROWS_AS(Schedule({{0, -1, 0}, {1, 0, 0}}), Error);
}

TEST_CASE("Rabi pi pulse") {
  RydbergHamiltonian h{Couplings(1)};
  const double omega = 3.0;
  const auto sched = Schedule::constant({omega, 0}, kPi / omega);
  const auto r = evolve_schrodinger(h, sched, basis_state(1, 0), {});
  CHECK(std::abs(r.final_state[0]) < 1e-9);
  CHECK(std::abs(r.final_state[1] - cplx{0, -1}) < 1e-9);
  CHECK(r.norm_drift < 1e-12);
}

TEST_CASE("blockaded pair anneal against dense integration") {
  Couplings c(2);
  c.set(0, 1, 20 * kOmega0);
  RydbergHamiltonian h(c);
  const double tf = 2.909;
  const auto sched = Schedule::three_stage(kOmega0, tf, -2 * kOmega0, 2 * kOmega0);
  EvolutionOptions opts;
  opts.edges = {{0, 1}};
  const auto r = evolve_schrodinger(h, sched, basis_state(2, 0), opts);
  const oracle::Ramp ramp{kOmega0, tf, -2 * kOmega0, 2 * kOmega0};
  const auto U = dense(c);
  oracle::Vec psi = oracle::Vec::Zero(4);
  psi(0) = 1;
  const auto ref = oracle::rk4([&](double t) {
    double o, d;
    ramp.at(t, o, d);
    return oracle::rydberg(U, o, d);
  }, psi, 0, tf, 40000);
  CHECK(fidelity(r.final_state, ref) > 1 - 1e-8);
  CHECK(r.final_probabilities[1] == doctest::Approx(r.final_probabilities[2]).epsilon(1e-10));
  CHECK(r.final_probabilities[3] < 0.01);
  CHECK(r.times.size() == 201);
  CHECK(r.norm_drift < 1e-9);
}

TEST_CASE("four-atom star anneal against dense integration") {
  const auto t = build_regular_tree(3, 2, 1.0, Layout::Planar);
  const auto c = scaled_couplings(t.graph, t.geometry, 1.5 * kOmega0, CouplingMode::FullVdW);
  RydbergHamiltonian h(c, CouplingMode::FullVdW);
  const double tf = 1.5;
  const auto sched = Schedule::three_stage(kOmega0, tf, -2 * kOmega0, 2 * kOmega0);
  const auto r = evolve_schrodinger(h, sched, basis_state(4, 0), {});
  const oracle::Ramp ramp{kOmega0, tf, -2 * kOmega0, 2 * kOmega0};
  oracle::Vec psi = oracle::Vec::Zero(16);
  psi(0) = 1;
  const auto U = dense(c);
  const auto ref = oracle::rk4([&](double s) {
    double o, d;
    ramp.at(s, o, d);
    return oracle::rydberg(U, o, d);
  }, psi, 0, tf, 30000);
  CHECK(fidelity(r.final_state, ref) > 1 - 1e-8);

  // doubling the step count barely moves the result
  EvolutionOptions fine;
  fine.steps.verify = false;
  fine.steps.max_step = 0.5 * r.step_size;
  const auto r2 = evolve_schrodinger(h, sched, basis_state(4, 0), fine);
  CHECK(fidelity(r2.final_state, to_eigen(r.final_state)) > 1 - 1e-8);
}

TEST_CASE("energy is conserved under frozen controls") {
  const auto t = build_regular_tree(3, 3, 1.0, Layout::Planar);
  RydbergHamiltonian h(scaled_couplings(t.graph, t.geometry, 1.82 * kOmega0, CouplingMode::GraphIdeal));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  StateVector psi(h.dim());
  double n2 = 0;
  for (auto& a : psi) {
    a = {g(rng), g(rng)};
    n2 += std::norm(a);
  }
  for (auto& a : psi) a /= std::sqrt(n2);
  const Controls ctl{kOmega0, 0.7 * kOmega0};
  const auto energy = [&](const StateVector& s) {
    StateVector hs(s.size());
    h.apply(ctl, s, hs);
    cplx e = 0;
    for (std::size_t k = 0; k < s.size(); ++k) e += std::conj(s[k]) * hs[k];
    return e.real();
  };
  EvolutionOptions opts;
  opts.sample_times = {0, 0.5, 1.0};
  const auto r = evolve_schrodinger(h, Schedule::constant(ctl, 1.0), psi, opts);
  const double e0 = energy(psi);
  CHECK(std::abs(energy(r.final_state) - e0) < 1e-8 * std::abs(e0));
}

TEST_CASE("master equation: pure dephasing") {
  RydbergHamiltonian h{Couplings(1)};
  const double gamma = 0.8;
  DensityMatrix rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  EvolutionOptions opts;
  opts.sample_times = {0, 1, 2};
  const auto r = evolve_lindblad(h, Schedule::constant({0, 0}, 2.0), rho, {gamma, 0}, opts);
  CHECK(std::abs(r.final_density(0, 1) - cplx{0.5 * std::exp(-gamma * 2 / 2)}) < 1e-9);
  CHECK(r.norm_drift < 1e-9);

  // collective channel on one atom acts identically
  const auto rc = evolve_lindblad(h, Schedule::constant({0, 0}, 2.0), rho, {0, gamma}, opts);
  CHECK(std::abs(rc.final_density(0, 1) - r.final_density(0, 1)) < 1e-9);
}

TEST_CASE("master equation without noise matches Schroedinger") {
  const auto t = build_regular_tree(3, 2, 1.0, Layout::Planar);
  RydbergHamiltonian h(scaled_couplings(t.graph, t.geometry, 2.0 * kOmega0, CouplingMode::GraphIdeal));
  const auto sched = Schedule::three_stage(kOmega0, 1.2, -2 * kOmega0, 2 * kOmega0);
  EvolutionOptions opts;
  opts.sample_times = uniform_samples(1.2, 7);
  opts.edges = t.graph.edges;
  const auto psi = evolve_schrodinger(h, sched, basis_state(4, 0), opts);
  DensityMatrix rho0 = DensityMatrix::Zero(16, 16);
  rho0(0, 0) = 1;
  const auto rho = evolve_lindblad(h, sched, rho0, NoiseModel::none(), opts);
  const auto v = to_eigen(psi.final_state);
  CHECK((v.adjoint() * rho.final_density * v)(0, 0).real() > 1 - 1e-8);
  for (std::size_t s = 0; s < opts.sample_times.size(); ++s) CHECK(std::abs(rho.neel[s] - psi.neel[s]) < 2e-4);
  for (double m : rho.min_eigenvalue) CHECK(m >= -1e-8);

  DensityMatrix big = DensityMatrix::Identity(256, 256) / 256.0;
  CHECK_THROWS_AS(evolve_lindblad(RydbergHamiltonian(Couplings(8)), sched, big, {}, opts), Error);
}

TEST_CASE("noise-free trajectories reproduce Schroedinger") {
  const auto t = build_regular_tree(3, 2, 1.0, Layout::Planar);
  RydbergHamiltonian h(scaled_couplings(t.graph, t.geometry, 2.0 * kOmega0, CouplingMode::GraphIdeal));
  const auto sched = Schedule::three_stage(kOmega0, 1.2, -2 * kOmega0, 2 * kOmega0);
  EvolutionOptions opts;
  opts.sample_times = uniform_samples(1.2, 5);
  opts.edges = t.graph.edges;
  opts.steps.max_step = 0.002;
  opts.steps.verify = false;
  const auto a = evolve_schrodinger(h, sched, basis_state(4, 0), opts);
  const auto b = evolve_trajectories(h, sched, basis_state(4, 0), NoiseModel::none(), 3, 9, opts);
  CHECK(b.jumps == 0);
  for (std::size_t s = 0; s < 5; ++s) {
    CHECK(b.neel[s] == doctest::Approx(a.neel[s]).epsilon(1e-12));
    CHECK(b.neel_stderr[s] < 1e-7);
  }

  CHECK_THROWS_AS(evolve_trajectories(RydbergHamiltonian(Couplings(15)), sched, basis_state(15, 0), {}, 1, 1, opts),
                  Error);
  StateVector bad(16, cplx{1});
  CHECK_THROWS_AS(evolve_schrodinger(h, sched, bad, opts), Error);
}

TEST_CASE("trajectory results are reproducible") {
  const auto t = build_regular_tree(3, 2, 1.0, Layout::Planar);
  RydbergHamiltonian h(scaled_couplings(t.graph, t.geometry, 2.0 * kOmega0, CouplingMode::GraphIdeal));
  const auto sched = Schedule::three_stage(kOmega0, 1.2, -2 * kOmega0, 2 * kOmega0);
  EvolutionOptions opts;
  opts.sample_times = uniform_samples(1.2, 5);
  opts.edges = t.graph.edges;
  const NoiseModel strong{2.0, 0.5};
  const auto a = evolve_trajectories(h, sched, basis_state(4, 0), strong, 40, 17, opts);
  const auto b = evolve_trajectories(h, sched, basis_state(4, 0), strong, 40, 17, opts);
  CHECK(a.jumps > 0);
  CHECK(a.jumps == b.jumps);
  CHECK(a.final_probabilities == b.final_probabilities);
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("dephasing jumps leave populations alone") {
  RydbergHamiltonian h(Couplings(1));
  StateVector plus{cplx{std::sqrt(0.5)}, cplx{std::sqrt(0.5)}};
  EvolutionOptions opts;
  opts.sample_times = {0.0, 1.0, 2.0};
  const auto r = evolve_trajectories(h, Schedule::constant({0, 0}, 2.0), plus, {3.0, 0.5}, 50, 3, opts);
  CHECK(r.jumps > 0);
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(r.excitation[s][0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.excitation_stderr[s][0] < 1e-7);
  }
}

TEST_CASE("trajectories follow the master equation under strong dephasing") {
  Couplings c(2);
  c.set(0, 1, 3.0);
  RydbergHamiltonian h(c);
  const auto sched = Schedule::constant({4.0, 1.0}, 1.5);
  EvolutionOptions opts;
  opts.sample_times = {0.5, 1.0, 1.5};
  const NoiseModel noise{1.5, 0.4};
  DensityMatrix rho0 = DensityMatrix::Zero(4, 4);
  rho0(0, 0) = 1;
  const auto lind = evolve_lindblad(h, sched, rho0, noise, opts);
  const auto traj = evolve_trajectories(h, sched, basis_state(2, 0), noise, 4000, 8, opts);
  CHECK(traj.jumps > 1000);
  for (std::size_t s = 0; s < 3; ++s) {
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(traj.excitation[s][j] - lind.excitation[s][j]) < 4 * traj.excitation_stderr[s][j]);
    }
  }
}

TEST_CASE("Neel order of basis states") {
  const auto g = build_regular_tree(3, 3, 1.0, Layout::Planar).graph;
  CHECK(neel_order(basis_state(10, 575), g.edges, 10) == doctest::Approx(1.0));
  CHECK(neel_order(basis_state(10, 0), g.edges, 10) == doctest::Approx(-1.0));
  std::vector<double> p(1024, 0.0);
  p[575] = 0.5;
  p[0] = 0.5;
  CHECK(neel_order_from_probabilities(p, g.edges, 10) == doctest::Approx(0.0));
}

TEST_CASE("center-swap symmetry") {
  const auto t = build_dual_center_tree(9.0);
  const auto swap = half_swap_map(t.graph);
  const double U = 2.7 * kOmega0;
  RydbergHamiltonian h(scaled_couplings(t.graph, t.geometry, U, CouplingMode::GraphIdeal));

  // a state odd under the swap stays odd
  const Bitstring c = atom_mask(0, 14) | atom_mask(6, 14);
  StateVector psi(h.dim(), cplx{0});
  psi[c] = 1 / std::sqrt(2.0);
  psi[permute_config(c, swap)] = -1 / std::sqrt(2.0);
  CHECK(antisymmetric_weight(psi, swap) == doctest::Approx(1.0));
  EvolutionOptions opts;
  opts.sample_times = uniform_samples(0.4, 5);
  opts.keep_states = true;
  const auto r = evolve_schrodinger(h, Schedule::constant({kOmega0, 0.5 * kOmega0}, 0.4), psi, opts);
  for (double w : symmetry_overlap(r, swap)) CHECK(w == doctest::Approx(1.0).epsilon(1e-9));

  // displacing one atom in full mode breaks the symmetry
  auto geo = t.geometry;
  geo.positions[5].z += 0.1;
  const auto sched = Schedule::three_stage(kOmega0, 2.909, -2 * kOmega0, 2 * kOmega0);
  RydbergHamiltonian hb(scaled_couplings(t.graph, geo, U, CouplingMode::FullVdW), CouplingMode::FullVdW);
  EvolutionOptions o2;
  o2.sample_times = uniform_samples(2.909, 11);
  o2.keep_states = true;
  const auto broken = evolve_schrodinger(hb, sched, basis_state(14, 0), o2);
  const auto w = symmetry_overlap(broken, swap);
  CHECK(*std::max_element(w.begin(), w.end()) > 1e-6);
  CHECK_THROWS_AS(symmetry_overlap(EvolutionResult{}, swap), Error);
}
