#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "../oracles.hpp"

#include "cayley/error.hpp"
#include "cayley/groundstate.hpp"

using namespace cayley;

namespace {

std::vector<std::pair<int, int>> edge_pairs(const TreeGraph& g) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : g.edges) out.emplace_back(e.a, e.b);
  return out;
}

}  // namespace

TEST_CASE("ground labels of the small graphs") {
  const auto g10 = build_regular_tree(3, 3, 1.0, Layout::Planar).graph;
  const auto g575 = brute_force_ground(make_ising_problem(g10, 1.82, 2.0));
  CHECK(g575.configs == std::vector<Bitstring>{575});
  CHECK(classify_phase(g575, g10) == PhaseLabel::III_ShellAlternating);
  CHECK(shell_alternating_config(g10) == 575);

  const auto g14 = build_dual_center_tree(1.0).graph;
  for (double U : {2.70, 5.41}) {
    const auto gs = brute_force_ground(make_ising_problem(g14, U, 2.0));
    CHECK(gs.configs == std::vector<Bitstring>{4351, 8447});
    CHECK(classify_phase(gs, g14) == PhaseLabel::V_CentersDegenerate);
  }
  const auto g3 = brute_force_ground(make_ising_problem(g14, 1.67, 2.0));
  CHECK(g3.configs == std::vector<Bitstring>{12543});
  CHECK(classify_phase(g3, g14) == PhaseLabel::IV_CentersUpUp);
}

TEST_CASE("brute force matches an independent enumeration") {
  const auto g10 = build_regular_tree(3, 3, 1.0, Layout::Planar).graph;
  const auto g14 = build_dual_center_tree(1.0).graph;
  for (const TreeGraph* g : {&g10, &g14}) {
    for (auto [U, D] : {std::pair{1.0, -1.0}, std::pair{1.0, 1.0}, std::pair{0.2, 1.0}, std::pair{2.0, 6.5},
                        std::pair{1.5, 1.5}}) {
      const auto ours = brute_force_ground(make_ising_problem(*g, U, D));
      const auto ref = oracle::enumerate(g->size(), edge_pairs(*g), U, D);
      CHECK(ours.configs == ref.configs);
      CHECK(ours.energy == doctest::Approx(ref.energy));
    }
  }
}

TEST_CASE("phase probes") {
  const auto g10 = build_regular_tree(3, 3, 1.0, Layout::Planar).graph;
  const std::vector<std::pair<double, double>> probes{{1, -1}, {1, 1}, {0.2, 1}};
  const auto pts = phase_diagram(g10, probes);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].label == PhaseLabel::I_AllDown);
  CHECK(pts[1].label == PhaseLabel::III_ShellAlternating);
  CHECK(pts[2].label == PhaseLabel::II_AllUp);
  CHECK(std::string(to_string(PhaseLabel::V_CentersDegenerate)) == "V");
}

TEST_CASE("full van der Waals ground states") {
  const auto t = build_regular_tree(3, 3, 0.905 * 9.849, Layout::Planar);
  const auto gs = brute_force_ground(make_ising_problem(t.graph, 1.82, 2.0, CouplingMode::FullVdW, &t.geometry));
  CHECK(gs.configs == std::vector<Bitstring>{575});
  CHECK_THROWS_AS(make_ising_problem(t.graph, 1.82, 2.0, CouplingMode::FullVdW, nullptr), Error);
}

TEST_CASE("Lanczos against dense diagonalisation") {
  const auto t = build_regular_tree(3, 2, 1.0, Layout::Planar);
  for (auto ctl : {Controls{1.0, 0.0}, Controls{1.0, 2.0}, Controls{0.4, -1.0}}) {
    const auto couplings = scaled_couplings(t.graph, t.geometry, 2.0, CouplingMode::GraphIdeal);
    RydbergHamiltonian h(couplings);
    const auto pair = exact_ground_state(h, ctl);
    std::vector<std::vector<double>> U(4, std::vector<double>(4, 0.0));
    for (const auto& e : t.graph.edges) U[e.a][e.b] = 2.0;
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::rydberg(U, ctl.omega, ctl.delta));
    CHECK(pair.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-9));
    double overlap = 0;
    oracle::Vec v = es.eigenvectors().col(0);
    cplx ip = 0;
    for (std::size_t k = 0; k < h.dim(); ++k) ip += std::conj(v(k)) * pair.state[k];
    overlap = std::abs(ip);
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-6));
  }

  const auto g10 = build_regular_tree(3, 3, 1.0, Layout::Planar);
  RydbergHamiltonian h10(scaled_couplings(g10.graph, g10.geometry, 1.82, CouplingMode::GraphIdeal));
  const auto gs = exact_ground_state(h10, {0.0, 2.0});
  CHECK(std::norm(gs.state[575]) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(gs.energy == doctest::Approx(brute_force_ground(make_ising_problem(g10.graph, 1.82, 2.0)).energy));
}
