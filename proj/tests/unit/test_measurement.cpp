#include <cmath>
#include <map>

#include "doctest.h"
#include "../oracles.hpp"

#include "cayley/error.hpp"
#include "cayley/lattice.hpp"
#include "cayley/measurement.hpp"

using namespace cayley;

TEST_CASE("sampling a basis state") {
  const auto rec = sample_bitstrings(basis_state(10, 575), 10, 100, 3);
  CHECK(rec.counts.size() == 1);
  CHECK(rec.counts.at(575) == 100);
  CHECK(rec.n_shots == 100);
  CHECK(!rec.spam_applied);
  const auto hist = histogram(rec);
  REQUIRE(hist.size() == 1);
  CHECK(hist[0].label == 575);
  CHECK(hist[0].probability == 1.0);
}

TEST_CASE("Born rule and goodness of fit") {
  StateVector psi(1 << 14, cplx{0});
  psi[4351] = psi[8447] = 1 / std::sqrt(2.0);
  const auto rec = sample_bitstrings(psi, 14, 10000, 7);
  CHECK(std::abs(static_cast<double>(rec.counts.at(4351)) - 5000) < 3 * 50);
  CHECK(rec.counts.at(4351) + rec.counts.at(8447) == 10000);

  std::vector<double> p(16);
  double s = 0;
  for (int k = 0; k < 16; ++k) s += p[k] = 1.0 + k % 5;
  for (auto& v : p) v /= s;
  const std::uint64_t shots = 100000;
  const auto r = sample_bitstrings(p, 4, shots, 11);
  double chi2 = 0;
  for (int k = 0; k < 16; ++k) {
    const double expect = p[k] * shots;
    const double obs = r.counts.count(k) ? static_cast<double>(r.counts.at(k)) : 0.0;
    chi2 += (obs - expect) * (obs - expect) / expect;
  }
  CHECK(chi2 < 30.58);  // 15 degrees of freedom, p = 0.01
  CHECK(sample_bitstrings(p, 4, shots, 11).counts == r.counts);

  std::vector<double> bad(16, 0.1);
  CHECK_THROWS_AS(sample_bitstrings(bad, 4, 10, 1), Error);
  try {
    sample_bitstrings(bad, 4, 10, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalized);
  }

  DensityMatrix rho = DensityMatrix::Zero(4, 4);
  rho(2, 2) = 1;
  CHECK(sample_bitstrings(rho, 2, 5, 1).counts.at(2) == 5);
}

TEST_CASE("SPAM channel") {
  ShotRecord all_up;
  all_up.num_atoms = 1;
  all_up.n_shots = 100000;
  all_up.counts[1] = 100000;
  const auto noisy = apply_spam(all_up, {}, 5);
  CHECK(noisy.spam_applied);
  const double down = static_cast<double>(noisy.counts.at(0)) / 100000;
  CHECK(std::abs(down - 0.18) < 0.004);
  CHECK_THROWS_AS(apply_spam(noisy, {}, 5), Error);

  const auto same = apply_spam(sample_bitstrings(basis_state(10, 575), 10, 50, 1), {0, 0}, 2);
  CHECK(same.counts.at(575) == 50);

  // shot order does not matter: the record is a multiset, so build it two ways
  ShotRecord a, b;
  a.num_atoms = b.num_atoms = 3;
  a.n_shots = b.n_shots = 300;
  a.counts = {{1, 100}, {6, 200}};
  b.counts = {{6, 200}, {1, 100}};
  CHECK(apply_spam(a, {}, 9).counts == apply_spam(b, {}, 9).counts);
}

TEST_CASE("labels") {
  using S = Spin;
  const std::vector<S> g10{S::Up, S::Down, S::Down, S::Down, S::Up, S::Up, S::Up, S::Up, S::Up, S::Up};
  CHECK(encode_label(g10) == 575);
  std::vector<S> g22{S::Down, S::Up, S::Up, S::Up};
  g22.insert(g22.end(), 6, S::Down);
  g22.insert(g22.end(), 12, S::Up);
  CHECK(encode_label(g22) == 1839103);
  std::vector<S> g14{S::Up, S::Down, S::Down, S::Down, S::Down, S::Down};
  g14.insert(g14.end(), 8, S::Up);
  CHECK(encode_label(g14) == 8447);
  CHECK(decode_label(575, 10) == g10);
  for (int n = 1; n <= 16; ++n)
    for (Bitstring c = 0; c < (Bitstring{1} << n); ++c) REQUIRE(encode_label(decode_label(c, n)) == c);
}

TEST_CASE("histogram") {
  ShotRecord r;
  r.num_atoms = 2;
  r.n_shots = 10;
  r.counts = {{3, 7}, {0, 3}};
  const auto h = histogram(r);
  REQUIRE(h.size() == 2);
  CHECK(h[0].label == 0);
  CHECK(h[1].label == 3);
  CHECK(h[1].probability == doctest::Approx(0.7));
  // Wilson half-width with z = 1
  const double n = 10, p = 0.7;
  CHECK(h[1].stderr_ == doctest::Approx(std::sqrt(p * (1 - p) / n + 1 / (4 * n * n)) / (1 + 1 / n)));

  std::vector<double> uniform(1024, 1.0 / 1024);
  const auto big = histogram(sample_bitstrings(uniform, 10, 2000000, 4));
  double lo = 1, hi = 0;
  for (const auto& e : big) {
    lo = std::min(lo, e.probability);
    hi = std::max(hi, e.probability);
  }
  CHECK(hi - lo < 0.0006);
}

TEST_CASE("Neel order after SPAM") {
  const auto g = build_regular_tree(3, 3, 1.0, Layout::Planar).graph;
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : g.edges) edges.emplace_back(e.a, e.b);
  std::vector<double> p(1024, 0.0);
  p[575] = 1;
  const double predicted = spam_neel_prediction(p, 10, g.edges, {});
  CHECK(predicted == doctest::Approx(0.64 - 0.0256));
  const double mc = oracle::spam_neel_monte_carlo(575, 10, edges, 0.18, 0.02, 200000, 77);
  CHECK(std::abs(predicted - mc) < 0.005);

  const auto rec = apply_spam(sample_bitstrings(p, 10, 100000, 1), {}, 2);
  CHECK(std::abs(neel_order(rec, g.edges) - predicted) < 0.01);
  CHECK(neel_order(sample_bitstrings(p, 10, 10, 1), g.edges) == 1.0);
}
