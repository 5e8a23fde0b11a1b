#include "cayley/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cayley/error.hpp"
#include "cayley/parallel.hpp"

namespace cayley {

double blockade_radius(const PhysicalConstants& consts) {
  return std::pow(consts.c6 / consts.omega0, 1.0 / 6.0);
}

double distance_for_coupling(const PhysicalConstants& consts, double coupling) {
  if (!(coupling > 0)) throw Error(ErrorCode::InvalidArgument, "coupling must be positive");
  return std::pow(consts.c6 / coupling, 1.0 / 6.0);
}

void Couplings::set(int j, int k, double u) {
  if (j == k) throw Error(ErrorCode::InvalidArgument, "self coupling is not allowed");
  if (u < 0) throw Error(ErrorCode::InvalidArgument, "couplings must be non-negative");
  u_[static_cast<std::size_t>(j) * n_ + k] = u;
  u_[static_cast<std::size_t>(k) * n_ + j] = u;
}

std::vector<PairCoupling> Couplings::nonzero() const {
  std::vector<PairCoupling> out;
  for (int j = 0; j < n_; ++j) {
    for (int k = j + 1; k < n_; ++k) {
      if ((*this)(j, k) != 0.0) out.push_back({j, k, (*this)(j, k)});
    }
  }
  return out;
}

namespace {

void check_distinct(const Geometry& geo) {
  const int n = static_cast<int>(geo.positions.size());
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      if (distance(geo.positions[j], geo.positions[k]) == 0.0) {
        throw Error(ErrorCode::CoincidentAtoms,
                    "atoms " + std::to_string(j) + " and " + std::to_string(k) + " coincide");
      }
    }
  }
}

}  // namespace

Couplings interaction_matrix(const TreeGraph& g, const Geometry& geo, const PhysicalConstants& consts,
                             CouplingMode mode) {
  if (static_cast<int>(geo.positions.size()) != g.size()) {
    throw Error(ErrorCode::DimensionMismatch, "geometry and graph vertex counts differ");
  }
  check_distinct(geo);
  Couplings c(g.size());
  if (mode == CouplingMode::GraphIdeal) {
    const double u = consts.c6 / std::pow(geo.edge_length, 6);
    for (const auto& e : g.edges) c.set(e.a, e.b, u);
    return c;
  }
  for (int j = 0; j < g.size(); ++j) {
    for (int k = j + 1; k < g.size(); ++k) {
      c.set(j, k, consts.c6 / std::pow(distance(geo.positions[j], geo.positions[k]), 6));
    }
  }
  return c;
}

Couplings scaled_couplings(const TreeGraph& g, const Geometry& geo, double edge_coupling,
                           CouplingMode mode) {
  if (edge_coupling < 0) throw Error(ErrorCode::InvalidArgument, "coupling must be non-negative");
  Couplings c(g.size());
  if (mode == CouplingMode::GraphIdeal) {
    for (const auto& e : g.edges) c.set(e.a, e.b, edge_coupling);
    return c;
  }
  if (static_cast<int>(geo.positions.size()) != g.size()) {
    throw Error(ErrorCode::DimensionMismatch, "geometry and graph vertex counts differ");
  }
  check_distinct(geo);
  for (int j = 0; j < g.size(); ++j) {
    for (int k = j + 1; k < g.size(); ++k) {
      const double ratio = geo.edge_length / distance(geo.positions[j], geo.positions[k]);
      c.set(j, k, edge_coupling * std::pow(ratio, 6));
    }
  }
  return c;
}

RydbergHamiltonian::RydbergHamiltonian(Couplings couplings, CouplingMode mode)
    : n_(couplings.size()), mode_(mode), couplings_(std::move(couplings)) {
  if (n_ < 1) throw Error(ErrorCode::InvalidArgument, "need at least one atom");
  if (n_ > kMaxAtoms) {
    throw Error(ErrorCode::TooLarge, "state space of " + std::to_string(n_) + " atoms exceeds budget");
  }
  const auto pairs = couplings_.nonzero();
  const std::size_t d = dim();
  interaction_.assign(d, 0.0);
  up_.assign(d, 0);
  const int n = n_;
  parallel::for_chunks(d, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      double v = 0;
      for (const auto& p : pairs) {
        if (is_up(k, p.j, n) && is_up(k, p.k, n)) v += p.u;
      }
      interaction_[k] = v;
      up_[k] = static_cast<std::uint8_t>(std::popcount(static_cast<Bitstring>(k)));
    }
  });
  max_interaction_ = *std::max_element(interaction_.begin(), interaction_.end());
}

void RydbergHamiltonian::apply(Controls c, std::span<const cplx> in, std::span<cplx> out) const {
  const double half_omega = 0.5 * c.omega;
  const int n = n_;
  parallel::for_chunks(dim(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      cplx flips = 0;
      for (int j = 0; j < n; ++j) flips += in[k ^ (std::size_t{1} << j)];
      out[k] = diagonal(k, c) * in[k] + half_omega * flips;
    }
  });
}

double RydbergHamiltonian::norm_bound(Controls c) const {
  return max_interaction_ + 0.5 * n_ * (std::abs(c.delta) + std::abs(c.omega));
}

void apply_hamiltonian(const RydbergHamiltonian& h, Controls c, std::span<const cplx> in,
                       std::span<cplx> out) {
  if (in.size() != h.dim() || out.size() != h.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension does not match 2^N");
  }
  h.apply(c, in, out);
}

IsingParameters ising_parameters(double u, double delta_final) {
  return {u / 4.0, 3.0 * u / 4.0 - delta_final / 2.0, u / 4.0 - delta_final / 2.0, u / 4.0};
}

double ising_energy(const IsingParameters& p, const TreeGraph& g, Bitstring config) {
  const int n = g.size();
  const auto sz = [&](int v) { return is_up(config, v, n) ? 1.0 : -1.0; };
  double e = p.offset(g.num_edges());
  for (const auto& edge : g.edges) e += p.coupling * sz(edge.a) * sz(edge.b);
  for (int v = 0; v < n; ++v) e += (g.is_valence(v) ? p.field_valence : p.field_core) * sz(v);
  return e;
}

}  // namespace cayley
