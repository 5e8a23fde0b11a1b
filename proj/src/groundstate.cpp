#include "cayley/groundstate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cayley/error.hpp"
#include "cayley/parallel.hpp"

namespace cayley {

IsingProblem make_ising_problem(const TreeGraph& g, double edge_coupling, double delta_final,
                                CouplingMode mode, const Geometry* geo) {
  if (mode == CouplingMode::FullVdW && geo == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "FullVdW couplings need a geometry");
  }
  IsingProblem p;
  p.num_atoms = g.size();
  p.pairs = scaled_couplings(g, geo ? *geo : Geometry{}, edge_coupling, mode).nonzero();
  p.delta_final = delta_final;
  p.energy_scale = std::max(std::abs(edge_coupling) + std::abs(delta_final),
                            std::numeric_limits<double>::min());
  return p;
}

double classical_energy(Bitstring config, const IsingProblem& problem) {
  const int n = problem.num_atoms;
  double interaction = 0;
  for (const auto& p : problem.pairs) {
    if (is_up(config, p.j, n) && is_up(config, p.k, n)) interaction += p.u;
  }
  const int up = std::popcount(config);
  return interaction - 0.5 * problem.delta_final * (2.0 * up - n);
}

namespace {

struct Candidates {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Bitstring>> within;

  void offer(double e, Bitstring c, double tol) {
    if (e > best + tol) return;
    if (e < best) {
      best = e;
      std::erase_if(within, [&](const auto& x) { return x.first > best + tol; });
    }
    within.emplace_back(e, c);
  }
};

}  // namespace

GroundSet brute_force_ground(const IsingProblem& problem) {
  const int n = problem.num_atoms;
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "empty problem");
  if (n > kMaxEnumerationAtoms) {
    throw Error(ErrorCode::TooLarge,
                "enumeration of " + std::to_string(n) + " spins exceeds the budget of " +
                    std::to_string(kMaxEnumerationAtoms));
  }
  const std::size_t total = std::size_t{1} << n;
  const double tol = problem.tie_tolerance();
  const std::size_t chunk = parallel::kChunk;
  std::vector<Candidates> parts(parallel::num_chunks(total, chunk));
  parallel::for_chunks(total, [&](std::size_t b, std::size_t e) {
    Candidates& local = parts[b / chunk];
    for (std::size_t k = b; k < e; ++k) local.offer(classical_energy(k, problem), k, tol);
  }, chunk);

  Candidates merged;
  for (const auto& part : parts) merged.best = std::min(merged.best, part.best);
  GroundSet out;
  out.energy = merged.best;
  for (const auto& part : parts) {
    for (const auto& [e, c] : part.within) {
      if (e <= merged.best + tol) out.configs.push_back(c);
    }
  }
  std::sort(out.configs.begin(), out.configs.end());
  return out;
}

const char* to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::I_AllDown: return "I";
    case PhaseLabel::II_AllUp: return "II";
    case PhaseLabel::III_ShellAlternating: return "III";
    case PhaseLabel::IV_CentersUpUp: return "IV";
    case PhaseLabel::V_CentersDegenerate: return "V";
    case PhaseLabel::Other: return "Other";
  }
  return "Other";
}

Bitstring shell_alternating_config(const TreeGraph& g) {
  Bitstring c = 0;
  for (int v = 0; v < g.size(); ++v) {
    if ((g.valence_shell() - g.shell_of[v]) % 2 == 0) c |= atom_mask(v, g.size());
  }
  return c;
}

PhaseLabel classify_phase(const GroundSet& ground, const TreeGraph& g) {
  const int n = g.size();
  const Bitstring all_up = (n >= 64) ? ~Bitstring{0} : (Bitstring{1} << n) - 1;
  const Bitstring alternating = shell_alternating_config(g);
  const auto& cs = ground.configs;
  if (cs.size() == 1) {
    if (cs[0] == 0) return PhaseLabel::I_AllDown;
    if (cs[0] == all_up) return PhaseLabel::II_AllUp;
    if (cs[0] == alternating) {
      return g.kind == TreeKind::DualCenter ? PhaseLabel::IV_CentersUpUp
                                            : PhaseLabel::III_ShellAlternating;
    }
    return PhaseLabel::Other;
  }
  if (g.kind == TreeKind::DualCenter && cs.size() == 2) {
    std::vector<Bitstring> expected;
    for (int v = 0; v < n; ++v) {
      if (g.shell_of[v] == 0) expected.push_back(alternating & ~atom_mask(v, n));
    }
    std::sort(expected.begin(), expected.end());
    if (expected == cs) return PhaseLabel::V_CentersDegenerate;
  }
  return PhaseLabel::Other;
}

std::vector<PhasePoint> phase_diagram(const TreeGraph& g,
                                      std::span<const std::pair<double, double>> grid,
                                      CouplingMode mode, const Geometry* geo) {
  std::vector<PhasePoint> out;
  out.reserve(grid.size());
  for (const auto& [u, delta] : grid) {
    if (!std::isfinite(u) || !std::isfinite(delta)) {
      throw Error(ErrorCode::InvalidArgument, "phase-diagram grid must be finite");
    }
    const auto ground = brute_force_ground(make_ising_problem(g, u, delta, mode, geo));
    out.push_back({u, delta, classify_phase(ground, g), ground.degeneracy(), ground.energy});
  }
  return out;
}

namespace {

double real_dot(std::span<const cplx> a, std::span<const cplx> b) {
  return parallel::sum_chunks(a.size(), 0.0, [&](std::size_t s, std::size_t e) {
    double acc = 0;
    for (std::size_t k = s; k < e; ++k) acc += std::real(std::conj(a[k]) * b[k]);
    return acc;
  });
}

cplx complex_dot(std::span<const cplx> a, std::span<const cplx> b) {
  return parallel::sum_chunks(a.size(), cplx{0}, [&](std::size_t s, std::size_t e) {
    cplx acc = 0;
    for (std::size_t k = s; k < e; ++k) acc += std::conj(a[k]) * b[k];
    return acc;
  });
}

void normalize(StateVector& v) {
  const double nrm = std::sqrt(real_dot(v, v));
  for (auto& x : v) x /= nrm;
}

}  // namespace

EigenPair exact_ground_state(const RydbergHamiltonian& h, Controls c, const LanczosOptions& opts) {
  if (h.num_atoms() > kMaxExactDiagonalizationAtoms) {
    throw Error(ErrorCode::TooLarge, "exact diagonalisation is limited to " +
                                         std::to_string(kMaxExactDiagonalizationAtoms) + " atoms");
  }
  const std::size_t dim = h.dim();
  const int m_max = static_cast<int>(std::min<std::size_t>(opts.krylov_dim, dim));
  const double scale = std::max(h.norm_bound(c), std::numeric_limits<double>::min());

  StateVector start(dim);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (auto& x : start) x = 1.0 + 0.5 * uni(rng);
  normalize(start);

  std::vector<StateVector> basis;
  StateVector w(dim);
  EigenPair result;
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    basis.assign(1, start);
    std::vector<double> alpha, beta;
    for (int j = 0; j < m_max; ++j) {
      h.apply(c, basis[j], w);
      alpha.push_back(real_dot(basis[j], w));
      // Full reorthogonalisation, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) {
          const cplx proj = complex_dot(q, w);
          for (std::size_t k = 0; k < dim; ++k) w[k] -= proj * q[k];
        }
      }
      const double b = std::sqrt(real_dot(w, w));
      if (j + 1 == m_max || b < 1e-13 * scale) break;
      beta.push_back(b);
      StateVector next(dim);
      for (std::size_t k = 0; k < dim; ++k) next[k] = w[k] / b;
      basis.push_back(std::move(next));
    }

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    const Eigen::VectorXd s = eig.eigenvectors().col(0);

    StateVector ritz(dim, cplx{0});
    for (int i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < dim; ++k) ritz[k] += s(i) * basis[i][k];
    }
    normalize(ritz);
    h.apply(c, ritz, w);
    const double theta = real_dot(ritz, w);
    double res2 = 0;
    for (std::size_t k = 0; k < dim; ++k) res2 += std::norm(w[k] - theta * ritz[k]);

    result.energy = theta;
    result.state = ritz;
    result.iterations = restart + 1;
    result.residual = std::sqrt(res2);
    if (result.residual <= opts.tolerance * scale) {
      // Fix the global phase so the largest amplitude is real and positive.
      const auto big = std::max_element(result.state.begin(), result.state.end(),
                                        [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
      const cplx phase = std::abs(*big) / *big;
      for (auto& x : result.state) x *= phase;
      return result;
    }
    start = std::move(ritz);
  }
  throw Error(ErrorCode::ConvergenceFailure,
              "Lanczos did not converge after " + std::to_string(result.iterations) +
                  " restarts; residual " + std::to_string(result.residual) + ", tolerance " +
                  std::to_string(opts.tolerance * scale));
}

}  // namespace cayley
