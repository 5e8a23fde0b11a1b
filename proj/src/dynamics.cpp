#include "cayley/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cayley/error.hpp"
#include "cayley/parallel.hpp"

namespace cayley {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  const auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

std::vector<double> uniform_samples(double t_final, int count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = t_final * i / (count - 1);
  t.back() = t_final;
  return t;
}

StateVector basis_state(int num_atoms, Bitstring config) {
  StateVector psi(std::size_t{1} << num_atoms, cplx{0});
  psi.at(config) = 1.0;
  return psi;
}

Bitstring permute_config(Bitstring config, std::span<const int> swap) {
  const int n = static_cast<int>(swap.size());
  Bitstring out = 0;
  for (int v = 0; v < n; ++v) {
    if (is_up(config, v, n)) out |= atom_mask(swap[v], n);
  }
  return out;
}

namespace {

// [norm^2, <n_0> .. <n_{N-1}>, sum_E <sz sz>] from unnormalised probabilities.
std::vector<double> diagonal_moments(std::size_t dim, int n, std::span<const Edge> edges,
                                     const auto& prob) {
  const std::size_t chunk = parallel::kChunk;
  std::vector<std::vector<double>> parts(parallel::num_chunks(dim, chunk));
  parallel::for_chunks(dim, [&](std::size_t b, std::size_t e) {
    std::vector<double> acc(n + 2, 0.0);
    for (std::size_t k = b; k < e; ++k) {
      const double p = prob(k);
      if (p == 0.0) continue;
      acc[0] += p;
      for (int j = 0; j < n; ++j) {
        if (is_up(k, j, n)) acc[1 + j] += p;
      }
      int aligned = 0;
      for (const auto& edge : edges) aligned += is_up(k, edge.a, n) == is_up(k, edge.b, n);
      acc[n + 1] += p * (2.0 * aligned - static_cast<double>(edges.size()));
    }
    parts[b / chunk] = std::move(acc);
  }, chunk);
  std::vector<double> total(n + 2, 0.0);
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < part.size(); ++i) total[i] += part[i];
  }
  return total;
}

struct Snapshot {
  double norm = 0;
  std::vector<double> excitation;
  double neel = 0;
  double ground = 0;
};

Snapshot measure(std::size_t dim, int n, const EvolutionOptions& opts, const auto& prob) {
  const auto m = diagonal_moments(dim, n, opts.edges, prob);
  Snapshot s;
  const double total = m[0];
  s.norm = std::sqrt(total);
  s.excitation.resize(n);
  for (int j = 0; j < n; ++j) s.excitation[j] = m[1 + j] / total;
  s.neel = opts.edges.empty() ? 0.0 : -m[n + 1] / total / static_cast<double>(opts.edges.size());
  for (Bitstring g : opts.ground_configs) s.ground += prob(g) / total;
  return s;
}

Snapshot measure_state(std::span<const cplx> psi, int n, const EvolutionOptions& opts) {
  return measure(psi.size(), n, opts, [&](std::size_t k) { return std::norm(psi[k]); });
}

void record(EvolutionResult& r, const Snapshot& s) {
  r.norm.push_back(s.norm);
  r.excitation.push_back(s.excitation);
  r.excitation_stderr.emplace_back(s.excitation.size(), 0.0);
  r.neel.push_back(s.neel);
  r.neel_stderr.push_back(0.0);
  r.ground_probability.push_back(s.ground);
  r.ground_probability_stderr.push_back(0.0);
}

std::vector<double> resolve_samples(const EvolutionOptions& opts, double t_final) {
  auto times = opts.sample_times.empty() ? uniform_samples(t_final) : opts.sample_times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0 || times[i] > t_final * (1 + 1e-12) || (i > 0 && times[i] < times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "sample times must be sorted within [0, t_f]");
    }
  }
  return times;
}

void check_initial_state(const RydbergHamiltonian& h, std::span<const cplx> psi0) {
  if (psi0.size() != h.dim()) throw Error(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
  double n2 = 0;
  for (const auto& a : psi0) n2 += std::norm(a);
  if (std::abs(n2 - 1.0) > 1e-9) throw Error(ErrorCode::NotNormalized, "initial state is not normalised");
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  return parallel::sum_chunks(a.size(), cplx{0}, [&](std::size_t s, std::size_t e) {
    cplx acc = 0;
    for (std::size_t k = s; k < e; ++k) acc += std::conj(a[k]) * b[k];
    return acc;
  });
}

EvolutionResult run_closed(const RydbergHamiltonian& h, const Schedule& schedule, const StateVector& psi0,
                           const EvolutionOptions& opts, const std::vector<double>& times, double step) {
  EvolutionResult r;
  r.num_atoms = h.num_atoms();
  r.times = times;
  r.step_size = step;
  SplitStepPropagator prop(h, schedule);
  StateVector psi = psi0;
  double t = 0;
  for (double ts : times) {
    r.steps += prop.advance(psi, t, ts, step);
    t = ts;
    record(r, measure_state(psi, h.num_atoms(), opts));
    if (opts.keep_states) r.states.push_back(psi);
  }
  for (double nm : r.norm) r.norm_drift = std::max(r.norm_drift, std::abs(nm - 1.0));
  r.final_probabilities.resize(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) r.final_probabilities[k] = std::norm(psi[k]);
  r.final_state = std::move(psi);
  return r;
}

}  // namespace

EvolutionResult evolve_schrodinger(const RydbergHamiltonian& h, const Schedule& schedule,
                                   const StateVector& psi0, const EvolutionOptions& opts) {
  check_initial_state(h, psi0);
  const auto times = resolve_samples(opts, schedule.t_final());
  double step = opts.steps.max_step > 0 ? opts.steps.max_step : default_max_step(h, schedule);
  if (!opts.steps.verify) return run_closed(h, schedule, psi0, opts, times, step);

  EvolutionResult coarse = run_closed(h, schedule, psi0, opts, times, step);
  double infidelity = 0;
  for (int refinement = 0; refinement < opts.steps.max_refinements; ++refinement) {
    step *= 0.5;
    EvolutionResult fine = run_closed(h, schedule, psi0, opts, times, step);
    infidelity = 1.0 - std::norm(inner(coarse.final_state, fine.final_state));
    if (std::abs(infidelity) < opts.steps.fidelity_tolerance) return fine;
    coarse = std::move(fine);
  }
  throw Error(ErrorCode::StepControlFailure,
              "step halving did not reach fidelity tolerance; last change " + std::to_string(infidelity));
}

EvolutionResult evolve_trajectories(const RydbergHamiltonian& h, const Schedule& schedule,
                                    const StateVector& psi0, const NoiseModel& noise,
                                    int num_trajectories, std::uint64_t seed,
                                    const EvolutionOptions& opts) {
  check_initial_state(h, psi0);
  if (num_trajectories < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trajectory");
  if (noise.individual < 0 || noise.collective < 0) {
    throw Error(ErrorCode::InvalidArgument, "dephasing rates must be non-negative");
  }
  const int n = h.num_atoms();
  if (noise.active() && n > kMaxTrajectoryAtoms) {
    throw Error(ErrorCode::TooLarge, "noisy trajectories are limited to " +
                                         std::to_string(kMaxTrajectoryAtoms) + " atoms");
  }
  const auto times = resolve_samples(opts, schedule.t_final());
  const double step = opts.steps.max_step > 0 ? opts.steps.max_step : 0.5 * default_max_step(h, schedule);
  const std::size_t dim = h.dim();
  const std::size_t samples = times.size();
  const std::size_t width = n + 2;  // excitations, neel, ground

  constexpr int kBlock = 8;
  const int blocks = (num_trajectories + kBlock - 1) / kBlock;
  struct BlockSums {
    std::vector<double> sum, sum_sq, probs;
    int jumps = 0;
  };
  std::vector<BlockSums> parts(blocks);

  parallel::for_each_index(static_cast<std::size_t>(blocks), [&](std::size_t block) {
    BlockSums& acc = parts[block];
    acc.sum.assign(samples * width, 0.0);
    acc.sum_sq.assign(samples * width, 0.0);
    acc.probs.assign(dim, 0.0);
    SplitStepPropagator prop(h, schedule, noise);
    const int first = static_cast<int>(block) * kBlock;
    const int last = std::min(num_trajectories, first + kBlock);
    std::vector<double> weights(n + 1);
    for (int traj = first; traj < last; ++traj) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(traj)));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      StateVector psi = psi0;
      double threshold = uni(rng);
      double t = 0;
      const auto norm2 = [&] {
        double s = 0;
        for (const auto& a : psi) s += std::norm(a);
        return s;
      };
      const auto jump = [&] {
        const double n2 = norm2();
        std::fill(weights.begin(), weights.end(), 0.25 * noise.individual * n2);
        weights[n] = 0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double shift = h.up_counts()[k] - 0.5 * n;
          weights[n] += noise.collective * shift * shift * std::norm(psi[k]);
        }
        double total = 0;
        for (double w : weights) total += w;
        double pick = uni(rng) * total;
        int channel = n;
        for (int c = 0; c <= n; ++c) {
          if (pick < weights[c] || c == n) {
            channel = c;
            break;
          }
          pick -= weights[c];
        }
        for (std::size_t k = 0; k < dim; ++k) {
          if (channel < n) {
            if (!is_up(k, channel, n)) psi[k] = -psi[k];
          } else {
            psi[k] *= h.up_counts()[k] - 0.5 * n;
          }
        }
        const double nrm = std::sqrt(norm2());
        for (auto& a : psi) a /= nrm;
        ++acc.jumps;
        threshold = uni(rng);
      };
      for (std::size_t s = 0; s < samples; ++s) {
        for (const auto& piece : plan_steps(schedule, t, times[s], step)) {
          for (int i = 0; i < piece.count; ++i) {
            prop.step(psi, piece.t0 + i * piece.dt, piece.dt);
            if (noise.active() && norm2() < threshold) jump();
          }
        }
        t = times[s];
        const Snapshot snap = measure(dim, n, opts, [&](std::size_t k) { return std::norm(psi[k]); });
        double* row = acc.sum.data() + s * width;
        double* row_sq = acc.sum_sq.data() + s * width;
        for (int j = 0; j < n; ++j) {
          row[j] += snap.excitation[j];
          row_sq[j] += snap.excitation[j] * snap.excitation[j];
        }
        row[n] += snap.neel;
        row_sq[n] += snap.neel * snap.neel;
        row[n + 1] += snap.ground;
        row_sq[n + 1] += snap.ground * snap.ground;
      }
      const double total = norm2();
      for (std::size_t k = 0; k < dim; ++k) acc.probs[k] += std::norm(psi[k]) / total;
    }
  });

  std::vector<double> sum(samples * width, 0.0), sum_sq(samples * width, 0.0);
  EvolutionResult r;
  r.num_atoms = n;
  r.times = times;
  r.trajectories = num_trajectories;
  r.step_size = step;
  r.final_probabilities.assign(dim, 0.0);
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += part.sum[i];
      sum_sq[i] += part.sum_sq[i];
    }
    for (std::size_t k = 0; k < dim; ++k) r.final_probabilities[k] += part.probs[k];
    r.jumps += part.jumps;
  }
  const double count = num_trajectories;
  for (auto& p : r.final_probabilities) p /= count;
  const auto stats = [&](std::size_t idx, double& mean, double& err) {
    mean = sum[idx] / count;
    if (num_trajectories < 2) {
      err = 0;
      return;
    }
    const double var = std::max(0.0, (sum_sq[idx] - count * mean * mean) / (count - 1));
    err = std::sqrt(var / count);
  };
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> ex(n), ex_err(n);
    for (int j = 0; j < n; ++j) stats(s * width + j, ex[j], ex_err[j]);
    double neel, neel_err, ground, ground_err;
    stats(s * width + n, neel, neel_err);
    stats(s * width + n + 1, ground, ground_err);
    r.norm.push_back(1.0);
    r.excitation.push_back(std::move(ex));
    r.excitation_stderr.push_back(std::move(ex_err));
    r.neel.push_back(neel);
    r.neel_stderr.push_back(neel_err);
    r.ground_probability.push_back(ground);
    r.ground_probability_stderr.push_back(ground_err);
  }
  for (const auto& piece : plan_steps(schedule, 0.0, times.back(), step)) r.steps += piece.count;
  return r;
}

double neel_order_from_probabilities(std::span<const double> probs, std::span<const Edge> edges,
                                     int num_atoms) {
  if (edges.empty()) return 0.0;
  const auto m = diagonal_moments(probs.size(), num_atoms, edges, [&](std::size_t k) { return probs[k]; });
  return -m[num_atoms + 1] / m[0] / static_cast<double>(edges.size());
}

double neel_order(std::span<const cplx> state, std::span<const Edge> edges, int num_atoms) {
  if (edges.empty()) return 0.0;
  const auto m = diagonal_moments(state.size(), num_atoms, edges,
                                  [&](std::size_t k) { return std::norm(state[k]); });
  return -m[num_atoms + 1] / m[0] / static_cast<double>(edges.size());
}

double neel_order(const DensityMatrix& rho, std::span<const Edge> edges, int num_atoms) {
  if (edges.empty()) return 0.0;
  const auto m = diagonal_moments(static_cast<std::size_t>(rho.rows()), num_atoms, edges,
                                  [&](std::size_t k) { return rho(k, k).real(); });
  return -m[num_atoms + 1] / m[0] / static_cast<double>(edges.size());
}

double antisymmetric_weight(std::span<const cplx> state, std::span<const int> swap) {
  return parallel::sum_chunks(state.size(), 0.0, [&](std::size_t b, std::size_t e) {
    double acc = 0;
    for (std::size_t k = b; k < e; ++k) {
      acc += std::norm(0.5 * (state[k] - state[permute_config(k, swap)]));
    }
    return acc;
  });
}

std::vector<double> symmetry_overlap(const EvolutionResult& result, std::span<const int> swap) {
  if (result.states.empty()) {
    throw Error(ErrorCode::InvalidArgument, "symmetry overlap needs stored state snapshots");
  }
  std::vector<double> out;
  out.reserve(result.states.size());
  for (const auto& s : result.states) out.push_back(antisymmetric_weight(s, swap));
  return out;
}

}  // namespace cayley
