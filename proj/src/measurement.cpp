#include "cayley/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cayley/error.hpp"
#include "cayley/parallel.hpp"

namespace cayley {

namespace {

constexpr std::uint64_t kShotRange = 1024;

void check_atoms(int num_atoms, std::size_t dim) {
  if (num_atoms < 1 || num_atoms > kMaxLabelAtoms) {
    throw Error(ErrorCode::InvalidArgument, "atom count out of range");
  }
  if (dim != (std::size_t{1} << num_atoms)) {
    throw Error(ErrorCode::DimensionMismatch, "distribution size does not match 2^N");
  }
}

double spin_value(Bitstring c, int atom, int n) { return is_up(c, atom, n) ? 1.0 : -1.0; }

}  // namespace

ShotRecord sample_bitstrings(std::span<const double> probabilities, int num_atoms,
                             std::uint64_t n_shots, std::uint64_t seed) {
  check_atoms(num_atoms, probabilities.size());
  if (n_shots < 1) throw Error(ErrorCode::InvalidArgument, "need at least one shot");
  std::vector<double> cdf(probabilities.size());
  double total = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] < -1e-12) throw Error(ErrorCode::InvalidArgument, "negative probability");
    total += std::max(0.0, probabilities[k]);
    cdf[k] = total;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw Error(ErrorCode::NotNormalized, "probabilities sum to " + std::to_string(total));
  }

  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] > 0) last_positive = k;
  }

  const std::uint64_t ranges = (n_shots + kShotRange - 1) / kShotRange;
  std::vector<std::vector<Bitstring>> draws(ranges);
  parallel::for_each_index(ranges, [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(seed, r));
    std::uniform_real_distribution<double> uni(0.0, total);
    const std::uint64_t begin = r * kShotRange;
    const std::uint64_t end = std::min(n_shots, begin + kShotRange);
    auto& out = draws[r];
    out.reserve(end - begin);
    for (std::uint64_t i = begin; i < end; ++i) {
      const double u = uni(rng);
      auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (k == cdf.size()) k = last_positive;
      out.push_back(k);
    }
  });

  ShotRecord rec;
  rec.num_atoms = num_atoms;
  rec.n_shots = n_shots;
  rec.seed = seed;
  for (const auto& range : draws) {
    for (Bitstring b : range) ++rec.counts[b];
  }
  return rec;
}

ShotRecord sample_bitstrings(std::span<const cplx> state, int num_atoms, std::uint64_t n_shots,
                             std::uint64_t seed) {
  std::vector<double> p(state.size());
  for (std::size_t k = 0; k < state.size(); ++k) p[k] = std::norm(state[k]);
  return sample_bitstrings(p, num_atoms, n_shots, seed);
}

ShotRecord sample_bitstrings(const DensityMatrix& rho, int num_atoms, std::uint64_t n_shots,
                             std::uint64_t seed) {
  std::vector<double> p(static_cast<std::size_t>(rho.rows()));
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = rho(k, k).real();
  return sample_bitstrings(p, num_atoms, n_shots, seed);
}

ShotRecord apply_spam(const ShotRecord& record, const SpamModel& spam, std::uint64_t seed) {
  if (record.spam_applied) throw Error(ErrorCode::DoubleApplication, "SPAM already applied to this record");
  const auto valid = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!valid(spam.p_down_given_up) || !valid(spam.p_up_given_down)) {
    throw Error(ErrorCode::InvalidArgument, "SPAM probabilities must lie in [0, 1]");
  }
  const int n = record.num_atoms;
  std::vector<Bitstring> shots;
  shots.reserve(record.n_shots);
  for (const auto& [label, count] : record.counts) shots.insert(shots.end(), count, label);

  parallel::for_chunks(shots.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      std::mt19937_64 rng(derive_seed(seed, i));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      Bitstring c = shots[i];
      for (int j = 0; j < n; ++j) {
        const double u = uni(rng);
        if (is_up(c, j, n) ? u < spam.p_down_given_up : u < spam.p_up_given_down) c ^= atom_mask(j, n);
      }
      shots[i] = c;
    }
  });

  ShotRecord out;
  out.num_atoms = n;
  out.n_shots = record.n_shots;
  out.spam_applied = true;
  out.seed = record.seed;
  for (Bitstring s : shots) ++out.counts[s];
  return out;
}

Bitstring encode_label(std::span<const Spin> spins) {
  const int n = static_cast<int>(spins.size());
  if (n > kMaxLabelAtoms) throw Error(ErrorCode::InvalidArgument, "too many atoms for a label");
  Bitstring label = 0;
  for (int j = 0; j < n; ++j) {
    if (spins[j] == Spin::Up) label |= atom_mask(j, n);
  }
  return label;
}

std::vector<Spin> decode_label(Bitstring label, int num_atoms) {
  if (num_atoms < 0 || num_atoms > kMaxLabelAtoms) {
    throw Error(ErrorCode::InvalidArgument, "too many atoms for a label");
  }
  std::vector<Spin> spins(num_atoms);
  for (int j = 0; j < num_atoms; ++j) spins[j] = is_up(label, j, num_atoms) ? Spin::Up : Spin::Down;
  return spins;
}

std::vector<HistogramEntry> histogram(const ShotRecord& record) {
  std::vector<HistogramEntry> out;
  const double n = static_cast<double>(record.n_shots);
  for (const auto& [label, count] : record.counts) {
    const double p = count / n;
    const double half = std::sqrt(p * (1 - p) / n + 0.25 / (n * n)) / (1 + 1 / n);
    out.push_back({label, count, p, half});
  }
  return out;
}

double neel_order(const ShotRecord& record, std::span<const Edge> edges) {
  if (edges.empty() || record.n_shots == 0) return 0.0;
  const int n = record.num_atoms;
  double acc = 0;
  for (const auto& [label, count] : record.counts) {
    double corr = 0;
    for (const auto& e : edges) corr += spin_value(label, e.a, n) * spin_value(label, e.b, n);
    acc += static_cast<double>(count) * corr;
  }
  return -acc / (static_cast<double>(record.n_shots) * static_cast<double>(edges.size()));
}

double spam_neel_prediction(std::span<const double> probabilities, int num_atoms,
                            std::span<const Edge> edges, const SpamModel& spam) {
  check_atoms(num_atoms, probabilities.size());
  if (edges.empty()) return 0.0;
  const double a = 1.0 - spam.p_down_given_up - spam.p_up_given_down;
  const double b = spam.p_up_given_down - spam.p_down_given_up;
  double corr = 0, sum = 0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    const double p = probabilities[k];
    if (p == 0.0) continue;
    for (const auto& e : edges) {
      const double si = spin_value(k, e.a, num_atoms), sj = spin_value(k, e.b, num_atoms);
      corr += p * si * sj;
      sum += p * (si + sj);
    }
  }
  const double m = static_cast<double>(edges.size());
  return -a * a * corr / m - a * b * sum / m - b * b;
}

}  // namespace cayley
