#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cayley/dynamics.hpp"
#include "cayley/error.hpp"

namespace cayley {

namespace {

class MasterEquation {
 public:
  MasterEquation(const RydbergHamiltonian& h, const NoiseModel& noise)
      : h_(h), n_(h.num_atoms()), dim_(h.dim()), damping_(dim_, dim_) {
    for (std::size_t k = 0; k < dim_; ++k) {
      for (std::size_t l = 0; l < dim_; ++l) {
        const double dn = static_cast<double>(h.up_counts()[k]) - h.up_counts()[l];
        damping_(k, l) = -0.5 * (noise.individual * std::popcount(k ^ l) + noise.collective * dn * dn);
      }
    }
  }

  void derivative(Controls c, const DensityMatrix& rho, DensityMatrix& out) const {
    const cplx half_drive{0.0, -0.5 * c.omega};
    for (std::size_t l = 0; l < dim_; ++l) {
      const double dl = h_.diagonal(l, c);
      for (std::size_t k = 0; k < dim_; ++k) {
        const double dk = h_.diagonal(k, c);
        cplx flips = 0;
        for (int j = 0; j < n_; ++j) {
          const Bitstring m = atom_mask(j, n_);
          flips += rho(k ^ m, l) - rho(k, l ^ m);
        }
        out(k, l) = cplx{damping_(k, l), -(dk - dl)} * rho(k, l) + half_drive * flips;
      }
    }
  }

 private:
  const RydbergHamiltonian& h_;
  int n_;
  std::size_t dim_;
  Eigen::MatrixXd damping_;
};

DensityMatrix rk4_advance(const MasterEquation& eq, const Schedule& schedule, DensityMatrix rho,
                          double t0, double t1, double max_step, int& steps) {
  DensityMatrix k1(rho.rows(), rho.cols()), k2 = k1, k3 = k1, k4 = k1;
  for (const auto& piece : plan_steps(schedule, t0, t1, max_step)) {
    const double dt = piece.dt;
    for (int i = 0; i < piece.count; ++i) {
      const double t = piece.t0 + i * dt;
      const Controls c0 = schedule.at(t), cm = schedule.at(t + 0.5 * dt), c1 = schedule.at(t + dt);
      eq.derivative(c0, rho, k1);
      eq.derivative(cm, rho + 0.5 * dt * k1, k2);
      eq.derivative(cm, rho + 0.5 * dt * k2, k3);
      eq.derivative(c1, rho + dt * k3, k4);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ++steps;
    }
  }
  return rho;
}

EvolutionResult run_master(const RydbergHamiltonian& h, const Schedule& schedule, const DensityMatrix& rho0,
                           const NoiseModel& noise, const EvolutionOptions& opts,
                           const std::vector<double>& times, double step) {
  const MasterEquation eq(h, noise);
  const int n = h.num_atoms();
  EvolutionResult r;
  r.num_atoms = n;
  r.times = times;
  r.step_size = step;
  DensityMatrix rho = rho0;
  double t = 0;
  for (double ts : times) {
    rho = rk4_advance(eq, schedule, std::move(rho), t, ts, step, r.steps);
    t = ts;
    const double trace = rho.trace().real();
    std::vector<double> ex(n, 0.0);
    double ground = 0;
    for (std::size_t k = 0; k < h.dim(); ++k) {
      const double p = rho(k, k).real();
      for (int j = 0; j < n; ++j) {
        if (is_up(k, j, n)) ex[j] += p / trace;
      }
    }
    for (Bitstring g : opts.ground_configs) ground += rho(g, g).real() / trace;
    r.norm.push_back(trace);
    r.excitation.push_back(std::move(ex));
    r.excitation_stderr.emplace_back(n, 0.0);
    r.neel.push_back(neel_order(rho, opts.edges, n));
    r.neel_stderr.push_back(0.0);
    r.ground_probability.push_back(ground);
    r.ground_probability_stderr.push_back(0.0);
    const DensityMatrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue.push_back(solver.eigenvalues().minCoeff());
  }
  for (double tr : r.norm) r.norm_drift = std::max(r.norm_drift, std::abs(tr - 1.0));
  r.final_probabilities.resize(h.dim());
  for (std::size_t k = 0; k < h.dim(); ++k) r.final_probabilities[k] = rho(k, k).real();
  r.final_density = std::move(rho);
  return r;
}

}  // namespace

EvolutionResult evolve_lindblad(const RydbergHamiltonian& h, const Schedule& schedule,
                                const DensityMatrix& rho0, const NoiseModel& noise,
                                const EvolutionOptions& opts) {
  const int n = h.num_atoms();
  if (n > kMaxLindbladAtoms) {
    throw Error(ErrorCode::TooLarge,
                "master equation is limited to " + std::to_string(kMaxLindbladAtoms) + " atoms");
  }
  if (noise.individual < 0 || noise.collective < 0) {
    throw Error(ErrorCode::InvalidArgument, "dephasing rates must be non-negative");
  }
  const auto dim = static_cast<Eigen::Index>(h.dim());
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "initial density matrix has wrong dimension");
  }
  if (std::abs(rho0.trace() - cplx{1.0}) > 1e-9) {
    throw Error(ErrorCode::NotNormalized, "initial density matrix does not have unit trace");
  }
  auto times = opts.sample_times.empty() ? uniform_samples(schedule.t_final()) : opts.sample_times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0 || times[i] > schedule.t_final() * (1 + 1e-12) || (i > 0 && times[i] < times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "sample times must be sorted within [0, t_f]");
    }
  }
  double step = opts.steps.max_step > 0 ? opts.steps.max_step : 0.5 * default_max_step(h, schedule);

  EvolutionResult result = run_master(h, schedule, rho0, noise, opts, times, step);
  if (opts.steps.verify) {
    double change = 0;
    bool converged = false;
    for (int refinement = 0; refinement < opts.steps.max_refinements; ++refinement) {
      step *= 0.5;
      EvolutionResult fine = run_master(h, schedule, rho0, noise, opts, times, step);
      change = (fine.final_density - result.final_density).cwiseAbs().maxCoeff();
      result = std::move(fine);
      if (change < opts.steps.fidelity_tolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw Error(ErrorCode::StepControlFailure,
                  "step halving did not converge; last change " + std::to_string(change));
    }
  }
  if (result.norm_drift > 1e-8) {
    throw Error(ErrorCode::PositivityViolation, "trace drifted by " + std::to_string(result.norm_drift));
  }
  const double worst = *std::min_element(result.min_eigenvalue.begin(), result.min_eigenvalue.end());
  if (worst < -1e-8) {
    throw Error(ErrorCode::PositivityViolation,
                "density matrix lost positivity; minimum eigenvalue " + std::to_string(worst));
  }
  return result;
}

}  // namespace cayley
