#include "cayley/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"

#include "cayley/error.hpp"
#include "cayley/holography.hpp"
#include "cayley/measurement.hpp"
#include "cayley/parallel.hpp"

namespace cayley {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class Output {
 public:
  explicit Output(const ExperimentConfig& cfg) : dir_(cfg.output_dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir_.string());
  }

  std::ofstream open(const std::string& name, bool binary = false) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, binary ? std::ios::binary : std::ios::out);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
    files_.push_back(p.string());
    return out;
  }

  void close(std::ofstream& out) {
    out.close();
    if (!out) throw Error(ErrorCode::Io, "failed writing " + files_.back());
  }

  std::vector<std::string> files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json graph_metadata(const ExperimentConfig& cfg, const CayleyTree& tree) {
  const auto k = physical_constants(cfg);
  const double rb = blockade_radius(k);
  return {{"graph", cfg.graph.kind},
          {"num_atoms", tree.graph.size()},
          {"num_edges", tree.graph.num_edges()},
          {"edge_length_um", tree.geometry.edge_length},
          {"blockade_radius_um", rb},
          {"d_over_rb", tree.geometry.edge_length / rb},
          {"reference_d_over_rb",
           cfg.reference_d_over_rb ? json(*cfg.reference_d_over_rb) : json(nullptr)},
          {"U_over_Omega0", edge_coupling(cfg) / k.omega0},
          {"mode", cfg.mode == CouplingMode::GraphIdeal ? "ideal" : "full"}};
}

Bitstring argmax(std::span<const double> p) {
  return static_cast<Bitstring>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<std::string> run_geometry(const ExperimentConfig& cfg) {
  Output out(cfg);
  const CayleyTree tree = build_tree(cfg);
  auto geo = out.open("geometry.txt");
  write_geometry(geo, tree.graph, tree.geometry);
  out.close(geo);
  const ValidationReport rep = validate_geometry(tree.graph, tree.geometry);
  json j = graph_metadata(cfg, tree);
  j["edge_dev_max"] = rep.edge_dev_max;
  j["min_nonedge_ratio"] = nullable(rep.min_nonedge_ratio);
  j["max_nonedge_coupling_ratio"] = rep.max_nonedge_coupling_ratio;
  j["nonedge_distance_ok"] = rep.min_nonedge_ratio >= std::sqrt(3.0) * (1 - 1e-9);
  j["nonedge_coupling_ok"] = rep.max_nonedge_coupling_ratio <= (1.0 / 27.0) * (1 + 1e-9);
  auto val = out.open("validation.json");
  val << j.dump(2) << '\n';
  out.close(val);
  return out.files();
}

std::vector<std::string> run_phase_diagram(const ExperimentConfig& cfg) {
  Output out(cfg);
  const CayleyTree tree = build_tree(cfg);
  const auto grid = phase_diagram_points(cfg);
  const auto points = phase_diagram(tree.graph, grid, cfg.mode, &tree.geometry);
  auto csv = out.open("phase_diagram.csv");
  csv << "U_over_Omega0,Delta_over_Omega0,label,degeneracy,energy\n";
  for (const auto& p : points) {
    csv << num(p.coupling) << ',' << num(p.delta) << ',' << to_string(p.label) << ',' << p.degeneracy << ','
        << num(p.energy) << '\n';
  }
  out.close(csv);
  return out.files();
}

json anneal_summary(const ExperimentConfig& cfg, const AnnealRun& run) {
  const auto& r = run.result;
  json j = graph_metadata(cfg, run.tree);
  j["t_final_us"] = r.times.back();
  j["noisy"] = run.noisy;
  j["ground_labels"] = run.ground.configs;
  j["ground_degeneracy"] = run.ground.degeneracy();
  const Bitstring best = argmax(r.final_probabilities);
  j["argmax_label"] = best;
  j["argmax_probability"] = r.final_probabilities[best];
  j["final_ground_probability"] = r.ground_probability.back();
  j["final_neel"] = r.neel.back();
  j["trajectories"] = r.trajectories;
  j["jumps"] = r.jumps;
  j["steps"] = r.steps;
  j["step_size_us"] = r.step_size;
  j["norm_drift"] = r.norm_drift;
  return j;
}

std::vector<std::string> run_anneal_command(const ExperimentConfig& cfg) {
  Output out(cfg);
  const AnnealRun run = run_anneal(cfg);
  const auto& r = run.result;
  auto lines = out.open("anneal.jsonl");
  for (std::size_t s = 0; s < r.times.size(); ++s) {
    json j = {{"t", r.times[s]},
              {"norm", r.norm[s]},
              {"neel", r.neel[s]},
              {"neel_stderr", r.neel_stderr[s]},
              {"ground_probability", r.ground_probability[s]},
              {"ground_probability_stderr", r.ground_probability_stderr[s]},
              {"n", r.excitation[s]},
              {"n_stderr", r.excitation_stderr[s]}};
    lines << j.dump() << '\n';
  }
  out.close(lines);
  auto summary = out.open("anneal_summary.json");
  summary << anneal_summary(cfg, run).dump(2) << '\n';
  out.close(summary);
  return out.files();
}

std::vector<std::string> run_sample(const ExperimentConfig& cfg) {
  Output out(cfg);
  const AnnealRun run = run_anneal(cfg);
  const int n = run.tree.graph.size();
  ShotRecord rec = sample_bitstrings(run.result.final_probabilities, n, cfg.shots, derive_seed(cfg.seed, 2));
  const double neel_before = neel_order(rec, run.tree.graph.edges);
  if (cfg.spam.enabled) rec = apply_spam(rec, build_spam(cfg), derive_seed(cfg.seed, 3));
  const auto hist = histogram(rec);
  auto csv = out.open("histogram.csv");
  csv << "label,count,probability,stderr\n";
  for (const auto& h : hist) {
    csv << h.label << ',' << h.count << ',' << num(h.probability) << ',' << num(h.stderr_) << '\n';
  }
  out.close(csv);
  const auto top = std::max_element(hist.begin(), hist.end(), [](const auto& a, const auto& b) {
    return a.count < b.count;
  });
  json j = anneal_summary(cfg, run);
  j["shots"] = rec.n_shots;
  j["spam_applied"] = rec.spam_applied;
  j["sampled_argmax_label"] = top->label;
  j["sampled_argmax_probability"] = top->probability;
  j["sampled_neel_before_spam"] = neel_before;
  j["sampled_neel"] = neel_order(rec, run.tree.graph.edges);
  j["predicted_neel_after_spam"] = cfg.spam.enabled
      ? spam_neel_prediction(run.result.final_probabilities, n, run.tree.graph.edges, build_spam(cfg))
      : neel_order_from_probabilities(run.result.final_probabilities, run.tree.graph.edges, n);
  auto summary = out.open("sample_summary.json");
  summary << j.dump(2) << '\n';
  out.close(summary);
  return out.files();
}

std::vector<std::string> run_neel(const ExperimentConfig& cfg) {
  Output out(cfg);
  const AnnealRun run = run_anneal(cfg);
  const auto& r = run.result;
  const int n = run.tree.graph.size();
  const auto& edges = run.tree.graph.edges;
  const SpamModel spam = build_spam(cfg);
  const double a = 1.0 - spam.p_down_given_up - spam.p_up_given_down;
  const double b = spam.p_up_given_down - spam.p_down_given_up;
  auto csv = out.open("neel.csv");
  csv << "t,neel,neel_stderr,neel_spam";
  for (int j = 0; j < n; ++j) csv << ",n_" << j;
  csv << '\n';
  for (std::size_t s = 0; s < r.times.size(); ++s) {
    double mean_sum = 0;
    for (const auto& e : edges) mean_sum += 2 * r.excitation[s][e.a] - 1 + 2 * r.excitation[s][e.b] - 1;
    mean_sum /= static_cast<double>(edges.size());
    const double spammed = cfg.spam.enabled ? a * a * r.neel[s] - a * b * mean_sum - b * b : r.neel[s];
    csv << num(r.times[s]) << ',' << num(r.neel[s]) << ',' << num(r.neel_stderr[s]) << ',' << num(spammed);
    for (int j = 0; j < n; ++j) csv << ',' << num(r.excitation[s][j]);
    csv << '\n';
  }
  out.close(csv);
  return out.files();
}

std::vector<std::string> run_holo(const ExperimentConfig& cfg) {
  Output out(cfg);
  TargetSet targets{holography_targets(cfg), {}};
  const SlmPlane plane = build_plane(cfg);
  const WgsResult w = wgs_optimize(targets, plane, cfg.holography.iterations, derive_seed(cfg.seed, 4));
  auto bin = out.open("holo_phase.bin", true);
  write_phase(bin, w.phase, plane.width, plane.height);
  out.close(bin);
  auto csv = out.open("holo_intensities.csv");
  csv << "iteration,target,x_um,y_um,z_um,intensity\n";
  for (std::size_t it = 0; it < w.intensity_history.size(); ++it) {
    for (std::size_t j = 0; j < targets.sites.size(); ++j) {
      const Vec3 s = targets.sites[j];
      csv << it + 1 << ',' << j << ',' << num(s.x) << ',' << num(s.y) << ',' << num(s.z) << ','
          << num(w.intensity_history[it][j]) << '\n';
    }
  }
  out.close(csv);
  auto uni = out.open("holo_uniformity.csv");
  uni << "iteration,uniformity\n";
  for (std::size_t it = 0; it < w.uniformity.size(); ++it) uni << it + 1 << ',' << num(w.uniformity[it]) << '\n';
  out.close(uni);
  return out.files();
}

}  // namespace

Subcommand parse_subcommand(const std::string& name) {
  for (auto s : {Subcommand::Geometry, Subcommand::PhaseDiagram, Subcommand::Anneal, Subcommand::Sample,
                 Subcommand::Neel, Subcommand::Holo}) {
    if (name == to_string(s)) return s;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown subcommand " + name);
}

const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Geometry: return "geometry";
    case Subcommand::PhaseDiagram: return "phase-diagram";
    case Subcommand::Anneal: return "anneal";
    case Subcommand::Sample: return "sample";
    case Subcommand::Neel: return "neel";
    case Subcommand::Holo: return "holo";
  }
  return "?";
}

std::vector<std::pair<double, double>> phase_diagram_points(const ExperimentConfig& cfg) {
  if (!cfg.phase_diagram.points.empty()) return cfg.phase_diagram.points;
  std::vector<std::pair<double, double>> grid;
  for (double u : cfg.phase_diagram.coupling.values()) {
    for (double d : cfg.phase_diagram.delta.values()) grid.emplace_back(u, d);
  }
  return grid;
}

std::vector<Vec3> holography_targets(const ExperimentConfig& cfg) {
  const auto& h = cfg.holography;
  if (!h.targets.empty()) return h.targets;
  if (h.random_targets > 0) {
    std::mt19937_64 rng(derive_seed(cfg.seed, 5));
    std::uniform_real_distribution<double> uni(-h.extent_um, h.extent_um);
    std::vector<Vec3> out(h.random_targets);
    for (auto& v : out) v = {uni(rng), uni(rng), uni(rng)};
    return out;
  }
  return build_tree(cfg).geometry.positions;
}

void check_budget(const ExperimentConfig& cfg, Subcommand s) {
  const int n = graph_size(cfg.graph);
  const auto too_large = [&](const std::string& why) {
    throw Error(ErrorCode::TooLarge, std::string(to_string(s)) + ": " + why);
  };
  switch (s) {
    case Subcommand::Geometry:
      break;
    case Subcommand::PhaseDiagram: {
      const double work = static_cast<double>(phase_diagram_points(cfg).size()) * std::ldexp(1.0, n);
      if (n > kMaxEnumerationAtoms || work > kMaxPhaseDiagramWork) {
        too_large(std::to_string(phase_diagram_points(cfg).size()) + " grid points on " + std::to_string(n) +
                  " atoms exceed the enumeration budget");
      }
      break;
    }
    case Subcommand::Anneal:
    case Subcommand::Sample:
    case Subcommand::Neel:
      if (cfg.noise.enabled && n > kMaxTrajectoryAtoms) {
        too_large("noisy dynamics limited to " + std::to_string(kMaxTrajectoryAtoms) + " atoms, graph has " +
                  std::to_string(n) + "; disable noise");
      }
      if (n > kMaxStateVectorAtoms) {
        too_large("state-vector dynamics limited to " + std::to_string(kMaxStateVectorAtoms) + " atoms");
      }
      break;
    case Subcommand::Holo: {
      const double work = static_cast<double>(cfg.holography.width) * cfg.holography.height *
                          std::max<std::size_t>(1, holography_targets(cfg).size());
      if (work > 4.0e9) too_large("pixel count times target count exceeds 4e9");
      break;
    }
  }
}

AnnealRun run_anneal(const ExperimentConfig& cfg, bool keep_states) {
  AnnealRun run;
  run.tree = build_tree(cfg);
  const auto& g = run.tree.graph;
  const double U = edge_coupling(cfg);
  const Schedule sched = build_schedule(cfg);
  const double delta_f = angular_from_mhz(cfg.schedule.delta_final_mhz);
  run.ground = brute_force_ground(make_ising_problem(g, U, delta_f, cfg.mode, &run.tree.geometry));

  const RydbergHamiltonian h(scaled_couplings(g, run.tree.geometry, U, cfg.mode), cfg.mode);
  EvolutionOptions opts;
  opts.sample_times = uniform_samples(sched.t_final(), cfg.schedule.samples);
  opts.edges = g.edges;
  opts.ground_configs = run.ground.configs;
  opts.keep_states = keep_states;
  const StateVector psi0 = basis_state(g.size(), 0);
  const NoiseModel noise = build_noise(cfg);
  run.noisy = noise.active();
  if (run.noisy) {
    run.result = evolve_trajectories(h, sched, psi0, noise, cfg.noise.trajectories, derive_seed(cfg.seed, 1), opts);
  } else {
    run.result = evolve_schrodinger(h, sched, psi0, opts);
  }
  return run;
}

std::vector<std::string> run_experiment(const ExperimentConfig& cfg, Subcommand s) {
  check_budget(cfg, s);
  if (cfg.threads > 0) parallel::set_threads(cfg.threads);
  switch (s) {
    case Subcommand::Geometry: return run_geometry(cfg);
    case Subcommand::PhaseDiagram: return run_phase_diagram(cfg);
    case Subcommand::Anneal: return run_anneal_command(cfg);
    case Subcommand::Sample: return run_sample(cfg);
    case Subcommand::Neel: return run_neel(cfg);
    case Subcommand::Holo: return run_holo(cfg);
  }
  return {};
}

}  // namespace cayley
