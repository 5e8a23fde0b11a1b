#include "cayley/cayley.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "cayley/config.hpp"
#include "cayley/error.hpp"
#include "cayley/experiment.hpp"
#include "cayley/groundstate.hpp"
#include "cayley/measurement.hpp"
#include "cayley/parallel.hpp"

struct cayley_config {
  cayley::ExperimentConfig cfg;
};
struct cayley_tree {
  cayley::CayleyTree tree;
};
struct cayley_anneal {
  cayley::AnnealRun run;
};

namespace {

thread_local std::string last_error;

template <class F>
cayley_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return CAYLEY_OK;
  } catch (const cayley::Error& e) {
    last_error = e.what();
    return static_cast<cayley_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CAYLEY_ERR_TOO_LARGE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CAYLEY_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw cayley::Error(cayley::ErrorCode::InvalidArgument, what);
}

template <class T>
cayley_status make(T** out, auto&& build) {
  return guard([&] {
    require(out != nullptr, "null output pointer");
    *out = new T{build()};
  });
}

}  // namespace

extern "C" {

const char* cayley_version(void) { return "1.0.0"; }
const char* cayley_last_error(void) { return last_error.c_str(); }

const char* cayley_status_name(cayley_status status) {
  if (status == CAYLEY_OK) return "Ok";
  if (status == CAYLEY_ERR_INTERNAL) return "Internal";
  if (status >= CAYLEY_ERR_INVALID_ARGUMENT && status <= CAYLEY_ERR_CONFIG) {
    return cayley::to_string(static_cast<cayley::ErrorCode>(status));
  }
  return "Unknown";
}

void cayley_set_threads(int n) { cayley::parallel::set_threads(n); }

cayley_status cayley_config_load(const char* path, cayley_config** out) {
  return make(out, [&] {
    require(path != nullptr, "null path");
    return cayley::load_config(path);
  });
}

cayley_status cayley_config_preset(int index, cayley_config** out) {
  return make(out, [&] { return cayley::preset(index); });
}

cayley_status cayley_config_from_json(const char* json, cayley_config** out) {
  return make(out, [&] {
    require(json != nullptr, "null JSON text");
    return cayley::config_from_json(json);
  });
}

cayley_status cayley_config_set_seed(cayley_config* cfg, uint64_t seed) {
  return guard([&] {
    require(cfg != nullptr, "null config");
    cfg->cfg.seed = seed;
  });
}

cayley_status cayley_config_set_mode(cayley_config* cfg, const char* mode) {
  return guard([&] {
    require(cfg != nullptr && mode != nullptr, "null argument");
    const std::string m = mode;
    if (m == "ideal") cfg->cfg.mode = cayley::CouplingMode::GraphIdeal;
    else if (m == "full") cfg->cfg.mode = cayley::CouplingMode::FullVdW;
    else throw cayley::Error(cayley::ErrorCode::InvalidArgument, "mode must be ideal or full");
  });
}

cayley_status cayley_config_set_threads(cayley_config* cfg, int threads) {
  return guard([&] {
    require(cfg != nullptr, "null config");
    require(threads >= 0, "threads must be non-negative");
    cfg->cfg.threads = threads;
  });
}

cayley_status cayley_config_set_output_dir(cayley_config* cfg, const char* dir) {
  return guard([&] {
    require(cfg != nullptr && dir != nullptr, "null argument");
    cfg->cfg.output_dir = dir;
  });
}

cayley_status cayley_config_to_json(const cayley_config* cfg, char** out) {
  return guard([&] {
    require(cfg != nullptr && out != nullptr, "null argument");
    const std::string text = cayley::config_to_json(cfg->cfg);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void cayley_config_free(cayley_config* cfg) { delete cfg; }
void cayley_string_free(char* s) { delete[] s; }

cayley_status cayley_check_budget(const cayley_config* cfg, const char* subcommand) {
  return guard([&] {
    require(cfg != nullptr && subcommand != nullptr, "null argument");
    cayley::check_budget(cfg->cfg, cayley::parse_subcommand(subcommand));
  });
}

cayley_status cayley_run(const cayley_config* cfg, const char* subcommand) {
  return guard([&] {
    require(cfg != nullptr && subcommand != nullptr, "null argument");
    cayley::run_experiment(cfg->cfg, cayley::parse_subcommand(subcommand));
  });
}

cayley_status cayley_tree_regular(int branching, int shells, double edge_length_um, int rotated3d,
                                  cayley_tree** out) {
  return make(out, [&] {
    require(edge_length_um > 0, "edge length must be positive");
    return cayley::build_regular_tree(branching, shells, edge_length_um,
                                      rotated3d ? cayley::Layout::Rotated3D : cayley::Layout::Planar);
  });
}

cayley_status cayley_tree_dual_center(double edge_length_um, cayley_tree** out) {
  return make(out, [&] {
    require(edge_length_um > 0, "edge length must be positive");
    return cayley::build_dual_center_tree(edge_length_um);
  });
}

int cayley_tree_size(const cayley_tree* tree) { return tree ? tree->tree.graph.size() : 0; }
int cayley_tree_num_edges(const cayley_tree* tree) { return tree ? tree->tree.graph.num_edges() : 0; }

cayley_status cayley_tree_edge(const cayley_tree* tree, int index, int* a, int* b) {
  return guard([&] {
    require(tree && a && b, "null argument");
    require(index >= 0 && index < tree->tree.graph.num_edges(), "edge index out of range");
    *a = tree->tree.graph.edges[index].a;
    *b = tree->tree.graph.edges[index].b;
  });
}

cayley_status cayley_tree_vertex(const cayley_tree* tree, int vertex, int* shell, double xyz[3]) {
  return guard([&] {
    require(tree && shell && xyz, "null argument");
    require(vertex >= 0 && vertex < tree->tree.graph.size(), "vertex out of range");
    *shell = tree->tree.graph.shell_of[vertex];
    const auto p = tree->tree.geometry.positions[vertex];
    xyz[0] = p.x;
    xyz[1] = p.y;
    xyz[2] = p.z;
  });
}

cayley_status cayley_tree_validate(const cayley_tree* tree, double* edge_dev_max, double* min_nonedge_ratio,
                                   double* max_nonedge_coupling_ratio) {
  return guard([&] {
    require(tree && edge_dev_max && min_nonedge_ratio && max_nonedge_coupling_ratio, "null argument");
    const auto r = cayley::validate_geometry(tree->tree.graph, tree->tree.geometry);
    *edge_dev_max = r.edge_dev_max;
    *min_nonedge_ratio = r.min_nonedge_ratio;
    *max_nonedge_coupling_ratio = r.max_nonedge_coupling_ratio;
  });
}

cayley_status cayley_tree_write(const cayley_tree* tree, const char* path) {
  return guard([&] {
    require(tree && path, "null argument");
    std::ofstream os(path);
    if (!os) throw cayley::Error(cayley::ErrorCode::Io, std::string("cannot write ") + path);
    cayley::write_geometry(os, tree->tree.graph, tree->tree.geometry);
  });
}

void cayley_tree_free(cayley_tree* tree) { delete tree; }

cayley_status cayley_ground_state(const cayley_tree* tree, double coupling, double delta_final, int full_vdw,
                                  uint64_t* labels, size_t capacity, size_t* count, double* energy) {
  return guard([&] {
    require(tree && count, "null argument");
    require(capacity == 0 || labels, "null label buffer");
    const auto mode = full_vdw ? cayley::CouplingMode::FullVdW : cayley::CouplingMode::GraphIdeal;
    const auto ground = cayley::brute_force_ground(
        cayley::make_ising_problem(tree->tree.graph, coupling, delta_final, mode, &tree->tree.geometry));
    *count = ground.degeneracy();
    std::copy_n(ground.configs.begin(), std::min(capacity, ground.degeneracy()), labels);
    if (energy) *energy = ground.energy;
  });
}

cayley_status cayley_phase_label(const cayley_tree* tree, double coupling, double delta_final,
                                 const char** label) {
  return guard([&] {
    require(tree && label, "null argument");
    const std::pair<double, double> point{coupling, delta_final};
    const auto pts = cayley::phase_diagram(tree->tree.graph, std::span(&point, 1));
    *label = cayley::to_string(pts.front().label);
  });
}

double cayley_blockade_radius(double c6_mhz_um6, double omega0_mhz) {
  return cayley::blockade_radius({cayley::angular_from_mhz(c6_mhz_um6), cayley::angular_from_mhz(omega0_mhz)});
}

cayley_status cayley_encode_label(const int* spins, int num_atoms, uint64_t* label) {
  return guard([&] {
    require(spins && label, "null argument");
    require(num_atoms >= 0 && num_atoms <= cayley::kMaxLabelAtoms, "atom count out of range");
    std::vector<cayley::Spin> s(num_atoms);
    for (int j = 0; j < num_atoms; ++j) {
      require(spins[j] == 0 || spins[j] == 1, "spins must be 0 (down) or 1 (up)");
      s[j] = spins[j] ? cayley::Spin::Up : cayley::Spin::Down;
    }
    *label = cayley::encode_label(s);
  });
}

cayley_status cayley_decode_label(uint64_t label, int num_atoms, int* spins) {
  return guard([&] {
    require(spins != nullptr, "null argument");
    const auto s = cayley::decode_label(label, num_atoms);
    for (int j = 0; j < num_atoms; ++j) spins[j] = s[j] == cayley::Spin::Up;
  });
}

cayley_status cayley_anneal_run(const cayley_config* cfg, cayley_anneal** out) {
  return make(out, [&] {
    require(cfg != nullptr, "null config");
    cayley::check_budget(cfg->cfg, cayley::Subcommand::Anneal);
    if (cfg->cfg.threads > 0) cayley::parallel::set_threads(cfg->cfg.threads);
    return cayley::run_anneal(cfg->cfg);
  });
}

int cayley_anneal_num_atoms(const cayley_anneal* run) { return run ? run->run.result.num_atoms : 0; }
size_t cayley_anneal_num_samples(const cayley_anneal* run) { return run ? run->run.result.times.size() : 0; }

cayley_status cayley_anneal_sample(const cayley_anneal* run, size_t index, double* t, double* neel,
                                   double* ground_probability) {
  return guard([&] {
    require(run != nullptr, "null handle");
    const auto& r = run->run.result;
    require(index < r.times.size(), "sample index out of range");
    if (t) *t = r.times[index];
    if (neel) *neel = r.neel[index];
    if (ground_probability) *ground_probability = r.ground_probability[index];
  });
}

cayley_status cayley_anneal_excitation(const cayley_anneal* run, size_t index, int atom, double* value) {
  return guard([&] {
    require(run && value, "null argument");
    const auto& r = run->run.result;
    require(index < r.times.size(), "sample index out of range");
    require(atom >= 0 && atom < r.num_atoms, "atom out of range");
    *value = r.excitation[index][atom];
  });
}

cayley_status cayley_anneal_final_probability(const cayley_anneal* run, uint64_t label, double* value) {
  return guard([&] {
    require(run && value, "null argument");
    const auto& p = run->run.result.final_probabilities;
    require(label < p.size(), "label out of range");
    *value = p[label];
  });
}

cayley_status cayley_anneal_argmax(const cayley_anneal* run, uint64_t* label) {
  return guard([&] {
    require(run && label, "null argument");
    const auto& p = run->run.result.final_probabilities;
    *label = static_cast<uint64_t>(std::max_element(p.begin(), p.end()) - p.begin());
  });
}

void cayley_anneal_free(cayley_anneal* run) { delete run; }

}  // extern "C"
