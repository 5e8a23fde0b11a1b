#include "cayley/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cayley/error.hpp"

namespace cayley {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

// Reads fields of one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_ + " must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail("unknown key " + path_ + "." + key);
    }
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(path_ + "." + key + ": " + e.what());
    }
  }

  template <class T>
  void get(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string path(const char* key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const char* layout_name(Layout l) { return l == Layout::Planar ? "planar" : "rotated3d"; }
Layout parse_layout(const std::string& s) {
  if (s == "planar") return Layout::Planar;
  if (s == "rotated3d") return Layout::Rotated3D;
  fail("layout must be planar or rotated3d");
}
const char* shape_name(RampShape s) { return s == RampShape::Linear ? "linear" : "cosine"; }
RampShape parse_shape(const std::string& s) {
  if (s == "linear") return RampShape::Linear;
  if (s == "cosine") return RampShape::Cosine;
  fail("ramp shape must be linear or cosine");
}
const char* convention_name(NoiseConvention c) { return c == NoiseConvention::Rate ? "rate" : "linewidth"; }
NoiseConvention parse_convention(const std::string& s) {
  if (s == "rate") return NoiseConvention::Rate;
  if (s == "linewidth") return NoiseConvention::Linewidth;
  fail("noise.convention must be rate or linewidth");
}
const char* mode_name(CouplingMode m) { return m == CouplingMode::GraphIdeal ? "ideal" : "full"; }
CouplingMode parse_mode(const std::string& s) {
  if (s == "ideal") return CouplingMode::GraphIdeal;
  if (s == "full") return CouplingMode::FullVdW;
  fail("mode must be ideal or full");
}

json axis_json(const AxisConfig& a) { return {{"start", a.start}, {"stop", a.stop}, {"count", a.count}}; }
void read_axis(const json& j, const std::string& path, AxisConfig& a) {
  Section s(j, path);
  s.get("start", a.start);
  s.get("stop", a.stop);
  s.get("count", a.count);
}

json vec_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

void validate(const ExperimentConfig& c) {
  const auto positive = [](double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) fail(std::string(what) + " must be positive");
  };
  if (c.graph.kind != "G10" && c.graph.kind != "G22" && c.graph.kind != "G14" &&
      c.graph.kind != "regular" && c.graph.kind != "dual") {
    fail("graph.kind must be one of G10, G22, G14, regular, dual");
  }
  positive(c.graph.coupling, "graph.coupling");
  if (c.graph.edge_length) positive(*c.graph.edge_length, "graph.edge_length_um");
  positive(c.constants.c6_mhz_um6, "constants.c6_mhz_um6");
  positive(c.constants.omega0_mhz, "constants.omega0_mhz");
  positive(c.schedule.t_final_us, "schedule.t_final_us");
  if (c.schedule.omega_max_mhz < 0) fail("schedule.omega_max_mhz must be non-negative");
  if (!(c.schedule.ramp_fraction > 0 && c.schedule.ramp_fraction < 0.5)) {
    fail("schedule.ramp_fraction must lie in (0, 0.5)");
  }
  if (c.schedule.samples < 2) fail("schedule.samples must be at least 2");
  if (c.noise.individual_mhz < 0 || c.noise.collective_mhz < 0) fail("noise rates must be non-negative");
  if (c.noise.trajectories < 1) fail("noise.trajectories must be at least 1");
  const auto prob = [](double p) { return p >= 0 && p <= 1; };
  if (!prob(c.spam.p_down_given_up) || !prob(c.spam.p_up_given_down)) fail("SPAM probabilities must lie in [0, 1]");
  if (c.phase_diagram.coupling.count < 1 || c.phase_diagram.delta.count < 1) {
    fail("phase_diagram axis counts must be at least 1");
  }
  if (c.holography.width < 1 || c.holography.height < 1) fail("holography grid must be non-empty");
  positive(c.holography.pitch_um, "holography.pitch_um");
  positive(c.holography.focal_length_um, "holography.focal_length_um");
  positive(c.holography.wavelength_um, "holography.wavelength_um");
  if (c.holography.iterations < 1) fail("holography.iterations must be at least 1");
  if (c.holography.random_targets < 0) fail("holography.random_targets must be non-negative");
  if (c.shots < 1) fail("shots must be at least 1");
  if (c.threads < 0) fail("threads must be non-negative");
}

}  // namespace

std::vector<double> AxisConfig::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  return v;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["preset"] = c.preset;
  j["reference_d_over_rb"] = c.reference_d_over_rb ? json(*c.reference_d_over_rb) : json(nullptr);
  j["graph"] = {{"kind", c.graph.kind},
                {"branching", c.graph.branching},
                {"shells", c.graph.shells},
                {"layout", layout_name(c.graph.layout)},
                {"coupling", c.graph.coupling},
                {"edge_length_um", c.graph.edge_length ? json(*c.graph.edge_length) : json(nullptr)}};
  j["constants"] = {{"c6_mhz_um6", c.constants.c6_mhz_um6}, {"omega0_mhz", c.constants.omega0_mhz}};
  j["schedule"] = {{"t_final_us", c.schedule.t_final_us},
                   {"omega_max_mhz", c.schedule.omega_max_mhz},
                   {"delta_initial_mhz", c.schedule.delta_initial_mhz},
                   {"delta_final_mhz", c.schedule.delta_final_mhz},
                   {"ramp_fraction", c.schedule.ramp_fraction},
                   {"shape", shape_name(c.schedule.shape)},
                   {"samples", c.schedule.samples}};
  j["noise"] = {{"enabled", c.noise.enabled},
                {"individual_mhz", c.noise.individual_mhz},
                {"collective_mhz", c.noise.collective_mhz},
                {"convention", convention_name(c.noise.convention)},
                {"trajectories", c.noise.trajectories}};
  j["spam"] = {{"enabled", c.spam.enabled},
               {"p_down_given_up", c.spam.p_down_given_up},
               {"p_up_given_down", c.spam.p_up_given_down}};
  json points = json::array();
  for (const auto& [u, d] : c.phase_diagram.points) points.push_back({u, d});
  j["phase_diagram"] = {{"points", points},
                        {"coupling", axis_json(c.phase_diagram.coupling)},
                        {"delta", axis_json(c.phase_diagram.delta)}};
  json targets = json::array();
  for (const auto& t : c.holography.targets) targets.push_back(vec_json(t));
  j["holography"] = {{"width", c.holography.width},
                     {"height", c.holography.height},
                     {"pitch_um", c.holography.pitch_um},
                     {"focal_length_um", c.holography.focal_length_um},
                     {"wavelength_um", c.holography.wavelength_um},
                     {"iterations", c.holography.iterations},
                     {"targets", targets},
                     {"random_targets", c.holography.random_targets},
                     {"extent_um", c.holography.extent_um}};
  j["mode"] = mode_name(c.mode);
  j["shots"] = c.shots;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  {
    Section top(j, "config");
    top.get("name", c.name);
    top.get("preset", c.preset);
    top.get("reference_d_over_rb", c.reference_d_over_rb);
    if (const json* g = top.child("graph")) {
      Section s(*g, "graph");
      s.get("kind", c.graph.kind);
      s.get("branching", c.graph.branching);
      s.get("shells", c.graph.shells);
      std::string layout = layout_name(c.graph.layout);
      s.get("layout", layout);
      c.graph.layout = parse_layout(layout);
      s.get("coupling", c.graph.coupling);
      s.get("edge_length_um", c.graph.edge_length);
    }
    if (const json* k = top.child("constants")) {
      Section s(*k, "constants");
      s.get("c6_mhz_um6", c.constants.c6_mhz_um6);
      s.get("omega0_mhz", c.constants.omega0_mhz);
    }
    if (const json* k = top.child("schedule")) {
      Section s(*k, "schedule");
      s.get("t_final_us", c.schedule.t_final_us);
      s.get("omega_max_mhz", c.schedule.omega_max_mhz);
      s.get("delta_initial_mhz", c.schedule.delta_initial_mhz);
      s.get("delta_final_mhz", c.schedule.delta_final_mhz);
      s.get("ramp_fraction", c.schedule.ramp_fraction);
      std::string shape = shape_name(c.schedule.shape);
      s.get("shape", shape);
      c.schedule.shape = parse_shape(shape);
      s.get("samples", c.schedule.samples);
    }
    if (const json* k = top.child("noise")) {
      Section s(*k, "noise");
      s.get("enabled", c.noise.enabled);
      s.get("individual_mhz", c.noise.individual_mhz);
      s.get("collective_mhz", c.noise.collective_mhz);
      std::string convention = convention_name(c.noise.convention);
      s.get("convention", convention);
      c.noise.convention = parse_convention(convention);
      s.get("trajectories", c.noise.trajectories);
    }
    if (const json* k = top.child("spam")) {
      Section s(*k, "spam");
      s.get("enabled", c.spam.enabled);
      s.get("p_down_given_up", c.spam.p_down_given_up);
      s.get("p_up_given_down", c.spam.p_up_given_down);
    }
    if (const json* k = top.child("phase_diagram")) {
      Section s(*k, "phase_diagram");
      if (const json* pts = s.child("points")) {
        if (!pts->is_array()) fail("phase_diagram.points must be an array");
        c.phase_diagram.points.clear();
        for (const auto& p : *pts) {
          if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            fail("phase_diagram.points entries must be [U, Delta] pairs");
          }
          c.phase_diagram.points.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
      }
      if (const json* a = s.child("coupling")) read_axis(*a, s.path("coupling"), c.phase_diagram.coupling);
      if (const json* a = s.child("delta")) read_axis(*a, s.path("delta"), c.phase_diagram.delta);
    }
    if (const json* k = top.child("holography")) {
      Section s(*k, "holography");
      s.get("width", c.holography.width);
      s.get("height", c.holography.height);
      s.get("pitch_um", c.holography.pitch_um);
      s.get("focal_length_um", c.holography.focal_length_um);
      s.get("wavelength_um", c.holography.wavelength_um);
      s.get("iterations", c.holography.iterations);
      if (const json* t = s.child("targets")) {
        if (!t->is_array()) fail("holography.targets must be an array");
        c.holography.targets.clear();
        for (const auto& p : *t) {
          if (!p.is_array() || p.size() != 3) fail("holography.targets entries must be [x, y, z]");
          c.holography.targets.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
        }
      }
      s.get("random_targets", c.holography.random_targets);
      s.get("extent_um", c.holography.extent_um);
    }
    std::string mode = mode_name(c.mode);
    top.get("mode", mode);
    c.mode = parse_mode(mode);
    top.get("shots", c.shots);
    top.get("seed", c.seed);
    top.get("threads", c.threads);
    top.get("output_dir", c.output_dir);
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

ExperimentConfig preset(int index) {
  struct Point {
    const char* graph;
    double coupling;
    std::uint64_t shots;
    std::optional<double> reference;
  };
  static const Point points[] = {
      {"G10", 1.82, 672, std::nullopt},
      {"G22", 2.25, 2208, std::nullopt},
      {"G14", 1.67, 5113, 0.92},
      {"G14", 2.70, 5113, 0.86},
      {"G14", 5.41, 5113, 0.76},
  };
  if (index < 1 || index > 5) throw Error(ErrorCode::InvalidArgument, "preset must be 1..5");
  const Point& p = points[index - 1];
  ExperimentConfig c;
  c.name = "point-" + std::to_string(index);
  c.preset = index;
  c.reference_d_over_rb = p.reference;
  c.graph.kind = p.graph;
  c.graph.coupling = p.coupling;
  c.shots = p.shots;
  c.output_dir = "out/" + c.name;
  if (c.graph.kind == "G22") {
    c.noise.enabled = false;
    c.phase_diagram.coupling = {0.5, 4.0, 8};
    c.phase_diagram.delta = {-1.0, 8.0, 10};
  }
  if (c.graph.kind == "G14") c.noise.trajectories = 200;
  return c;
}

std::vector<ExperimentConfig> presets() {
  std::vector<ExperimentConfig> out;
  for (int i = 1; i <= 5; ++i) out.push_back(preset(i));
  return out;
}

PhysicalConstants physical_constants(const ExperimentConfig& cfg) {
  return {angular_from_mhz(cfg.constants.c6_mhz_um6), angular_from_mhz(cfg.constants.omega0_mhz)};
}

double edge_coupling(const ExperimentConfig& cfg) {
  const auto k = physical_constants(cfg);
  if (cfg.graph.edge_length) return k.c6 / std::pow(*cfg.graph.edge_length, 6);
  return cfg.graph.coupling * k.omega0;
}

double edge_length(const ExperimentConfig& cfg) {
  if (cfg.graph.edge_length) return *cfg.graph.edge_length;
  return distance_for_coupling(physical_constants(cfg), edge_coupling(cfg));
}

int graph_size(const GraphConfig& g) {
  if (g.kind == "G10") return 10;
  if (g.kind == "G22") return 22;
  if (g.kind == "G14" || g.kind == "dual") return 14;
  int n = 1, shell = 1;
  for (int s = 1; s < g.shells; ++s) {
    shell *= s == 1 ? g.branching : g.branching - 1;
    n += shell;
  }
  return n;
}

CayleyTree build_tree(const ExperimentConfig& cfg) {
  const double d = edge_length(cfg);
  const auto& g = cfg.graph;
  if (g.kind == "G10") return build_regular_tree(3, 3, d, Layout::Planar);
  if (g.kind == "G22") return build_regular_tree(3, 4, d, Layout::Rotated3D);
  if (g.kind == "G14" || g.kind == "dual") return build_dual_center_tree(d);
  return build_regular_tree(g.branching, g.shells, d, g.layout);
}

Schedule build_schedule(const ExperimentConfig& cfg) {
  const auto& s = cfg.schedule;
  return Schedule::three_stage(angular_from_mhz(s.omega_max_mhz), s.t_final_us,
                               angular_from_mhz(s.delta_initial_mhz), angular_from_mhz(s.delta_final_mhz),
                               s.ramp_fraction, s.shape);
}

NoiseModel build_noise(const ExperimentConfig& cfg) {
  if (!cfg.noise.enabled) return NoiseModel::none();
  if (cfg.noise.convention == NoiseConvention::Linewidth) {
    return NoiseModel::from_linewidths(cfg.noise.individual_mhz, cfg.noise.collective_mhz);
  }
  return {cfg.noise.individual_mhz, cfg.noise.collective_mhz};
}

SpamModel build_spam(const ExperimentConfig& cfg) {
  return {cfg.spam.p_down_given_up, cfg.spam.p_up_given_down};
}

SlmPlane build_plane(const ExperimentConfig& cfg) {
  const auto& h = cfg.holography;
  return {h.width, h.height, h.pitch_um, h.focal_length_um, h.wavelength_um};
}

}  // namespace cayley
