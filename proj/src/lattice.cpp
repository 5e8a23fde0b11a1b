#include "cayley/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "cayley/error.hpp"
#include "cayley/types.hpp"

namespace cayley {

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

double distance(Vec3 a, Vec3 b) { return norm(a - b); }

Vec3 rotate_about(Vec3 v, Vec3 axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return c * v + s * cross(axis, v) + (dot(axis, v) * (1.0 - c)) * axis;
}

bool TreeGraph::has_edge(int a, int b) const {
  const Edge e{std::min(a, b), std::max(a, b)};
  return std::binary_search(edges.begin(), edges.end(), e);
}

int TreeGraph::degree(int v) const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(),
                                        [v](const Edge& e) { return e.a == v || e.b == v; }));
}

std::vector<int> TreeGraph::degrees() const {
  std::vector<int> deg(size(), 0);
  for (const auto& e : edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  return deg;
}

std::vector<int> TreeGraph::shell_populations() const {
  std::vector<int> pop(shells, 0);
  for (int s : shell_of) ++pop[s];
  return pop;
}

std::vector<std::vector<int>> TreeGraph::adjacency() const {
  std::vector<std::vector<int>> adj(size());
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

bool is_tree(const TreeGraph& g) {
  const int n = g.size();
  if (n == 0 || g.num_edges() != n - 1) return false;
  const auto adj = g.adjacency();
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == n;
}

namespace {

constexpr double kChildAngle = kPi / 3.0;           // bond deviation from parent extension
constexpr double kBranchRotation = kTwoPi / 5.0;    // last-shell out-of-plane rotation
const double kSqrt3 = std::sqrt(3.0);

Vec3 azimuth(double angle) { return {std::cos(angle), std::sin(angle), 0.0}; }

// In-plane rotation of a unit direction.
Vec3 turn(Vec3 u, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * u.x - s * u.y, s * u.x + c * u.y, u.z};
}

// Incremental tree builder that tracks bond directions.
struct Builder {
  TreeGraph graph;
  Geometry geometry;
  std::vector<Vec3> bond;  // unit direction from parent, zero for centers

  int add(int parent, int shell, Vec3 pos, Vec3 dir) {
    const int v = graph.size();
    graph.shell_of.push_back(shell);
    graph.parent_of.push_back(parent);
    geometry.positions.push_back(pos);
    bond.push_back(dir);
    if (parent >= 0) graph.edges.push_back({parent, v});
    return v;
  }

  // Two children of v at +/-60 degrees from the extension of v's bond.
  std::vector<int> grow(int v, double d) {
    std::vector<int> kids;
    for (double dev : {kChildAngle, -kChildAngle}) {
      const Vec3 dir = turn(bond[v], dev);
      kids.push_back(add(v, graph.shell_of[v] + 1, geometry.positions[v] + d * dir, dir));
    }
    return kids;
  }

  void rotate_branch(int child, double angle) {
    const int p = graph.parent_of[child];
    const Vec3 offset = geometry.positions[child] - geometry.positions[p];
    const Vec3 rotated = rotate_about(offset, bond[p], angle);
    geometry.positions[child] = geometry.positions[p] + rotated;
    bond[child] = (1.0 / norm(rotated)) * rotated;
  }

  void finish() { std::sort(graph.edges.begin(), graph.edges.end()); }
};

}  // namespace

CayleyTree build_regular_tree(int branching, int shells, double d, Layout layout) {
  if (branching != 3) {
    throw Error(ErrorCode::Unsupported, "only coordination number Z = 3 is supported");
  }
  if (shells < 2 || shells > 4) {
    throw Error(ErrorCode::InvalidArgument, "shell count must be 2, 3 or 4");
  }
  if (!(d > 0)) throw Error(ErrorCode::InvalidArgument, "edge length must be positive");
  if (layout == Layout::Rotated3D && shells < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "Rotated3D needs a parent bond for the last shell (S >= 3)");
  }

  Builder b;
  b.graph.kind = TreeKind::Regular;
  b.graph.branching = branching;
  b.graph.shells = shells;
  const int center = b.add(-1, 0, {}, {});
  std::vector<int> frontier;
  for (int k = 0; k < branching; ++k) {
    const Vec3 dir = azimuth(kPi / 2.0 + k * kTwoPi / branching);
    frontier.push_back(b.add(center, 1, d * dir, dir));
  }
  for (int s = 2; s < shells; ++s) {
    std::vector<int> next;
    for (int v : frontier) {
      for (int kid : b.grow(v, d)) next.push_back(kid);
    }
    frontier = std::move(next);
  }
  if (layout == Layout::Rotated3D) {
    for (int v : frontier) b.rotate_branch(v, kBranchRotation);
  }
  b.finish();

  CayleyTree tree{std::move(b.graph), std::move(b.geometry)};
  tree.geometry.edge_length = d;
  if (layout == Layout::Planar) {
    const auto report = validate_geometry(tree.graph, tree.geometry);
    if (report.min_nonedge_ratio < kSqrt3 * (1.0 - 1e-9)) {
      throw Error(ErrorCode::PlanarInfeasible,
                  "planar layout puts non-adjacent atoms closer than sqrt(3)*d; use Rotated3D");
    }
  }
  return tree;
}

CayleyTree build_dual_center_tree(double d) {
  if (!(d > 0)) throw Error(ErrorCode::InvalidArgument, "edge length must be positive");

  // Half A rooted at (-d/2, 0, 0); half B is its image under (x, y, z) -> (-x, -y, z).
  const auto image = [](Vec3 v) { return Vec3{-v.x, -v.y, v.z}; };

  const auto build = [&](const std::vector<int>& rotated_parents) {
    Builder b;
    b.graph.kind = TreeKind::DualCenter;
    b.graph.branching = 3;
    b.graph.shells = 3;
    const Vec3 west{-1, 0, 0};
    const int ca = b.add(-1, 0, 0.5 * d * west, west);
    const int cb = b.add(-1, 0, image(0.5 * d * west), image(west));
    b.graph.edges.push_back({ca, cb});
    const auto kids_a = b.grow(ca, d);
    const auto kids_b = b.grow(cb, d);
    std::vector<int> grand_a, grand_b;
    for (int k : kids_a) {
      for (int g : b.grow(k, d)) grand_a.push_back(g);
    }
    for (int k : kids_b) {
      for (int g : b.grow(k, d)) grand_b.push_back(g);
    }
    for (int p : rotated_parents) {
      // p indexes a half-A parent; its image in half B sits kids_a.size() later.
      const int q = p + static_cast<int>(kids_a.size());
      for (int g : grand_a) {
        if (b.graph.parent_of[g] == p) b.rotate_branch(g, kBranchRotation);
      }
      for (int g : grand_b) {
        if (b.graph.parent_of[g] == q) b.rotate_branch(g, kBranchRotation);
      }
    }
    b.finish();
    CayleyTree tree{std::move(b.graph), std::move(b.geometry)};
    tree.geometry.edge_length = d;
    return tree;
  };

  // Find the half-A branches that close a hexagon with half B above the center bond.
  CayleyTree planar = build({});
  std::vector<int> rotate;
  const int n = planar.graph.size();
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (planar.graph.has_edge(u, v)) continue;
      const Vec3 pu = planar.geometry.positions[u], pv = planar.geometry.positions[v];
      if (distance(pu, pv) >= kSqrt3 * d * (1.0 - 1e-9)) continue;
      // Violations only occur between last-shell atoms of opposite halves.
      const int a = u < v ? u : v;
      if (pu.y > 0 && pv.y > 0) rotate.push_back(planar.graph.parent_of[a]);
    }
  }
  std::sort(rotate.begin(), rotate.end());
  rotate.erase(std::unique(rotate.begin(), rotate.end()), rotate.end());
  return build(rotate);
}

std::vector<int> half_swap_map(const TreeGraph& g) {
  std::vector<int> map(g.size());
  for (int v = 0; v < g.size(); ++v) map[v] = v;
  if (g.kind != TreeKind::DualCenter) return map;

  std::vector<std::vector<int>> children(g.size());
  std::vector<int> centers;
  for (int v = 0; v < g.size(); ++v) {
    if (g.parent_of[v] >= 0) {
      children[g.parent_of[v]].push_back(v);
    } else {
      centers.push_back(v);
    }
  }
  if (centers.size() != 2) throw Error(ErrorCode::InvalidArgument, "dual-center tree needs 2 centers");
  std::queue<std::pair<int, int>> q;
  q.push({centers[0], centers[1]});
  while (!q.empty()) {
    auto [a, b] = q.front();
    q.pop();
    map[a] = b;
    map[b] = a;
    if (children[a].size() != children[b].size()) {
      throw Error(ErrorCode::InvalidArgument, "halves of the dual-center tree differ");
    }
    for (std::size_t i = 0; i < children[a].size(); ++i) q.push({children[a][i], children[b][i]});
  }
  return map;
}

ValidationReport validate_geometry(const TreeGraph& g, const Geometry& geo) {
  if (static_cast<int>(geo.positions.size()) != g.size()) {
    throw Error(ErrorCode::DimensionMismatch, "geometry and graph vertex counts differ");
  }
  ValidationReport r;
  const double d = geo.edge_length;
  for (int u = 0; u < g.size(); ++u) {
    for (int v = u + 1; v < g.size(); ++v) {
      const double dist = distance(geo.positions[u], geo.positions[v]);
      if (g.has_edge(u, v)) {
        r.edge_dev_max = std::max(r.edge_dev_max, std::abs(dist - d) / d);
      } else {
        r.min_nonedge_ratio = std::min(r.min_nonedge_ratio, dist / d);
      }
    }
  }
  if (std::isfinite(r.min_nonedge_ratio)) {
    r.max_nonedge_coupling_ratio = std::pow(1.0 / r.min_nonedge_ratio, 6);
  }
  return r;
}

void write_geometry(std::ostream& os, const TreeGraph& g, const Geometry& geo) {
  char line[160];
  const double eps = 1e-12 * std::max(1.0, geo.edge_length);
  const auto clean = [eps](double x) { return std::abs(x) < eps ? 0.0 : x; };
  for (int v = 0; v < g.size(); ++v) {
    const Vec3 p = geo.positions[v];
    std::snprintf(line, sizeof line, "%d %d %.9g %.9g %.9g\n", v, g.shell_of[v], clean(p.x), clean(p.y),
                  clean(p.z));
    os << line;
  }
  for (const auto& e : g.edges) os << "edge " << e.a << ' ' << e.b << '\n';
}

CayleyTree read_geometry(std::istream& is) {
  CayleyTree t;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (line.rfind("edge", 0) == 0) {
      std::string tag;
      Edge e;
      if (!(ls >> tag >> e.a >> e.b)) {
        throw Error(ErrorCode::Io, "malformed edge line " + std::to_string(lineno));
      }
      if (e.a > e.b) std::swap(e.a, e.b);
      t.graph.edges.push_back(e);
      continue;
    }
    int index = 0, shell = 0;
    Vec3 p;
    if (!(ls >> index >> shell >> p.x >> p.y >> p.z) || index != t.graph.size()) {
      throw Error(ErrorCode::Io, "malformed vertex line " + std::to_string(lineno));
    }
    t.graph.shell_of.push_back(shell);
    t.geometry.positions.push_back(p);
  }
  auto& g = t.graph;
  const int n = g.size();
  if (n == 0) throw Error(ErrorCode::Io, "geometry file has no vertices");
  std::sort(g.edges.begin(), g.edges.end());
  for (const auto& e : g.edges) {
    if (e.a < 0 || e.b >= n) throw Error(ErrorCode::Io, "edge references unknown vertex");
  }

  g.parent_of.assign(n, -1);
  int centers = 0;
  for (int v = 0; v < n; ++v) {
    centers += g.shell_of[v] == 0;
    g.shells = std::max(g.shells, g.shell_of[v] + 1);
  }
  for (const auto& e : g.edges) {
    if (g.shell_of[e.b] == g.shell_of[e.a] + 1) g.parent_of[e.b] = e.a;
    if (g.shell_of[e.a] == g.shell_of[e.b] + 1) g.parent_of[e.a] = e.b;
  }
  g.kind = centers == 2 ? TreeKind::DualCenter : TreeKind::Regular;
  g.branching = 0;
  for (int deg : g.degrees()) g.branching = std::max(g.branching, deg);

  double sum = 0;
  for (const auto& e : g.edges) sum += distance(t.geometry.positions[e.a], t.geometry.positions[e.b]);
  t.geometry.edge_length = g.edges.empty() ? 0.0 : sum / g.num_edges();
  return t;
}

}  // namespace cayley
