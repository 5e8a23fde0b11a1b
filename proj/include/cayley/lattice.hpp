#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

namespace cayley {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double dot(Vec3 a, Vec3 b);
Vec3 cross(Vec3 a, Vec3 b);
double norm(Vec3 a);
double distance(Vec3 a, Vec3 b);

/// Rodrigues rotation of v by `angle` (right-handed) about the unit axis `axis`.
Vec3 rotate_about(Vec3 v, Vec3 axis, double angle);

struct Edge {
  int a = 0;  // a < b
  int b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class TreeKind { Regular, DualCenter };
enum class Layout { Planar, Rotated3D };

/// A Cayley tree G(E, C+V). Vertices are numbered breadth-first from the
/// center(s), branches in construction order; this numbering fixes bit
/// significance of measurement labels.
struct TreeGraph {
  TreeKind kind = TreeKind::Regular;
  int branching = 3;  // Z
  int shells = 0;     // S, counting the center shell
  std::vector<int> shell_of;
  std::vector<int> parent_of;  // -1 for centers
  std::vector<Edge> edges;     // sorted

  int size() const { return static_cast<int>(shell_of.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int valence_shell() const { return shells - 1; }
  bool is_valence(int v) const { return shell_of[v] == valence_shell(); }
  bool has_edge(int a, int b) const;
  int degree(int v) const;
  std::vector<int> degrees() const;
  std::vector<int> shell_populations() const;
  std::vector<std::vector<int>> adjacency() const;
};

/// Connected with |E| = |V| - 1.
bool is_tree(const TreeGraph& g);

struct Geometry {
  std::vector<Vec3> positions;  // µm
  double edge_length = 0;       // d, µm
};

struct CayleyTree {
  TreeGraph graph;
  Geometry geometry;
};

/// Regular tree with coordination Z = 3 and S shells (S in {2, 3, 4}).
/// Planar: first shell at azimuths 90/210/330 degrees, each child bond at
/// +/-60 degrees from the extension of its parent bond. Rotated3D: the planar
/// layout with every last-shell child rotated by 2*pi/5 about its parent bond.
CayleyTree build_regular_tree(int branching, int shells, double edge_length, Layout layout);

/// Dual-center tree G14 = (0s)^2 (1s)^4 (2s)^8 with the center bond on the
/// x axis. Half B is the 180-degree image of half A about the z axis, and the
/// last-shell branches whose planar placement closes a hexagon across the
/// center bond are rotated out of plane.
CayleyTree build_dual_center_tree(double edge_length);

/// Vertex permutation exchanging the two center-rooted halves of a
/// dual-center tree. Identity for regular trees.
std::vector<int> half_swap_map(const TreeGraph& g);

struct ValidationReport {
  double edge_dev_max = 0;
  double min_nonedge_ratio = std::numeric_limits<double>::infinity();
  double max_nonedge_coupling_ratio = 0;
};

ValidationReport validate_geometry(const TreeGraph& g, const Geometry& geo);

/// Text format: `index shell x y z` per vertex (9 significant digits) then `edge i j` lines.
void write_geometry(std::ostream& os, const TreeGraph& g, const Geometry& geo);
CayleyTree read_geometry(std::istream& is);

}  // namespace cayley
