// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace dpg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
double norm(Point a);

/// A triangle of the mesh.
///
/// Vertices are stored counterclockwise and rotated so that the refinement
/// edge is local edge 0, i.e. (v[0], v[1]); v[2] is the newest vertex.
/// Local edge e joins v[e] and v[(e + 1) % 3].
struct Triangle {
  std::array<int, 3> v{};
  int generation = 0;
  int parent = -1;  // index of the ancestor in the mesh this one was refined from
};

/// tri[1] == -1 marks a boundary edge. For interior edges tri[0] < tri[1].
struct Edge {
  std::array<int, 2> v{};
  std::array<int, 2> tri{-1, -1};
  bool boundary() const { return tri[1] < 0; }
};

using MarkSet = std::vector<int>;

/// Conforming triangulation of a polygon. Immutable; refinement returns a new mesh.
class Mesh {
 public:
  Mesh() = default;
  /// Builds edge topology from the triangle list. Triangle vertex order is
  /// normalized to counterclockwise; refine_edge[i] is the local index of the
  /// refinement edge of triangle i in the given vertex order (empty: longest edge).
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<int> refine_edge = {});

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Point& vertex(int i) const { return vertices_[i]; }
  const Triangle& triangle(int t) const { return triangles_[t]; }
  const Edge& edge(int e) const { return edges_[e]; }

  /// Global edge index of local edge `local` of triangle t.
  int triangle_edge(int t, int local) const { return tri_edges_[t][local]; }
  std::array<Point, 3> corners(int t) const;
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }

  double signed_area(int t) const;
  double diameter(int t) const;
  double h_max() const;

  /// Global edge normal: outward normal of edge().tri[0].
  Point edge_normal(int e) const;

  /// Throws std::logic_error if any mesh invariant is violated.
  void check_invariants() const;

 private:
  void build_topology();

  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<bool> boundary_vertex_;

  friend Mesh refine_nvb(const Mesh&, std::span<const int>);
};

/// Uniform n x n grid of (0,1)^2, each square split along its (1,1) diagonal.
Mesh make_unit_square(int n);

/// Five-triangle fan approximating the sector of opening 5*pi/4 that is
/// symmetric about the positive x-axis; the reentrant corner sits at the origin.
Mesh make_sector_domain();

/// Newest-vertex bisection of all marked triangles plus conforming closure.
Mesh refine_nvb(const Mesh& mesh, std::span<const int> marked);

/// Marks every triangle once.
Mesh refine_uniform(const Mesh& mesh);

/// Minimal set M with sum_{T in M} eta_T^2 >= theta * sum_T eta_T^2.
/// Ties in the indicator are broken by ascending triangle index.
MarkSet doerfler_mark(std::span<const double> indicators, double theta);

void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace dpg
