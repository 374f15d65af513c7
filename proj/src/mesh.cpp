// SPDX-License-Identifier: Apache-2.0

#include "dpg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dpg {

double norm(Point a) { return std::hypot(a.x, a.y); }

namespace {

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

std::array<int, 3> rotate_to_edge(std::array<int, 3> v, int local_edge) {
  return {v[local_edge % 3], v[(local_edge + 1) % 3], v[(local_edge + 2) % 3]};
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<int> refine_edge)
    : vertices_(std::move(vertices)) {
  if (!refine_edge.empty() && refine_edge.size() != triangles.size())
    throw std::invalid_argument("Mesh: refine_edge size does not match triangle count");
  triangles_.reserve(triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    auto v = triangles[t];
    for (int i : v)
      if (i < 0 || static_cast<std::size_t>(i) >= vertices_.size())
        throw std::invalid_argument("Mesh: vertex index out of range in triangle " +
                                    std::to_string(t));
    const Point a = vertices_[v[0]], b = vertices_[v[1]], c = vertices_[v[2]];
    const double area2 = cross(b - a, c - a);
    int ref;
    if (refine_edge.empty()) {
      // longest edge, first local index on (near) ties
      std::array<double, 3> len{norm(b - a), norm(c - b), norm(a - c)};
      const double lmax = *std::max_element(len.begin(), len.end());
      ref = 0;
      while (len[ref] < lmax * (1.0 - 1e-12)) ++ref;
    } else {
      ref = refine_edge[t];
      if (ref < 0 || ref > 2) throw std::invalid_argument("Mesh: refinement edge index must be 0..2");
    }
    if (area2 < 0.0) {
      // swap the refinement edge endpoints to flip orientation
      const int p = v[ref], q = v[(ref + 1) % 3], r = v[(ref + 2) % 3];
      v = {q, p, r};
      ref = 0;
    }
    Triangle tri;
    tri.v = rotate_to_edge(v, ref);
    triangles_.push_back(tri);
  }
  build_topology();
}

void Mesh::build_topology() {
  edges_.clear();
  tri_edges_.assign(triangles_.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> lookup;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& v = triangles_[t].v;
    for (int e = 0; e < 3; ++e) {
      const int a = v[e], b = v[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = lookup.try_emplace({key.first, key.second}, static_cast<int>(edges_.size()));
      if (inserted) {
        Edge edge;
        edge.v = {a, b};
        edge.tri = {static_cast<int>(t), -1};
        edges_.push_back(edge);
      } else {
        Edge& edge = edges_[it->second];
        if (edge.tri[1] >= 0)
          throw std::invalid_argument("Mesh: edge shared by more than two triangles");
        edge.tri[1] = static_cast<int>(t);
      }
      tri_edges_[t][e] = it->second;
    }
  }
  boundary_vertex_.assign(vertices_.size(), false);
  for (const auto& e : edges_)
    if (e.boundary()) boundary_vertex_[e.v[0]] = boundary_vertex_[e.v[1]] = true;
}

std::array<Point, 3> Mesh::corners(int t) const {
  const auto& v = triangles_[t].v;
  return {vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]};
}

double Mesh::signed_area(int t) const {
  const auto p = corners(t);
  return 0.5 * cross(p[1] - p[0], p[2] - p[0]);
}

double Mesh::diameter(int t) const {
  const auto p = corners(t);
  return std::max({norm(p[1] - p[0]), norm(p[2] - p[1]), norm(p[0] - p[2])});
}

double Mesh::h_max() const {
  double h = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) h = std::max(h, diameter(static_cast<int>(t)));
  return h;
}

Point Mesh::edge_normal(int e) const {
  const Edge& edge = edges_[e];
  const auto& v = triangles_[edge.tri[0]].v;
  // orientation of the edge as seen from its first triangle (counterclockwise)
  int a = edge.v[0], b = edge.v[1];
  for (int l = 0; l < 3; ++l)
    if ((v[l] == b && v[(l + 1) % 3] == a)) std::swap(a, b);
  const Point d = vertices_[b] - vertices_[a];
  const double len = norm(d);
  return {d.y / len, -d.x / len};
}

void Mesh::check_invariants() const {
  for (std::size_t t = 0; t < triangles_.size(); ++t)
    if (!(signed_area(static_cast<int>(t)) > 0.0))
      throw std::logic_error("Mesh: triangle " + std::to_string(t) + " is not positively oriented");
  for (const Edge& edge : edges_) {
    if (edge.tri[0] < 0) throw std::logic_error("Mesh: orphan edge");
    if (edge.tri[1] >= 0 && edge.tri[1] <= edge.tri[0])
      throw std::logic_error("Mesh: interior edge triangles out of order");
  }
  // A hanging vertex shows up as a vertex inside a one-sided edge.
  std::vector<int> bverts;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (boundary_vertex_[i]) bverts.push_back(static_cast<int>(i));
  for (const Edge& edge : edges_) {
    if (!edge.boundary()) continue;
    const Point a = vertices_[edge.v[0]], d = vertices_[edge.v[1]] - a;
    const double len2 = d.x * d.x + d.y * d.y;
    for (int i : bverts) {
      if (i == edge.v[0] || i == edge.v[1]) continue;
      const Point w = vertices_[i] - a;
      const double s = (w.x * d.x + w.y * d.y) / len2;
      if (s > 1e-12 && s < 1.0 - 1e-12 && std::abs(cross(d, w)) <= 1e-12 * len2)
        throw std::logic_error("Mesh: hanging vertex " + std::to_string(i));
    }
  }
}

Mesh make_unit_square(int n) {
  if (n < 1) throw std::invalid_argument("make_unit_square: n must be positive");
  std::vector<Point> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return Mesh(std::move(vertices), std::move(tris));
}

Mesh make_sector_domain() {
  std::vector<Point> vertices{{0.0, 0.0}};
  for (int k = 0; k <= 5; ++k) {
    const double phi = (-112.5 + 45.0 * k) * std::numbers::pi / 180.0;
    vertices.push_back({std::cos(phi), std::sin(phi)});
  }
  std::vector<std::array<int, 3>> tris;
  for (int k = 1; k <= 5; ++k) tris.push_back({0, k, k + 1});
  return Mesh(std::move(vertices), std::move(tris));
}

Mesh refine_nvb(const Mesh& mesh, std::span<const int> marked) {
  const int ntri = static_cast<int>(mesh.num_triangles());
  std::vector<char> edge_marked(mesh.num_edges(), 0);
  for (int t : marked) {
    if (t < 0 || t >= ntri)
      throw std::out_of_range("refine_nvb: triangle index " + std::to_string(t) + " out of range");
    edge_marked[mesh.triangle_edge(t, 0)] = 1;
  }
  if (marked.empty()) return mesh;

  // closure: a triangle with any marked edge must bisect its refinement edge
  std::vector<int> work(marked.begin(), marked.end());
  for (int t = 0; t < ntri; ++t) work.push_back(t);
  while (!work.empty()) {
    const int t = work.back();
    work.pop_back();
    const int ref = mesh.triangle_edge(t, 0);
    if (edge_marked[ref]) continue;
    if (edge_marked[mesh.triangle_edge(t, 1)] || edge_marked[mesh.triangle_edge(t, 2)]) {
      edge_marked[ref] = 1;
      for (int side : mesh.edge(ref).tri)
        if (side >= 0) work.push_back(side);
    }
  }

  std::vector<Point> vertices = mesh.vertices_;
  std::vector<int> midpoint(mesh.num_edges(), -1);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e)
    if (edge_marked[e]) {
      const auto& ev = mesh.edge(static_cast<int>(e)).v;
      midpoint[e] = static_cast<int>(vertices.size());
      vertices.push_back(0.5 * (mesh.vertex(ev[0]) + mesh.vertex(ev[1])));
    }

  std::map<std::pair<int, int>, int> edge_of;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto key = std::minmax(mesh.edge(static_cast<int>(e)).v[0], mesh.edge(static_cast<int>(e)).v[1]);
    edge_of[{key.first, key.second}] = static_cast<int>(e);
  }
  auto marked_mid = [&](int a, int b) -> int {
    const auto key = std::minmax(a, b);
    auto it = edge_of.find({key.first, key.second});
    if (it == edge_of.end()) return -1;
    return midpoint[it->second];
  };

  std::vector<Triangle> out;
  out.reserve(2 * mesh.num_triangles());
  // children inherit refinement edges opposite the new vertex
  auto bisect = [&](auto&& self, std::array<int, 3> v, int generation, int parent) -> void {
    const int m = marked_mid(v[0], v[1]);
    if (m < 0) {
      out.push_back(Triangle{v, generation, parent});
      return;
    }
    self(self, {v[2], v[0], m}, generation + 1, parent);
    self(self, {v[1], v[2], m}, generation + 1, parent);
  };
  for (int t = 0; t < ntri; ++t) bisect(bisect, mesh.triangle(t).v, mesh.triangle(t).generation, t);

  Mesh refined;
  refined.vertices_ = std::move(vertices);
  refined.triangles_ = std::move(out);
  refined.build_topology();
  return refined;
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<int> all(mesh.num_triangles());
  std::iota(all.begin(), all.end(), 0);
  return refine_nvb(mesh, all);
}

MarkSet doerfler_mark(std::span<const double> indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("doerfler_mark: theta must lie in (0,1]");
  for (double e : indicators)
    if (!(e >= 0.0)) throw std::invalid_argument("doerfler_mark: indicators must be nonnegative");
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return indicators[a] > indicators[b]; });
  MarkSet marked;
  if (theta == 1.0) {
    for (int t : order)
      if (indicators[t] > 0.0) marked.push_back(t);
    return marked;
  }
  double total = 0.0;
  for (int t : order) total += indicators[t] * indicators[t];
  const double goal = theta * total;
  double sum = 0.0;
  for (int t : order) {
    if (sum >= goal) break;
    sum += indicators[t] * indicators[t];
    marked.push_back(t);
  }
  return marked;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const auto old = os.precision(17);
  for (const auto& p : mesh.vertices()) os << "v " << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles()) os << "t " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << " 0\n";
  os.precision(old);
}

Mesh read_mesh(std::istream& is) {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> tris;
  std::vector<int> ref;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Point p;
      if (!(ls >> p.x >> p.y)) throw std::runtime_error("read_mesh: bad vertex on line " + std::to_string(lineno));
      vertices.push_back(p);
    } else if (tag == "t") {
      std::array<int, 3> v{};
      int r = 0;
      if (!(ls >> v[0] >> v[1] >> v[2] >> r))
        throw std::runtime_error("read_mesh: bad triangle on line " + std::to_string(lineno));
      tris.push_back(v);
      ref.push_back(r);
    } else {
      throw std::runtime_error("read_mesh: unknown record '" + tag + "' on line " + std::to_string(lineno));
    }
  }
  return Mesh(std::move(vertices), std::move(tris), std::move(ref));
}

}  // namespace dpg
