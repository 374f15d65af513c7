// SPDX-License-Identifier: Apache-2.0

#include "dpg/trace_space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpg {

TraceSpace::TraceSpace(const Mesh& mesh) : mesh_(&mesh), constrained_(3 * mesh.num_vertices(), 0) {
  renumber();
}

void TraceSpace::renumber() {
  free_index_.assign(constrained_.size(), -1);
  num_free_ = 0;
  for (std::size_t i = 0; i < constrained_.size(); ++i)
    if (!constrained_[i]) free_index_[i] = num_free_++;
}

TraceSpace TraceSpace::with_boundary_constrained() const {
  TraceSpace out = *this;
  for (std::size_t v = 0; v < mesh_->num_vertices(); ++v)
    if (mesh_->is_boundary_vertex(static_cast<int>(v)))
      for (int c = 0; c < 3; ++c) out.constrained_[dof(static_cast<int>(v), c)] = 1;
  out.renumber();
  return out;
}

EdgeShape hermite_edge_shape(Point a, Point b, Point normal, double s) {
  const Point d = b - a;
  // cubic Hermite basis on [0,1]; derivative dofs scale with the edge length
  const double h0 = 1.0 - 3.0 * s * s + 2.0 * s * s * s;
  const double h1 = s - 2.0 * s * s + s * s * s;
  const double h2 = 3.0 * s * s - 2.0 * s * s * s;
  const double h3 = -s * s + s * s * s;
  EdgeShape shape;
  shape.value = {h0, h1 * d.x, h1 * d.y, h2, h3 * d.x, h3 * d.y};
  shape.normal = {0.0, (1.0 - s) * normal.x, (1.0 - s) * normal.y, 0.0, s * normal.x, s * normal.y};
  return shape;
}

TraceSpace build_trace_space(const Mesh& mesh) { return TraceSpace(mesh); }

TraceSpace apply_clamped_bc(const TraceSpace& space) { return space.with_boundary_constrained(); }

TracePair eval_edge_trace(const TraceSpace& space, const TraceCoeffs& coeffs, int edge, double t) {
  const Mesh& mesh = space.mesh();
  if (edge < 0 || static_cast<std::size_t>(edge) >= mesh.num_edges())
    throw std::out_of_range("eval_edge_trace: edge index out of range");
  if (coeffs.size() != space.num_dofs()) throw std::invalid_argument("eval_edge_trace: coefficient size mismatch");
  const Edge& e = mesh.edge(edge);
  const EdgeShape shape = hermite_edge_shape(mesh.vertex(e.v[0]), mesh.vertex(e.v[1]), mesh.edge_normal(edge), t);
  TracePair pair;
  for (int end = 0; end < 2; ++end)
    for (int c = 0; c < 3; ++c) {
      const double x = coeffs(TraceSpace::dof(e.v[end], c));
      pair.value += shape.value[3 * end + c] * x;
      pair.normal_derivative += shape.normal[3 * end + c] * x;
    }
  return pair;
}

namespace {

void set_vertex(TraceCoeffs& c, int v, const ScalarField& u, const VectorField& grad_u, Point p) {
  const double value = u(p);
  const Point g = grad_u(p);
  if (!std::isfinite(value) || !std::isfinite(g.x) || !std::isfinite(g.y))
    throw std::domain_error("trace interpolation: data not finite at vertex " + std::to_string(v));
  c(TraceSpace::dof(v, TraceSpace::kValue)) = value;
  c(TraceSpace::dof(v, TraceSpace::kDx)) = g.x;
  c(TraceSpace::dof(v, TraceSpace::kDy)) = g.y;
}

}  // namespace

TraceCoeffs interpolate_trace(const TraceSpace& space, const ScalarField& u, const VectorField& grad_u) {
  TraceCoeffs c = TraceCoeffs::Zero(space.num_dofs());
  for (std::size_t v = 0; v < space.mesh().num_vertices(); ++v)
    set_vertex(c, static_cast<int>(v), u, grad_u, space.mesh().vertex(static_cast<int>(v)));
  return c;
}

TraceCoeffs interpolate_boundary_data(const TraceSpace& space, const ScalarField& u, const VectorField& grad_u) {
  TraceCoeffs c = TraceCoeffs::Zero(space.num_dofs());
  for (std::size_t v = 0; v < space.mesh().num_vertices(); ++v)
    if (space.mesh().is_boundary_vertex(static_cast<int>(v)))
      set_vertex(c, static_cast<int>(v), u, grad_u, space.mesh().vertex(static_cast<int>(v)));
  return c;
}

}  // namespace dpg
