// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dpg/mesh.hpp"

namespace dpg {

using ScalarField = std::function<double(Point)>;
using VectorField = std::function<Point(Point)>;

/// Skeleton space of reduced Hsieh-Clough-Tocher traces.
///
/// Three unknowns per vertex: the value and both gradient components. On an
/// edge the value is the cubic Hermite interpolant of the endpoint values and
/// tangential derivatives; the normal derivative is linear between the endpoint
/// gradients projected on the normal. The space refers to its mesh, which must
/// outlive it.
class TraceSpace {
 public:
  enum Component { kValue = 0, kDx = 1, kDy = 2 };

  explicit TraceSpace(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  int num_dofs() const { return 3 * static_cast<int>(mesh_->num_vertices()); }
  int num_free() const { return num_free_; }
  int num_constrained() const { return num_dofs() - num_free_; }
  static int dof(int vertex, int component) { return 3 * vertex + component; }

  bool is_constrained(int dof) const { return constrained_[dof] != 0; }
  /// Free-dof number of a global dof, or -1 when constrained.
  int free_index(int dof) const { return free_index_[dof]; }

  /// Copy with every dof of every boundary vertex constrained.
  TraceSpace with_boundary_constrained() const;

 private:
  void renumber();

  const Mesh* mesh_;
  std::vector<char> constrained_;
  std::vector<int> free_index_;
  int num_free_ = 0;
};

/// Dof values of one trace unknown, ordered as TraceSpace::dof.
using TraceCoeffs = Eigen::VectorXd;

struct TracePair {
  double value = 0.0;
  double normal_derivative = 0.0;
};

/// Contribution of the six endpoint dofs (a: value, dx, dy; b: value, dx, dy)
/// to the trace pair at parameter s on the segment a -> b, with the normal
/// derivative taken along `normal`.
struct EdgeShape {
  std::array<double, 6> value{};
  std::array<double, 6> normal{};
};
EdgeShape hermite_edge_shape(Point a, Point b, Point normal, double s);

TraceSpace build_trace_space(const Mesh& mesh);

/// Clamped condition u = du/dn = 0: all dofs of boundary vertices fixed.
TraceSpace apply_clamped_bc(const TraceSpace& space);

/// Trace pair on a mesh edge at parameter t in [0,1] from edge.v[0] to
/// edge.v[1], normal derivative along the global edge normal.
TracePair eval_edge_trace(const TraceSpace& space, const TraceCoeffs& coeffs, int edge, double t);

/// Vertex-Hermite interpolation (value, d/dx, d/dy) of a smooth function at
/// every vertex.
TraceCoeffs interpolate_trace(const TraceSpace& space, const ScalarField& u, const VectorField& grad_u);

/// Boundary-vertex dofs set to (u, du/dx, du/dy); interior dofs left at zero.
/// Throws std::domain_error when the data is not finite at a boundary vertex.
TraceCoeffs interpolate_boundary_data(const TraceSpace& space, const ScalarField& u, const VectorField& grad_u);

}  // namespace dpg
