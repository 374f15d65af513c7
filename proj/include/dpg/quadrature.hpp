// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "dpg/mesh.hpp"

namespace dpg {

/// Quadrature on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct QuadRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int exactness = 0;
};

/// Quadrature on [0,1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exactness = 0;
};

/// Highest exactness degree the collapsed tensor rule is built for.
inline constexpr int kMaxQuadratureExactness = 60;

/// n-point Gauss-Legendre rule on [0,1] (exact to degree 2n-1).
LineRule gauss_legendre(int npoints);

LineRule edge_quadrature(int exactness);

/// Small tabulated rules up to degree 2, collapsed (Duffy) Gauss rule above.
QuadRule triangle_quadrature(int exactness);

}  // namespace dpg
