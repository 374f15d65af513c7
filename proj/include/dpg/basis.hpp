// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include <Eigen/Dense>

#include "dpg/mesh.hpp"
#include "dpg/polynomial.hpp"

namespace dpg {

/// Dimension of the full polynomial space of the given degree in 2D.
inline int poly_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Values, gradients (columns x, y) and Hessians (columns xx, xy, yy)
/// of every basis function at one point.
struct BasisValues {
  Eigen::VectorXd value;
  Eigen::MatrixX2d grad;
  Eigen::MatrixX3d hess;
};

/// Reference basis on the triangle (0,0), (1,0), (0,1).
///
/// Degree 0 is the constant 1. From degree 1 on the first three members are the
/// barycentric coordinates (1-x-y, x, y), followed by the monomials x^i y^j with
/// 2 <= i+j <= degree, ordered by total degree and then by descending i.
BasisValues eval_basis(int degree, Point ref);

/// Polynomial basis of degree k on one physical triangle.
///
/// `raw` pulls the reference basis back through the affine map. `orthonormal`
/// applies Gram-Schmidt (Householder QR on weighted point values) against the
/// element L2 inner product, which keeps Gram matrices well conditioned at
/// degree 4-8.
class ElementBasis {
 public:
  enum class Kind { raw, orthonormal };

  ElementBasis(const std::array<Point, 3>& corners, int degree, Kind kind = Kind::orthonormal);

  int degree() const { return degree_; }
  int size() const { return poly_dim(degree_); }
  double area() const { return area_; }
  const std::array<Point, 3>& corners() const { return corners_; }

  Point to_physical(Point ref) const;
  Point to_reference(Point x) const;

  /// Evaluates at a physical point; throws if the point is outside the element.
  BasisValues eval(Point x) const;

  /// Coefficients of the element basis in terms of the pulled-back reference
  /// basis: phi_j = sum_i raw_i * coeffs(i, j).
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }

 private:
  std::array<Point, 3> corners_;
  int degree_;
  double area_;
  Eigen::Matrix2d jac_;      // d x / d ref
  Eigen::Matrix2d jac_inv_;  // d ref / d x
  Eigen::MatrixXd coeffs_;
};

/// Polynomial of the given degree with coefficients `c` in an element basis,
/// evaluated at x (value only).
double eval_expansion(const ElementBasis& basis, const Eigen::VectorXd& c, Point x);

}  // namespace dpg
