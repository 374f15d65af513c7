// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "dpg/mesh.hpp"

namespace dpg {

/// Symmetric 2x2 matrix (xx, xy, yy).
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
  double trace() const { return xx + yy; }
  /// Frobenius inner product, counting the off-diagonal twice.
  double frobenius(const Sym2& o) const { return xx * o.xx + 2.0 * xy * o.xy + yy * o.yy; }
};

/// Dense bivariate polynomial sum c_ij x^i y^j with i + j <= degree.
class Polynomial2 {
 public:
  explicit Polynomial2(int degree = 0);
  static Polynomial2 monomial(int i, int j, double c = 1.0);
  static Polynomial2 constant(double c);

  int degree() const { return degree_; }
  double coeff(int i, int j) const;
  void set_coeff(int i, int j, double c);

  double operator()(Point p) const;
  Point gradient(Point p) const;
  Sym2 hessian(Point p) const;

  Polynomial2 dx() const;
  Polynomial2 dy() const;
  Polynomial2 laplacian() const;

  Polynomial2& operator+=(const Polynomial2& o);
  friend Polynomial2 operator+(Polynomial2 a, const Polynomial2& b) { return a += b; }
  friend Polynomial2 operator-(Polynomial2 a, const Polynomial2& b);
  friend Polynomial2 operator*(double s, Polynomial2 a);
  friend Polynomial2 operator*(const Polynomial2& a, const Polynomial2& b);

 private:
  static int index(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }
  int degree_;
  std::vector<double> c_;
};

}  // namespace dpg
