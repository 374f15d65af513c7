// SPDX-License-Identifier: Apache-2.0

#include "dpg/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dpg/quadrature.hpp"

namespace dpg {

namespace {

constexpr double kInsideTol = 1e-10;

bool inside_reference(Point r, double tol) {
  return r.x >= -tol && r.y >= -tol && r.x + r.y <= 1.0 + tol;
}

// x^n, n x^{n-1}, n (n-1) x^{n-2} with 0 for negative powers
struct Pow {
  double v, d, dd;
};
Pow power(double x, int n) {
  auto p = [x](int m) { return m < 0 ? 0.0 : std::pow(x, m); };
  return {p(n), n * p(n - 1), n * (n - 1) * p(n - 2)};
}

}  // namespace

BasisValues eval_basis(int degree, Point ref) {
  if (degree < 0) throw std::invalid_argument("eval_basis: negative degree");
  if (!inside_reference(ref, kInsideTol))
    throw std::domain_error("eval_basis: point (" + std::to_string(ref.x) + ", " + std::to_string(ref.y) +
                            ") outside the reference triangle");
  const int n = poly_dim(degree);
  BasisValues b{Eigen::VectorXd::Zero(n), Eigen::MatrixX2d::Zero(n, 2), Eigen::MatrixX3d::Zero(n, 3)};
  if (degree == 0) {
    b.value(0) = 1.0;
    return b;
  }
  b.value(0) = 1.0 - ref.x - ref.y;
  b.grad.row(0) << -1.0, -1.0;
  b.value(1) = ref.x;
  b.grad.row(1) << 1.0, 0.0;
  b.value(2) = ref.y;
  b.grad.row(2) << 0.0, 1.0;
  int k = 3;
  for (int total = 2; total <= degree; ++total)
    for (int i = total; i >= 0; --i, ++k) {
      const int j = total - i;
      const Pow px = power(ref.x, i), py = power(ref.y, j);
      b.value(k) = px.v * py.v;
      b.grad.row(k) << px.d * py.v, px.v * py.d;
      b.hess.row(k) << px.dd * py.v, px.d * py.d, px.v * py.dd;
    }
  return b;
}

ElementBasis::ElementBasis(const std::array<Point, 3>& corners, int degree, Kind kind)
    : corners_(corners), degree_(degree) {
  if (degree < 0) throw std::invalid_argument("ElementBasis: negative degree");
  const Point e1 = corners[1] - corners[0], e2 = corners[2] - corners[0];
  jac_ << e1.x, e2.x, e1.y, e2.y;
  area_ = 0.5 * std::abs(jac_.determinant());
  if (!(std::abs(area_) >= 1e-14))
    throw std::domain_error("ElementBasis: degenerate element (area " + std::to_string(area_) + ")");
  jac_inv_ = jac_.inverse();

  const int n = poly_dim(degree);
  coeffs_ = Eigen::MatrixXd::Identity(n, n);
  if (kind == Kind::raw) return;

  const QuadRule rule = triangle_quadrature(2 * degree);
  const int nq = static_cast<int>(rule.points.size());
  Eigen::MatrixXd weighted(nq, n);
  const double jdet = 2.0 * area_;
  for (int q = 0; q < nq; ++q)
    weighted.row(q) = std::sqrt(rule.weights[q] * jdet) * eval_basis(degree, rule.points[q]).value.transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(weighted);
  Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  // fix signs so that diag(R) > 0, making the basis independent of QR conventions
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0.0) r.row(i) *= -1.0;
  coeffs_ = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
}

Point ElementBasis::to_physical(Point ref) const {
  return {corners_[0].x + jac_(0, 0) * ref.x + jac_(0, 1) * ref.y,
          corners_[0].y + jac_(1, 0) * ref.x + jac_(1, 1) * ref.y};
}

Point ElementBasis::to_reference(Point x) const {
  const Point d = x - corners_[0];
  return {jac_inv_(0, 0) * d.x + jac_inv_(0, 1) * d.y, jac_inv_(1, 0) * d.x + jac_inv_(1, 1) * d.y};
}

BasisValues ElementBasis::eval(Point x) const {
  Point ref = to_reference(x);
  if (!inside_reference(ref, kInsideTol))
    throw std::domain_error("ElementBasis::eval: point outside element");
  // clamp round-off so reference evaluation accepts boundary points
  ref.x = std::max(ref.x, 0.0);
  ref.y = std::max(ref.y, 0.0);
  if (ref.x + ref.y > 1.0) {
    const double s = ref.x + ref.y;
    ref.x /= s;
    ref.y /= s;
  }
  const BasisValues r = eval_basis(degree_, ref);
  BasisValues b;
  // chain rule: grad_x = J^{-T} grad_ref, H_x = J^{-T} H_ref J^{-1}
  b.grad = r.grad * jac_inv_;
  const int n = size();
  b.hess.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    Eigen::Matrix2d h;
    h << r.hess(i, 0), r.hess(i, 1), r.hess(i, 1), r.hess(i, 2);
    const Eigen::Matrix2d hx = jac_inv_.transpose() * h * jac_inv_;
    b.hess.row(i) << hx(0, 0), hx(0, 1), hx(1, 1);
  }
  b.value = coeffs_.transpose() * r.value;
  b.grad = coeffs_.transpose() * b.grad;
  b.hess = coeffs_.transpose() * b.hess;
  return b;
}

double eval_expansion(const ElementBasis& basis, const Eigen::VectorXd& c, Point x) {
  return basis.eval(x).value.dot(c);
}

}  // namespace dpg
