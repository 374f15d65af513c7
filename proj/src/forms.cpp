// SPDX-License-Identifier: Apache-2.0

#include "dpg/forms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dpg/quadrature.hpp"

namespace dpg {

void Formulation::validate() const {
  if (field_degree < 0) throw std::invalid_argument("Formulation: negative field degree");
  if (test_degree < field_degree + 2)
    throw std::invalid_argument("Formulation: test degree " + std::to_string(test_degree) +
                                " must be at least field degree + 2 = " + std::to_string(field_degree + 2));
}

ElementSpaces ElementSpaces::make(const std::array<Point, 3>& corners, const Formulation& form,
                                  ElementBasis::Kind kind) {
  form.validate();
  return {ElementBasis(corners, form.test_degree, kind), ElementBasis(corners, form.field_degree, kind)};
}

LocalLayout LocalLayout::of(const Formulation& form) {
  LocalLayout l;
  l.nfield = poly_dim(form.field_degree);
  l.ntest = poly_dim(form.test_degree);
  l.u = 0;
  l.sigma = l.nfield;
  l.u_hat = 2 * l.nfield;
  l.sigma_hat = l.u_hat + 9;
  l.cols = l.sigma_hat + 9;
  l.rows = 2 * l.ntest;
  return l;
}

namespace {

void check_spaces(const ElementSpaces& spaces, const Formulation& form) {
  if (spaces.test.degree() != form.test_degree || spaces.field.degree() != form.field_degree)
    throw std::invalid_argument("forms: element spaces do not match the formulation's degrees");
}

}  // namespace

Eigen::MatrixXd local_gram(const ElementSpaces& spaces, const Formulation& form) {
  check_spaces(spaces, form);
  const int n = spaces.test.size();
  const QuadRule rule = triangle_quadrature(volume_exactness(form.test_degree));
  const double jdet = 2.0 * spaces.test.area();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double w = rule.weights[q] * jdet;
    const BasisValues b = spaces.test.eval(spaces.test.to_physical(rule.points[q]));
    const Eigen::VectorXd l = b.hess.col(0) + b.hess.col(2);
    mass.noalias() += w * b.value * b.value.transpose();
    lap.noalias() += w * l * l.transpose();
    // Frobenius product of Hessians: xx xx + 2 xy xy + yy yy
    hess.noalias() += w * (b.hess.col(0) * b.hess.col(0).transpose() + 2.0 * b.hess.col(1) * b.hess.col(1).transpose() +
                           b.hess.col(2) * b.hess.col(2).transpose());
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  g.topLeftCorner(n, n) = mass + (form.scheme == Scheme::vf1 ? lap : hess);
  g.bottomRightCorner(n, n) = mass + lap;
  // exact symmetry for the factorization
  return 0.5 * (g + g.transpose());
}

Eigen::MatrixXd local_gram_root(const ElementSpaces& spaces, const Formulation& form) {
  check_spaces(spaces, form);
  const int n = spaces.test.size();
  const QuadRule rule = triangle_quadrature(volume_exactness(form.test_degree));
  const int nq = static_cast<int>(rule.points.size());
  const double jdet = 2.0 * spaces.test.area();
  const bool hessian_block = form.scheme == Scheme::vf2;
  // rows: values, then Laplacians (tau block) or Hessian entries (v block)
  Eigen::MatrixXd av(nq * (hessian_block ? 4 : 2), n), at(nq * 2, n);
  for (int q = 0; q < nq; ++q) {
    const double sw = std::sqrt(rule.weights[q] * jdet);
    const BasisValues b = spaces.test.eval(spaces.test.to_physical(rule.points[q]));
    const Eigen::VectorXd lap = b.hess.col(0) + b.hess.col(2);
    at.row(q) = sw * b.value.transpose();
    at.row(nq + q) = sw * lap.transpose();
    av.row(q) = at.row(q);
    if (hessian_block) {
      av.row(nq + q) = sw * b.hess.col(0).transpose();
      av.row(2 * nq + q) = sw * std::sqrt(2.0) * b.hess.col(1).transpose();
      av.row(3 * nq + q) = sw * b.hess.col(2).transpose();
    } else {
      av.row(nq + q) = at.row(nq + q);
    }
  }
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qv(av), qt(at);
  r.topLeftCorner(n, n) = qv.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  r.bottomRightCorner(n, n) = qt.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  return r;
}

Eigen::MatrixXd local_b(const ElementSpaces& spaces, const Formulation& form) {
  check_spaces(spaces, form);
  const LocalLayout lay = LocalLayout::of(form);
  const int nt = lay.ntest, nf = lay.nfield;
  const int v0 = 0, tau0 = nt;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(lay.rows, lay.cols);

  const QuadRule rule = triangle_quadrature(volume_exactness(form.test_degree));
  const double jdet = 2.0 * spaces.test.area();
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double w = rule.weights[q] * jdet;
    const Point x = spaces.test.to_physical(rule.points[q]);
    const BasisValues t = spaces.test.eval(x);
    const Eigen::VectorXd phi = spaces.field.eval(x).value;
    const Eigen::VectorXd lap = t.hess.col(0) + t.hess.col(2);
    // (u, Delta tau)
    b.block(tau0, lay.u, nt, nf).noalias() += w * lap * phi.transpose();
    // (sigma, Delta v - tau)
    b.block(v0, lay.sigma, nt, nf).noalias() += w * lap * phi.transpose();
    b.block(tau0, lay.sigma, nt, nf).noalias() -= w * t.value * phi.transpose();
  }

  // skeleton: -<w_hat, t>_{dT} = -oint (w dn t - dn w t) for each trace unknown
  const LineRule line = edge_quadrature(edge_exactness(form.test_degree));
  const auto& p = spaces.test.corners();
  for (int e = 0; e < 3; ++e) {
    const int ia = e, ib = (e + 1) % 3;
    const Point a = p[ia], d = p[ib] - p[ia];
    const double len = norm(d);
    const Point n{d.y / len, -d.x / len};
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double s = line.points[q], w = line.weights[q] * len;
      const Point x = a + s * d;
      const BasisValues t = spaces.test.eval(x);
      const Eigen::VectorXd dn = n.x * t.grad.col(0) + n.y * t.grad.col(1);
      const EdgeShape shape = hermite_edge_shape(p[ia], p[ib], n, s);
      for (int end = 0; end < 2; ++end) {
        const int vertex = end == 0 ? ia : ib;
        for (int c = 0; c < 3; ++c) {
          const int k = 3 * end + c;
          if (shape.value[k] == 0.0 && shape.normal[k] == 0.0) continue;
          const Eigen::VectorXd pairing = shape.value[k] * dn - shape.normal[k] * t.value;
          b.block(tau0, lay.u_hat + 3 * vertex + c, nt, 1) -= w * pairing;
          b.block(v0, lay.sigma_hat + 3 * vertex + c, nt, 1) -= w * pairing;
        }
      }
    }
  }
  return b;
}

Eigen::VectorXd local_load(const ElementSpaces& spaces, const Formulation& form, const ScalarField& f) {
  check_spaces(spaces, form);
  const int nt = spaces.test.size();
  Eigen::VectorXd l = Eigen::VectorXd::Zero(2 * nt);
  if (!f) return l;
  const QuadRule rule = triangle_quadrature(volume_exactness(form.test_degree) + 2);
  const double jdet = 2.0 * spaces.test.area();
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = spaces.test.to_physical(rule.points[q]);
    const double fx = f(x);
    if (fx == 0.0) continue;
    l.head(nt) += rule.weights[q] * jdet * fx * spaces.test.eval(x).value;
  }
  return l;
}

}  // namespace dpg
