// SPDX-License-Identifier: Apache-2.0

#include "dpg/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace dpg {

Polynomial2::Polynomial2(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("Polynomial2: negative degree");
  c_.assign((degree + 1) * (degree + 2) / 2, 0.0);
}

Polynomial2 Polynomial2::monomial(int i, int j, double c) {
  Polynomial2 p(i + j);
  p.set_coeff(i, j, c);
  return p;
}

Polynomial2 Polynomial2::constant(double c) {
  Polynomial2 p(0);
  p.set_coeff(0, 0, c);
  return p;
}

double Polynomial2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > degree_) return 0.0;
  return c_[index(i, j)];
}

void Polynomial2::set_coeff(int i, int j, double c) {
  if (i < 0 || j < 0 || i + j > degree_) throw std::out_of_range("Polynomial2: coefficient outside degree");
  c_[index(i, j)] = c;
}

double Polynomial2::operator()(Point p) const {
  // Horner in y for each power of x
  double result = 0.0;
  for (int i = degree_; i >= 0; --i) {
    double inner = 0.0;
    for (int j = degree_ - i; j >= 0; --j) inner = inner * p.y + c_[index(i, j)];
    result = result * p.x + inner;
  }
  return result;
}

Polynomial2 Polynomial2::dx() const {
  Polynomial2 d(std::max(degree_ - 1, 0));
  for (int i = 1; i <= degree_; ++i)
    for (int j = 0; i + j <= degree_; ++j) d.set_coeff(i - 1, j, i * coeff(i, j));
  return d;
}

Polynomial2 Polynomial2::dy() const {
  Polynomial2 d(std::max(degree_ - 1, 0));
  for (int i = 0; i <= degree_; ++i)
    for (int j = 1; i + j <= degree_; ++j) d.set_coeff(i, j - 1, j * coeff(i, j));
  return d;
}

Point Polynomial2::gradient(Point p) const { return {dx()(p), dy()(p)}; }

Sym2 Polynomial2::hessian(Point p) const {
  const Polynomial2 px = dx();
  return {px.dx()(p), px.dy()(p), dy().dy()(p)};
}

Polynomial2 Polynomial2::laplacian() const { return dx().dx() + dy().dy(); }

Polynomial2& Polynomial2::operator+=(const Polynomial2& o) {
  if (o.degree_ > degree_) {
    Polynomial2 wide(o.degree_);
    for (int i = 0; i <= degree_; ++i)
      for (int j = 0; i + j <= degree_; ++j) wide.set_coeff(i, j, coeff(i, j));
    *this = std::move(wide);
  }
  for (int i = 0; i <= o.degree_; ++i)
    for (int j = 0; i + j <= o.degree_; ++j) c_[index(i, j)] += o.coeff(i, j);
  return *this;
}

Polynomial2 operator-(Polynomial2 a, const Polynomial2& b) { return a += (-1.0) * b; }

Polynomial2 operator*(double s, Polynomial2 a) {
  for (double& c : a.c_) c *= s;
  return a;
}

Polynomial2 operator*(const Polynomial2& a, const Polynomial2& b) {
  Polynomial2 r(a.degree_ + b.degree_);
  for (int i = 0; i <= a.degree_; ++i)
    for (int j = 0; i + j <= a.degree_; ++j) {
      const double ca = a.coeff(i, j);
      if (ca == 0.0) continue;
      for (int k = 0; k <= b.degree_; ++k)
        for (int l = 0; k + l <= b.degree_; ++l)
          r.c_[Polynomial2::index(i + k, j + l)] += ca * b.coeff(k, l);
    }
  return r;
}

}  // namespace dpg
