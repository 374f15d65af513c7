// SPDX-License-Identifier: Apache-2.0

#include "dpg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace dpg {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

LineRule gauss_legendre(int npoints) {
  if (npoints < 1 || npoints > kMaxQuadratureExactness)
    throw std::invalid_argument("gauss_legendre: unsupported number of points " + std::to_string(npoints));
  const int n = npoints;
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.exactness = 2 * n - 1;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

LineRule edge_quadrature(int exactness) {
  if (exactness < 0) throw std::invalid_argument("edge_quadrature: negative exactness");
  return gauss_legendre(exactness / 2 + 1);
}

QuadRule triangle_quadrature(int exactness) {
  if (exactness < 0) throw std::invalid_argument("triangle_quadrature: negative exactness");
  if (exactness > kMaxQuadratureExactness)
    throw std::invalid_argument("triangle_quadrature: exactness " + std::to_string(exactness) +
                                " exceeds supported maximum " + std::to_string(kMaxQuadratureExactness));
  QuadRule rule;
  if (exactness <= 1) {
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
    rule.exactness = 1;
    return rule;
  }
  if (exactness == 2) {
    rule.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    rule.exactness = 2;
    return rule;
  }
  // x = s, y = t (1 - s), Jacobian (1 - s): degree+1 in s, degree in t
  const LineRule rs = gauss_legendre((exactness + 1) / 2 + 1);
  const LineRule rt = gauss_legendre(exactness / 2 + 1);
  for (std::size_t i = 0; i < rs.points.size(); ++i)
    for (std::size_t j = 0; j < rt.points.size(); ++j) {
      const double s = rs.points[i], t = rt.points[j];
      rule.points.push_back({s, t * (1.0 - s)});
      rule.weights.push_back(rs.weights[i] * rt.weights[j] * (1.0 - s));
    }
  rule.exactness = exactness;
  return rule;
}

}  // namespace dpg
