// SPDX-License-Identifier: Apache-2.0

#include "dpg/problems.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpg/basis.hpp"
#include "dpg/dpg_solver.hpp"
#include "dpg/quadrature.hpp"

namespace dpg {

namespace {

double g0(double t) { return t * t * (1.0 - t) * (1.0 - t); }
double g1(double t) { return 2.0 * t - 6.0 * t * t + 4.0 * t * t * t; }
double g2(double t) { return 2.0 - 12.0 * t + 12.0 * t * t; }
constexpr double g4 = 24.0;

}  // namespace

Problem smooth_problem() {
  Problem p;
  p.name = "smooth";
  p.u_exact = [](Point x) { return g0(x.x) * g0(x.y); };
  p.grad_u_exact = [](Point x) { return Point{g1(x.x) * g0(x.y), g0(x.x) * g1(x.y)}; };
  p.sigma_exact = [](Point x) { return g2(x.x) * g0(x.y) + g0(x.x) * g2(x.y); };
  p.f = [](Point x) { return g4 * g0(x.y) + 2.0 * g2(x.x) * g2(x.y) + g0(x.x) * g4; };
  p.boundary = BoundaryMode::homogeneous;
  p.make_domain = [] { return make_unit_square(2); };
  return p;
}

Problem singular_problem() {
  constexpr double a = kSingularAlpha, c = kSingularC;
  Problem p;
  p.name = "singular";
  p.u_exact = [](Point x) {
    const double r = std::hypot(x.x, x.y);
    if (r == 0.0) return 0.0;
    const double phi = std::atan2(x.y, x.x);
    return std::pow(r, 1.0 + a) * (std::cos((a + 1.0) * phi) + c * std::cos((a - 1.0) * phi));
  };
  p.grad_u_exact = [](Point x) {
    const double r = std::hypot(x.x, x.y);
    if (r == 0.0) return Point{0.0, 0.0};
    const double phi = std::atan2(x.y, x.x);
    const double ra = std::pow(r, a);
    const double ur = (1.0 + a) * ra * (std::cos((a + 1.0) * phi) + c * std::cos((a - 1.0) * phi));
    const double uphi = ra * (-(a + 1.0) * std::sin((a + 1.0) * phi) - c * (a - 1.0) * std::sin((a - 1.0) * phi));
    const double cs = std::cos(phi), sn = std::sin(phi);
    return Point{ur * cs - uphi * sn, ur * sn + uphi * cs};
  };
  p.sigma_exact = [](Point x) {
    const double r = std::hypot(x.x, x.y);
    const double phi = std::atan2(x.y, x.x);
    return 4.0 * a * c * std::pow(r, a - 1.0) * std::cos((a - 1.0) * phi);
  };
  p.f = [](Point) { return 0.0; };
  p.boundary = BoundaryMode::interpolated;
  p.make_domain = make_sector_domain;
  p.singular_point = Point{0.0, 0.0};
  return p;
}

Problem zero_problem(std::function<Mesh()> make_domain) {
  Problem p;
  p.name = "zero";
  p.u_exact = [](Point) { return 0.0; };
  p.grad_u_exact = [](Point) { return Point{}; };
  p.sigma_exact = [](Point) { return 0.0; };
  p.f = [](Point) { return 0.0; };
  p.make_domain = std::move(make_domain);
  return p;
}

Problem polynomial_problem(std::string name, ScalarField u, VectorField grad, ScalarField sigma, ScalarField f,
                           std::function<Mesh()> make_domain) {
  Problem p;
  p.name = std::move(name);
  p.u_exact = std::move(u);
  p.grad_u_exact = std::move(grad);
  p.sigma_exact = std::move(sigma);
  p.f = std::move(f);
  p.boundary = BoundaryMode::interpolated;
  p.make_domain = std::move(make_domain);
  return p;
}

namespace {

using Cell = std::array<Point, 3>;

Point mid(Point a, Point b) { return 0.5 * (a + b); }

/// Integration cells covering the element; graded towards corner s when s >= 0.
std::vector<Cell> integration_cells(const Cell& tri, int s, int levels) {
  if (s < 0) return {tri};
  Cell cur{tri[s], tri[(s + 1) % 3], tri[(s + 2) % 3]};
  std::vector<Cell> cells;
  for (int l = 0; l < levels; ++l) {
    const Point ma = mid(cur[0], cur[1]), mb = mid(cur[0], cur[2]), mab = mid(cur[1], cur[2]);
    cells.push_back({ma, cur[1], mab});
    cells.push_back({mb, mab, cur[2]});
    cells.push_back({ma, mab, mb});
    cur = {cur[0], ma, mb};
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

FieldErrors l2_errors(const Solution& solution, const Problem& problem) {
  if (!problem.has_exact()) throw std::invalid_argument("l2_errors: problem has no exact solution");
  const Mesh& mesh = solution.mesh;
  const int exactness = std::max(2 * solution.formulation.test_degree + 2, 18);
  const QuadRule rule = triangle_quadrature(exactness);
  constexpr int kGradedLevels = 4;
  double eu = 0.0, es = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const Cell corners = mesh.corners(t);
    const ElementBasis basis(corners, solution.u.degree);
    int singular_corner = -1;
    if (problem.singular_point) {
      for (int i = 0; i < 3; ++i)
        if (norm(corners[i] - *problem.singular_point) <= 1e-12 * mesh.diameter(t)) singular_corner = i;
    }
    for (const Cell& cell : integration_cells(corners, singular_corner, kGradedLevels)) {
      const Point e1 = cell[1] - cell[0], e2 = cell[2] - cell[0];
      const double jdet = std::abs(e1.x * e2.y - e1.y * e2.x);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Point x = cell[0] + rule.points[q].x * e1 + rule.points[q].y * e2;
        const Eigen::VectorXd phi = basis.eval(x).value;
        const double du = problem.u_exact(x) - phi.dot(solution.u.coeffs.col(t));
        const double ds = problem.sigma_exact(x) - phi.dot(solution.sigma.coeffs.col(t));
        const double w = rule.weights[q] * jdet;
        eu += w * du * du;
        es += w * ds * ds;
      }
    }
  }
  return {std::sqrt(eu), std::sqrt(es)};
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope: need two or more pairs");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log_log_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("log_log_slope: abscissae coincide");
  return (n * sxy - sx * sy) / denom;
}

double estimate_rate(std::span<const StudyRecord> records, RateKey key, RateAxis axis) {
  if (records.size() < 3) throw std::invalid_argument("estimate_rate: need at least 3 records");
  const std::size_t m = std::min<std::size_t>(4, records.size());
  std::vector<double> x, y;
  for (std::size_t i = records.size() - m; i < records.size(); ++i) {
    const StudyRecord& r = records[i];
    x.push_back(axis == RateAxis::h ? r.h_max : static_cast<double>(r.ndof_total));
    y.push_back(key == RateKey::eta ? r.eta : key == RateKey::err_u ? r.err_u : r.err_sigma);
  }
  const double slope = log_log_slope(x, y);
  return axis == RateAxis::h ? slope : -slope;
}

}  // namespace dpg
