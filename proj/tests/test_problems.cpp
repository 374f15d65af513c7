// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dpg/dpg_solver.hpp"
#include "dpg/problems.hpp"
#include "dpg/quadrature.hpp"

using namespace dpg;

namespace {

double fd_laplacian(const ScalarField& u, Point x, double h) {
  return (u({x.x + h, x.y}) + u({x.x - h, x.y}) + u({x.x, x.y + h}) + u({x.x, x.y - h}) - 4 * u(x)) / (h * h);
}

// a Solution with the given field coefficients and empty traces
Solution field_solution(const Mesh& m, int degree, const Eigen::MatrixXd& u, const Eigen::MatrixXd& s) {
  Solution sol;
  sol.mesh = m;
  sol.formulation = Formulation{Scheme::vf2, degree, degree + 2};
  sol.u = BrokenField{degree, u};
  sol.sigma = BrokenField{degree, s};
  sol.u_hat = TraceCoeffs::Zero(3 * static_cast<Eigen::Index>(m.num_vertices()));
  sol.sigma_hat = sol.u_hat;
  return sol;
}

// element L2 projection coefficients of f in the orthonormal basis
Eigen::MatrixXd project(const Mesh& m, int degree, const ScalarField& f) {
  const QuadRule r = triangle_quadrature(2 * degree + 12);
  Eigen::MatrixXd c(poly_dim(degree), m.num_triangles());
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const ElementBasis b(m.corners(static_cast<int>(t)), degree);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(b.size());
    for (std::size_t q = 0; q < r.points.size(); ++q) {
      const Point x = b.to_physical(r.points[q]);
      acc += r.weights[q] * 2.0 * b.area() * f(x) * b.eval(x).value;
    }
    c.col(static_cast<Eigen::Index>(t)) = acc;
  }
  return c;
}

std::vector<StudyRecord> synthetic(std::vector<double> x, std::vector<double> y, bool ndof_axis) {
  std::vector<StudyRecord> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    r[i].level = static_cast<int>(i);
    if (ndof_axis)
      r[i].ndof_total = static_cast<int>(x[i]);
    else
      r[i].h_max = x[i];
    r[i].eta = r[i].err_u = r[i].err_sigma = y[i];
  }
  return r;
}

}  // namespace

TEST_CASE("smooth problem examples") {
  const Problem p = smooth_problem();
  CHECK(p.u_exact({0.5, 0.5}) == doctest::Approx(0.00390625).epsilon(1e-15));
  CHECK(p.sigma_exact({0.5, 0.5}) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(p.f({0.5, 0.5}) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(p.boundary == BoundaryMode::homogeneous);
  CHECK(p.has_exact());
  CHECK(!p.singular_point);
}

TEST_CASE("smooth problem: fields match finite differences") {
  const Problem p = smooth_problem();
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const Point x{u(gen), u(gen)};
    const double s = p.sigma_exact(x);
    CHECK(std::abs(fd_laplacian(p.u_exact, x, 1e-4) - s) <= 1e-5 * std::max(std::abs(s), 1e-2));
    const double h = 1e-5;
    const Point g = p.grad_u_exact(x);
    CHECK(g.x == doctest::Approx((p.u_exact({x.x + h, x.y}) - p.u_exact({x.x - h, x.y})) / (2 * h)).epsilon(1e-6));
    CHECK(g.y == doctest::Approx((p.u_exact({x.x, x.y + h}) - p.u_exact({x.x, x.y - h})) / (2 * h)).epsilon(1e-6));
  }
  for (int i = 0; i < 20; ++i) {
    const Point x{u(gen), u(gen)};
    const double f = p.f(x);
    CHECK(std::abs(fd_laplacian(p.sigma_exact, x, 1e-3) - f) <= 1e-3 * std::max(std::abs(f), 1.0));
  }
}

TEST_CASE("singular problem examples") {
  const Problem p = singular_problem();
  CHECK(kSingularAlpha == 0.673583432147380);
  CHECK(kSingularC == 1.234587795273723);
  CHECK(p.u_exact({1.0, 0.0}) == doctest::Approx(1.0 + kSingularC).epsilon(1e-14));
  CHECK(p.f({0.3, 0.2}) == 0.0);
  CHECK(p.boundary == BoundaryMode::interpolated);
  REQUIRE(p.singular_point);
  CHECK(p.singular_point->x == 0.0);
  const Point g0 = p.grad_u_exact({0.0, 0.0});
  CHECK(g0.x == 0.0);
  CHECK(g0.y == 0.0);
}

TEST_CASE("singular problem: clamped on both rays") {
  const Problem p = singular_problem();
  const double phi = 5.0 * std::numbers::pi / 8.0;
  for (double sgn : {-1.0, 1.0})
    for (int i = 1; i <= 10; ++i) {
      const double r = 0.1 * i;
      const Point x{r * std::cos(phi), sgn * r * std::sin(phi)};
      const Point n{-std::sin(phi), -sgn * std::cos(phi)};  // any unit normal to the ray
      const Point g = p.grad_u_exact(x);
      CHECK(std::abs(p.u_exact(x)) < 1e-10);
      CHECK(std::abs(g.x * n.x + g.y * n.y) < 1e-8);
    }
}

TEST_CASE("singular problem: fields match finite differences away from the corner") {
  const Problem p = singular_problem();
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> r(0.05, 1.0), a(-1.9, 1.9);
  for (int i = 0; i < 50; ++i) {
    const double rr = r(gen), aa = a(gen);
    const Point x{rr * std::cos(aa), rr * std::sin(aa)};
    const double s = p.sigma_exact(x);
    CHECK(std::abs(fd_laplacian(p.u_exact, x, 1e-4 * rr) - s) <= 1e-5 * std::max(std::abs(s), 1e-1));
  }
}

TEST_CASE("L2 errors") {
  const Problem p = smooth_problem();
  const Mesh m = make_unit_square(4);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, m.num_triangles());
  const FieldErrors e0 = l2_errors(field_solution(m, 0, zero, zero), p);
  CHECK(e0.u == doctest::Approx(1.0 / 630.0).epsilon(1e-10));

  // exactly representable fields
  const Problem q = polynomial_problem(
      "quad", [](Point x) { return x.x * x.y; }, [](Point x) { return Point{x.y, x.x}; },
      [](Point) { return 0.0; }, [](Point) { return 0.0; }, [] { return make_unit_square(2); });
  const Mesh m2 = make_unit_square(2);
  const FieldErrors ex = l2_errors(
      field_solution(m2, 2, project(m2, 2, q.u_exact), Eigen::MatrixXd::Zero(6, m2.num_triangles())), q);
  CHECK(ex.u < 1e-13);
  CHECK(ex.sigma == 0.0);

  // nested spaces
  const FieldErrors p0 = l2_errors(field_solution(m, 0, project(m, 0, p.u_exact), project(m, 0, p.sigma_exact)), p);
  const FieldErrors p1 = l2_errors(field_solution(m, 1, project(m, 1, p.u_exact), project(m, 1, p.sigma_exact)), p);
  CHECK(p1.u <= p0.u);
  CHECK(p1.sigma <= p0.sigma);

  Problem none = p;
  none.u_exact = nullptr;
  CHECK_THROWS_AS(l2_errors(field_solution(m, 0, zero, zero), none), std::invalid_argument);
}

TEST_CASE("L2 error of the singular sigma is finite and resolves the corner") {
  const Problem p = singular_problem();
  const Mesh m = p.make_domain();
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, m.num_triangles());
  const FieldErrors e = l2_errors(field_solution(m, 0, zero, zero), p);
  // ||sigma||^2 on the wedge r < 1 in closed form; the fan is inscribed, so it is an upper bound
  const double a = kSingularAlpha, c = kSingularC, w = 5.0 * std::numbers::pi / 8.0;
  const double radial = 1.0 / (2.0 * a);
  const double angular = w + std::sin(2.0 * (a - 1.0) * w) / (2.0 * (a - 1.0));
  const double wedge = 16.0 * a * a * c * c * radial * angular;
  CHECK(std::isfinite(e.sigma));
  CHECK(e.sigma * e.sigma < wedge);
  CHECK(e.sigma * e.sigma > 0.8 * wedge);
}

TEST_CASE("rate estimation") {
  CHECK(estimate_rate(synthetic({1, 0.5, 0.25}, {1, 0.5, 0.25}, false), RateKey::eta, RateAxis::h) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(estimate_rate(synthetic({1, 0.5, 0.25}, {1, 1, 1}, false), RateKey::err_u, RateAxis::h)) < 1e-14);

  std::vector<double> nd{100, 400, 1600, 6400, 25600}, y;
  for (double n : nd) y.push_back(3.0 / std::sqrt(n));
  CHECK(estimate_rate(synthetic(nd, y, true), RateKey::err_sigma, RateAxis::ndof) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // only the last four records count
  auto r = synthetic({1, 0.5, 0.25, 0.125, 0.0625}, {7, 0.5, 0.25, 0.125, 0.0625}, false);
  CHECK(estimate_rate(r, RateKey::eta, RateAxis::h) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(estimate_rate(synthetic({1, 0.5}, {1, 0.5}, false), RateKey::eta, RateAxis::h),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_rate(synthetic({1, 0.5, 0.25}, {1, 0, 0.25}, false), RateKey::eta, RateAxis::h),
                  std::invalid_argument);

  const std::vector<double> x{1, 2, 4}, yy{1, 4, 16};
  CHECK(log_log_slope(x, yy) == doctest::Approx(2.0));
  CHECK_THROWS_AS(log_log_slope(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
}
