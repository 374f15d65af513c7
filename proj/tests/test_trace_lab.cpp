// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dpg/trace_lab.hpp"

using namespace dpg;

namespace {

std::vector<double> dyadic(int kmin, int kmax) {
  std::vector<double> e;
  for (int k = kmin; k <= kmax; ++k) e.push_back(std::ldexp(1.0, -k));
  return e;
}

const std::array<Point, 3> kRef{Point{0, 0}, Point{1, 0}, Point{0, 1}};

}  // namespace

TEST_CASE("mollifier constant against an independent quadrature") {
  // tanh-sinh handles the flat endpoint of exp(-1/(1-s^2)) differently from Gauss-Kronrod
  boost::math::quadrature::tanh_sinh<double> ts;
  const double i = ts.integrate([](double s) { return s >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - s * s)); }, 0.0, 1.0);
  CHECK(i == doctest::Approx(0.22200).epsilon(1e-4));
  CHECK(mollifier_constant() == doctest::Approx(1.0 / (2.0 * i)).epsilon(1e-10));
  CHECK(std::abs(mollifier_constant() - 2.2523) < 1e-3);
}

TEST_CASE("mollifier normalization, support and continuity") {
  const MollifierFamily fam;
  for (double eps : dyadic(2, 10)) CHECK(std::abs(mollifier_mass(fam, eps) - 0.5) < 1e-10);
  const double eps = 0.25;
  CHECK(fam.phi(eps, eps) == 0.0);
  CHECK(fam.phi(eps, eps * (1 - 1e-9)) < 1e-12);
  CHECK(fam.phi(eps, 0.3) == 0.0);
  for (Point x : {Point{0.25, 0.0}, Point{0.2, 0.2}, Point{0.0, 0.9}}) {
    CHECK(fam.v(eps, x) == 0.0);
    const Point g = fam.grad_v(eps, x);
    CHECK(g.x == 0.0);
    CHECK(g.y == 0.0);
  }
  // gradient against central differences inside the support
  const double h = 1e-7;
  for (Point x : {Point{0.05, 0.1}, Point{0.12, 0.02}, Point{1e-3, 2e-3}}) {
    const Point g = fam.grad_v(eps, x);
    CHECK(g.x == doctest::Approx((fam.v(eps, {x.x + h, x.y}) - fam.v(eps, {x.x - h, x.y})) / (2 * h)).epsilon(1e-6));
    CHECK(g.y == doctest::Approx((fam.v(eps, {x.x, x.y + h}) - fam.v(eps, {x.x, x.y - h})) / (2 * h)).epsilon(1e-6));
  }
  const Point g0 = fam.grad_v(eps, {0.0, 0.0});
  CHECK(std::isfinite(g0.x));
  CHECK(g0.x == doctest::Approx(-fam.phi(eps, 0.0)));
}

TEST_CASE("Dirac pairing examples") {
  const MollifierFamily fam;
  for (double eps : dyadic(2, 10)) {
    CHECK(pair_trace_veps(fam, Polynomial2::constant(1.0), eps) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pair_trace_veps(fam, Polynomial2::monomial(1, 0), eps)) <= eps);
    CHECK(pair_trace_veps(fam, Polynomial2(2), eps) == 0.0);
  }
  CHECK_THROWS_AS(pair_trace_veps(fam, Polynomial2::constant(1.0), 0.5), std::domain_error);
  CHECK_THROWS_AS(pair_trace_veps(fam, Polynomial2::constant(1.0), 0.0), std::domain_error);
}

TEST_CASE("Dirac convergence study") {
  const std::vector<double> eps = dyadic(2, 10);
  const DiracStudy all = dirac_convergence_study(eps, monomials_up_to(4));
  CHECK(all.error.size() == eps.size());
  CHECK(all.slope >= 0.40);

  // polynomials vanishing to first order at the origin converge like eps
  std::vector<Polynomial2> flat;
  for (const Polynomial2& z : monomials_up_to(4))
    if (z.coeff(0, 0) == 0.0 && z.coeff(1, 0) == 0.0 && z.coeff(0, 1) == 0.0) flat.push_back(z);
  CHECK(flat.size() == 12);
  CHECK(dirac_convergence_study(eps, flat).slope >= 0.9);

  const DiracStudy one = dirac_convergence_study({0.125}, {Polynomial2::constant(1.0)});
  CHECK(one.error[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::isnan(one.slope));
  CHECK(monomials_up_to(4).size() == 15);
}

TEST_CASE("H2 norm on the reference triangle") {
  CHECK(h2_norm_reference(Polynomial2::constant(1.0)) == doctest::Approx(std::sqrt(0.5)));
  // x: ||x||^2 = 1/12, ||grad||^2 = 1/2
  CHECK(h2_norm_reference(Polynomial2::monomial(1, 0)) == doctest::Approx(std::sqrt(1.0 / 12 + 0.5)));
  // x^2: ||x^2||^2 = 1/30, ||2x||^2 = 4/12, ||Hess||^2 = 4 * 1/2
  CHECK(h2_norm_reference(Polynomial2::monomial(2, 0)) == doctest::Approx(std::sqrt(1.0 / 30 + 1.0 / 3 + 2.0)));
}

TEST_CASE("unbounded point values with bounded L2 norms") {
  const auto rows = unboundedness_demo({1, 10, 100, 1000});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].value_at_origin == 0.0);
  CHECK(rows[1].value_at_origin == doctest::Approx(-2.302585092994046));
  CHECK(rows[3].value_at_origin == doctest::Approx(-std::log(1000.0)));
  CHECK(rows[2].l2_norm / rows[1].l2_norm <= 1.5);
  CHECK(rows[3].l2_norm / rows[2].l2_norm <= 1.5);
  for (const auto& r : rows) CHECK(r.l2_norm > 0.0);
  // limit function log|x| on the half disk: ||.||^2 = pi int_0^1 r log(r)^2 dr = pi/4
  CHECK(rows[3].l2_norm == doctest::Approx(std::sqrt(std::acos(-1.0) / 4.0)).epsilon(2e-2));
}

TEST_CASE("norm identity sandwich") {
  const Polynomial2 z = Polynomial2::monomial(2, 1);
  double prev_gap = 1.0;
  double gap4 = 0.0, gap8 = 0.0;
  for (int d = 4; d <= 8; ++d) {
    const NormPair p = norm_identity_check(kRef, z, d, d);
    CHECK(p.duality <= p.extension + 1e-9);
    const double gap = (p.extension - p.duality) / p.extension;
    CHECK(gap <= prev_gap * 1.05 + 1e-12);
    prev_gap = gap;
    if (d == 4) gap4 = gap;
    if (d == 8) gap8 = gap;
  }
  CHECK(gap8 <= gap4);

  const NormPair zero = norm_identity_check(kRef, Polynomial2(2), 4, 4);
  CHECK(zero.duality == 0.0);
  CHECK(zero.extension == 0.0);

  const std::array<Point, 3> other{Point{0.2, 0.1}, Point{1.1, 0.3}, Point{0.4, 0.8}};
  const NormPair q = norm_identity_check(other, Polynomial2::monomial(1, 1) + Polynomial2::constant(0.3), 5, 6);
  CHECK(q.duality <= q.extension + 1e-9);
  CHECK(q.duality > 0.0);

  CHECK_THROWS_AS(norm_identity_check(kRef, z, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(norm_identity_check(kRef, z, 4, 3), std::invalid_argument);
  CHECK_THROWS_AS(norm_identity_check(kRef, Polynomial2::monomial(5, 0), 4, 4), std::invalid_argument);
}

TEST_CASE("weighted mollifier norm decays and sup-norm ratio is constant") {
  const MollifierFamily fam;
  const std::vector<double> eps = dyadic(2, 10);
  std::vector<double> w;
  for (double e : eps) w.push_back(weighted_mollifier_norm(fam, e));
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] < w[i - 1]);
  const double slope = std::log(w.front() / w.back()) / std::log(eps.front() / eps.back());
  CHECK(slope >= 0.45);

  for (double e : eps) CHECK(linf_over_scaled_derivative(e) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-10));
}
