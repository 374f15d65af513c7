// SPDX-License-Identifier: Apache-2.0

#include "dpg/trace_lab.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Dense>

#include "dpg/basis.hpp"
#include "dpg/linsolve.hpp"
#include "dpg/problems.hpp"
#include "dpg/quadrature.hpp"

namespace dpg {

namespace {

constexpr int kPanels = 64;
constexpr int kPanelPoints = 12;

/// Composite Gauss rule on [a, b] with kPanels equal panels.
template <class F>
double panel_integral(F&& f, double a, double b) {
  static const LineRule rule = gauss_legendre(kPanelPoints);
  const double h = (b - a) / kPanels;
  double sum = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double x0 = a + p * h;
    for (std::size_t q = 0; q < rule.points.size(); ++q) sum += rule.weights[q] * h * f(x0 + rule.points[q] * h);
  }
  return sum;
}

double bump(double s) { return s * s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

}  // namespace

double mollifier_constant() {
  using boost::math::quadrature::gauss_kronrod;
  const double integral = gauss_kronrod<double, 61>::integrate(bump, 0.0, 1.0, 15, 1e-12);
  return 1.0 / (2.0 * integral);
}

MollifierFamily::MollifierFamily() : c_(mollifier_constant()) {}

double MollifierFamily::phi(double eps, double t) const {
  const double d = eps * eps - t * t;
  if (d <= 0.0) return 0.0;
  return c_ / eps * std::exp(-eps * eps / d);
}

double MollifierFamily::dphi(double eps, double t) const {
  const double d = eps * eps - t * t;
  if (d <= 0.0) return 0.0;
  return phi(eps, t) * (-2.0 * eps * eps * t / (d * d));
}

double MollifierFamily::v(double eps, Point x) const { return -(x.x + x.y) * phi(eps, norm(x)); }

Point MollifierFamily::grad_v(double eps, Point x) const {
  const double r = norm(x);
  const double d = eps * eps - r * r;
  if (d <= 0.0) return {0.0, 0.0};
  const double p = phi(eps, r);
  // phi'(r) / r stays finite at the origin
  const double dphi_over_r = p * (-2.0 * eps * eps / (d * d));
  const double s = x.x + x.y;
  return {-p - s * dphi_over_r * x.x, -p - s * dphi_over_r * x.y};
}

double mollifier_mass(const MollifierFamily& fam, double eps) {
  return panel_integral([&](double t) { return fam.phi(eps, t); }, 0.0, eps);
}

double pair_trace_veps(const MollifierFamily& fam, const Polynomial2& z, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("pair_trace_veps: eps must lie in (0, 1/2)");
  // Only the two legs through the origin meet the support; the hypotenuse is
  // at distance 1/sqrt(2) > eps.
  struct Leg {
    Point dir;
    Point normal;
  };
  const Leg legs[2] = {{{1.0, 0.0}, {0.0, -1.0}}, {{0.0, 1.0}, {-1.0, 0.0}}};
  double sum = 0.0;
  for (const Leg& leg : legs) {
    sum += panel_integral(
        [&](double t) {
          const Point x = t * leg.dir;
          const Point gv = fam.grad_v(eps, x);
          const Point gz = z.gradient(x);
          const double dn_v = gv.x * leg.normal.x + gv.y * leg.normal.y;
          const double dn_z = gz.x * leg.normal.x + gz.y * leg.normal.y;
          return dn_v * z(x) - fam.v(eps, x) * dn_z;
        },
        0.0, eps);
  }
  return sum;
}

double h2_norm_reference(const Polynomial2& z) {
  const QuadRule rule = triangle_quadrature(std::max(2 * z.degree(), 1));
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = rule.points[q];
    const double v = z(x);
    const Point g = z.gradient(x);
    const Sym2 h = z.hessian(x);
    sum += rule.weights[q] * (v * v + g.x * g.x + g.y * g.y + h.frobenius(h));
  }
  return std::sqrt(sum);
}

std::vector<Polynomial2> monomials_up_to(int degree) {
  std::vector<Polynomial2> out;
  for (int d = 0; d <= degree; ++d)
    for (int j = 0; j <= d; ++j) out.push_back(Polynomial2::monomial(d - j, j));
  return out;
}

DiracStudy dirac_convergence_study(const std::vector<double>& eps_list, const std::vector<Polynomial2>& z_list) {
  const MollifierFamily fam;
  DiracStudy study;
  study.eps = eps_list;
  std::vector<double> norms;
  for (const Polynomial2& z : z_list) norms.push_back(h2_norm_reference(z));
  for (double eps : eps_list) {
    double worst = 0.0;
    for (std::size_t i = 0; i < z_list.size(); ++i) {
      if (norms[i] == 0.0) continue;
      const double e = std::abs(pair_trace_veps(fam, z_list[i], eps) - z_list[i]({0.0, 0.0})) / norms[i];
      worst = std::max(worst, e);
    }
    study.error.push_back(worst);
  }
  study.slope = std::numeric_limits<double>::quiet_NaN();
  bool positive = eps_list.size() >= 2;
  for (double e : study.error) positive = positive && e > 0.0;
  if (positive) study.slope = log_log_slope(study.eps, study.error);
  return study;
}

std::vector<UnboundedRow> unboundedness_demo(const std::vector<int>& n_list) {
  // Polar rule on the half disk, graded geometrically towards the origin where
  // the source point approaches the boundary.
  constexpr int kRadialPanels = 50;
  constexpr int kAngularPanels = 16;
  const LineRule g = gauss_legendre(16);
  std::vector<UnboundedRow> rows;
  for (int n : n_list) {
    if (n < 1) throw std::invalid_argument("unboundedness_demo: n must be positive");
    const Point src{0.0, -1.0 / n};
    double sum = 0.0;
    for (int k = 0; k < kRadialPanels; ++k) {
      const double r1 = std::ldexp(1.0, -k), r0 = 0.5 * r1;
      for (std::size_t qr = 0; qr < g.points.size(); ++qr) {
        const double r = r0 + g.points[qr] * (r1 - r0);
        const double wr = g.weights[qr] * (r1 - r0) * r;
        for (int a = 0; a < kAngularPanels; ++a) {
          const double t0 = std::numbers::pi * a / kAngularPanels, dt = std::numbers::pi / kAngularPanels;
          for (std::size_t qt = 0; qt < g.points.size(); ++qt) {
            const double th = t0 + g.points[qt] * dt;
            const double v = std::log(norm(Point{r * std::cos(th), r * std::sin(th)} - src));
            sum += wr * g.weights[qt] * dt * v * v;
          }
        }
      }
    }
    rows.push_back({n, std::log(norm(Point{0.0, 0.0} - src)), std::sqrt(sum)});
  }
  return rows;
}

namespace {

Polynomial2 affine(double c0, double cx, double cy) {
  Polynomial2 p(1);
  p.set_coeff(0, 0, c0);
  p.set_coeff(1, 0, cx);
  p.set_coeff(0, 1, cy);
  return p;
}

/// Barycentric coordinates of the triangle as affine polynomials.
std::array<Polynomial2, 3> barycentric(const std::array<Point, 3>& p) {
  const double det = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y);
  std::array<Polynomial2, 3> lam;
  for (int i = 0; i < 3; ++i) {
    const Point a = p[(i + 1) % 3], b = p[(i + 2) % 3];
    // lambda_i(x) = cross(b - a, x - a) / det
    lam[i] = affine((a.y * (b.x - a.x) - a.x * (b.y - a.y)) / det, (b.y - a.y) / det, -(b.x - a.x) / det);
  }
  return lam;
}

}  // namespace

NormPair norm_identity_check(const std::array<Point, 3>& element, const Polynomial2& z, int dual_degree,
                             int extension_degree) {
  if (dual_degree < 4 || extension_degree < 4)
    throw std::invalid_argument("norm_identity_check: degrees must be at least 4");
  if (z.degree() > extension_degree)
    throw std::invalid_argument("norm_identity_check: z has higher degree than the extension space");
  const ElementBasis dual(element, dual_degree);
  const QuadRule rule = triangle_quadrature(2 * std::max(dual_degree, extension_degree) + 2);
  const double jdet = 2.0 * dual.area();
  const Polynomial2 lap_z = z.laplacian();

  const int nd = dual.size();
  Eigen::VectorXd ell = Eigen::VectorXd::Zero(nd);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nd, nd);
  std::vector<Point> xs;
  std::vector<double> ws;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = dual.to_physical(rule.points[q]);
    const double w = rule.weights[q] * jdet;
    xs.push_back(x);
    ws.push_back(w);
    const BasisValues b = dual.eval(x);
    const Eigen::VectorXd lap = b.hess.col(0) + b.hess.col(2);
    ell += w * (lap * z(x) - b.value * lap_z(x));
    gram.noalias() += w * (b.value * b.value.transpose() + lap * lap.transpose());
  }
  NormPair out;
  out.duality = std::sqrt(std::max(0.0, ell.dot(DenseSpdFactor(gram).solve(ell))));

  auto delta_inner = [&](const Polynomial2& a, const Polynomial2& b) {
    const Polynomial2 la = a.laplacian(), lb = b.laplacian();
    double s = 0.0;
    for (std::size_t q = 0; q < xs.size(); ++q) s += ws[q] * (a(xs[q]) * b(xs[q]) + la(xs[q]) * lb(xs[q]));
    return s;
  };

  const int qdeg = extension_degree - 6;
  if (qdeg < 0) {
    out.extension = std::sqrt(delta_inner(z, z));
    return out;
  }
  // b^2 q vanishes with its normal derivative on the boundary
  const auto lam = barycentric(element);
  const Polynomial2 bubble = lam[0] * lam[1] * lam[2];
  const Polynomial2 bubble2 = bubble * bubble;
  const Point c = (1.0 / 3.0) * (element[0] + element[1] + element[2]);
  const double h = std::max({norm(element[1] - element[0]), norm(element[2] - element[1]), norm(element[0] - element[2])});
  const Polynomial2 sx = affine(-c.x / h, 1.0 / h, 0.0), sy = affine(-c.y / h, 0.0, 1.0 / h);
  std::vector<Polynomial2> psi;
  for (int d = 0; d <= qdeg; ++d) {
    for (int j = 0; j <= d; ++j) {
      Polynomial2 m = Polynomial2::constant(1.0);
      for (int i = 0; i < d - j; ++i) m = m * sx;
      for (int i = 0; i < j; ++i) m = m * sy;
      psi.push_back(bubble2 * m);
    }
  }
  const int np = static_cast<int>(psi.size());
  Eigen::MatrixXd m(np, np);
  Eigen::VectorXd r(np);
  for (int i = 0; i < np; ++i) {
    r(i) = delta_inner(z, psi[i]);
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = delta_inner(psi[i], psi[j]);
  }
  const Eigen::VectorXd coef = -DenseSpdFactor(m).solve(r);
  Polynomial2 y = z;
  for (int i = 0; i < np; ++i) y += coef(i) * psi[i];
  out.extension = std::sqrt(delta_inner(y, y));
  return out;
}

double weighted_mollifier_norm(const MollifierFamily& fam, double eps) {
  const double s = panel_integral(
      [&](double t) {
        const double v = t * fam.phi(eps, t);
        return v * v;
      },
      0.0, eps);
  return std::sqrt(s);
}

double linf_over_scaled_derivative(double eps) {
  const LineRule g = gauss_legendre(4);
  double sup = 0.0, d2 = 0.0;
  for (std::size_t q = 0; q < g.points.size(); ++q) {
    const double t = g.points[q] * eps;
    d2 += g.weights[q] * eps * (2.0 * t) * (2.0 * t);
  }
  sup = eps * eps;  // t^2 is increasing on (0, eps)
  return sup / (std::sqrt(eps) * std::sqrt(d2));
}

}  // namespace dpg
