// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "dpg/dpg_solver.hpp"

using namespace dpg;

namespace {

// x^3 + y^3 + xy: biharmonic, and its traces are reproduced exactly on meshes
// whose edges are horizontal, vertical or parallel to (1,1)
Problem cubic_problem() {
  return polynomial_problem(
      "cubic", [](Point x) { return x.x * x.x * x.x + x.y * x.y * x.y + x.x * x.y; },
      [](Point x) { return Point{3 * x.x * x.x + x.y, 3 * x.y * x.y + x.x}; },
      [](Point x) { return 6 * x.x + 6 * x.y; }, [](Point) { return 0.0; }, [] { return make_unit_square(2); });
}

// u = x^2 - 3 x y + 2 y^2 + x: every quadratic is reproduced on any mesh
Problem quadratic_problem() {
  return polynomial_problem(
      "quadratic", [](Point x) { return x.x * x.x - 3 * x.x * x.y + 2 * x.y * x.y + x.x; },
      [](Point x) { return Point{2 * x.x - 3 * x.y + 1, -3 * x.x + 4 * x.y}; }, [](Point) { return 6.0; },
      [](Point) { return 0.0; }, make_sector_domain);
}

double sparse_asymmetry(const Eigen::SparseMatrix<double>& a) {
  const Eigen::SparseMatrix<double> d = a - Eigen::SparseMatrix<double>(a.transpose());
  double m = 0.0, md = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  for (int k = 0; k < d.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it) md = std::max(md, std::abs(it.value()));
  return md / m;
}

const Formulation kVf1{Scheme::vf1, 0, 4};
const Formulation kVf2{Scheme::vf2, 0, 4};

}  // namespace

TEST_CASE("dof counting") {
  const Mesh m = make_unit_square(2);  // 9 vertices, 8 boundary, 8 triangles
  const DofCount c = count_dofs(m, kVf2);
  CHECK(c.field == 16);
  CHECK(c.total == 16 + 3 + 27);
  const DpgSystem sys(m, kVf2, smooth_problem());
  CHECK(sys.num_unknowns() == c.total);
  CHECK(sys.num_field_dofs() == c.field);
  CHECK(count_dofs(m, Formulation{Scheme::vf1, 1, 3}).field == 2 * 3 * 8);
}

TEST_CASE("zero data gives the zero solution") {
  for (const Formulation& f : {kVf1, kVf2})
    for (auto domain : {std::function<Mesh()>([] { return make_unit_square(3); }), std::function<Mesh()>(make_sector_domain)}) {
      const Problem p = zero_problem(domain);
      const Solution s = assemble_and_solve(p.make_domain(), f, p);
      CHECK(s.u.coeffs.cwiseAbs().maxCoeff() == 0.0);
      CHECK(s.sigma.coeffs.cwiseAbs().maxCoeff() == 0.0);
      CHECK(s.u_hat.cwiseAbs().maxCoeff() == 0.0);
      CHECK(s.sigma_hat.cwiseAbs().maxCoeff() == 0.0);
      const Indicators ind = error_indicators(s, p);
      CHECK(ind.total == 0.0);
    }
}

TEST_CASE("smooth problem on the n=2 mesh: finite errors and bit-identical reruns") {
  const Problem p = smooth_problem();
  const Mesh m = make_unit_square(2);
  StudyOptions quiet;
  quiet.timing = false;
  const StudyRecord a = solve_level(m, kVf2, p, 0, quiet);
  const StudyRecord b = solve_level(m, kVf2, p, 0, quiet);
  CHECK(std::isfinite(a.err_u));
  CHECK(a.err_u > 0.0);
  CHECK(a.err_sigma > 0.0);
  CHECK(a.eta > 0.0);
  CHECK(a.solve_seconds == 0.0);
  CHECK(a.err_u == b.err_u);
  CHECK(a.err_sigma == b.err_sigma);
  CHECK(a.eta == b.eta);
}

TEST_CASE("exactly representable solutions are reproduced") {
  const Formulation p3{Scheme::vf2, 3, 5};
  for (Scheme s : {Scheme::vf1, Scheme::vf2}) {
    Formulation f = p3;
    f.scheme = s;
    for (int n : {1, 2, 4}) {
      const Problem pr = cubic_problem();
      const Solution sol = assemble_and_solve(make_unit_square(n), f, pr);
      const FieldErrors e = l2_errors(sol, pr);
      CHECK(error_indicators(sol, pr).total <= 1e-7);
      CHECK(e.u <= 1e-8);
      CHECK(e.sigma <= 1e-8);
    }
    Mesh m = make_sector_domain();
    for (int l = 0; l < 3; ++l) {
      const Problem pr = quadratic_problem();
      const Solution sol = assemble_and_solve(m, f, pr);
      const FieldErrors e = l2_errors(sol, pr);
      CHECK(error_indicators(sol, pr).total <= 1e-7);
      CHECK(e.u <= 1e-8);
      CHECK(e.sigma <= 1e-8);
      m = refine_nvb(m, std::vector<int>{0, static_cast<int>(m.num_triangles()) - 1});
    }
  }
}

TEST_CASE("estimator: local sum, global residual and the error indicators agree") {
  const Problem p = smooth_problem();
  for (const Formulation& f : {kVf1, kVf2}) {
    const Mesh m = refine_nvb(make_unit_square(3), std::vector<int>{0, 5, 9});
    const DpgSystem sys(m, f, p);
    const Eigen::VectorXd x = sys.solve();
    const Indicators ind = sys.indicators(x);
    double sum = 0.0;
    for (double e : ind.local) {
      CHECK(e >= 0.0);
      sum += e * e;
    }
    CHECK(std::abs(sum - ind.total * ind.total) <= 1e-12 * sum);
    CHECK(std::abs(sys.global_residual_norm(x) - ind.total) <= 1e-10 * ind.total);
    const Indicators again = error_indicators(sys.make_solution(x), p);
    CHECK(std::abs(again.total - ind.total) <= 1e-10 * ind.total);
  }
}

TEST_CASE("minimum residual: random perturbations never decrease eta") {
  const Problem p = smooth_problem();
  std::mt19937 gen(31);
  std::normal_distribution<double> g;
  for (const Formulation& f : {kVf1, kVf2}) {
    const DpgSystem sys(make_unit_square(3), f, p);
    const Eigen::VectorXd x = sys.solve();
    const double eta = sys.indicators(x).total;
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd w(x.size());
      for (auto& v : w) v = g(gen);
      w.normalize();
      for (double mag : {1e-6, 1e-3, 1.0}) CHECK(eta <= sys.indicators(x + mag * w).total + 1e-9);
    }
  }
}

TEST_CASE("normal equations: symmetric matrix, orthogonal residual") {
  for (const Formulation& f : {kVf1, kVf2}) {
    const Problem p = singular_problem();
    const DpgSystem sys(refine_uniform(refine_uniform(p.make_domain())), f, p);
    const DpgSystem::Global g = sys.assemble();
    CHECK(sparse_asymmetry(g.matrix) <= 1e-12);
    const Eigen::VectorXd x = sys.solve();
    CHECK(sys.normal_residual(x).norm() <= 1e-8 * g.rhs.norm());
    CHECK((g.matrix * x - g.rhs).norm() <= 1e-8 * g.rhs.norm());
  }
}

TEST_CASE("both schemes approximate the same solution") {
  const Problem p = smooth_problem();
  StudyOptions quiet;
  quiet.timing = false;
  for (int n : {2, 4, 8}) {
    const Mesh m = make_unit_square(n);
    const StudyRecord r1 = solve_level(m, kVf1, p, 0, quiet);
    const StudyRecord r2 = solve_level(m, kVf2, p, 0, quiet);
    CHECK(std::abs(r1.err_u - r2.err_u) / r1.err_u <= 0.5);
  }
}

TEST_CASE("solution layout") {
  const Problem p = smooth_problem();
  const Mesh m = make_unit_square(2);
  const Solution s = assemble_and_solve(m, kVf2, p);
  CHECK(s.u.coeffs.rows() == 1);
  CHECK(s.u.coeffs.cols() == 8);
  CHECK(s.u_hat.size() == 27);
  CHECK(s.sigma_hat.size() == 27);
  CHECK(s.ndof_total == count_dofs(m, kVf2).total);
  CHECK(s.ndof_field == 16);
  // homogeneous data: boundary u_hat dofs stay zero
  for (std::size_t v = 0; v < m.num_vertices(); ++v)
    if (m.is_boundary_vertex(static_cast<int>(v)))
      for (int c = 0; c < 3; ++c) CHECK(s.u_hat[TraceSpace::dof(static_cast<int>(v), c)] == 0.0);
  const auto corners = m.corners(0);
  const Point mid{(corners[0].x + corners[1].x + corners[2].x) / 3, (corners[0].y + corners[1].y + corners[2].y) / 3};
  CHECK(std::isfinite(s.u.eval(m, 0, mid)));
}

TEST_CASE("adaptive loop: theta = 1 reproduces uniform refinement") {
  const Problem p = smooth_problem();
  StudyOptions quiet;
  quiet.timing = false;
  std::vector<Mesh> meshes;
  const auto ad = adaptive_loop(make_unit_square(2), kVf2, p, 1.0, 3000, quiet, &meshes);
  REQUIRE(ad.size() >= 3);
  std::vector<Mesh> uni{make_unit_square(2)};
  while (uni.size() < ad.size()) uni.push_back(refine_uniform(uni.back()));
  const auto un = run_mesh_sequence(uni, kVf2, p, quiet);
  for (std::size_t i = 0; i < ad.size(); ++i) {
    CHECK(ad[i].ndof_total == un[i].ndof_total);
    CHECK(ad[i].eta == doctest::Approx(un[i].eta).epsilon(1e-12));
    CHECK(ad[i].level == static_cast<int>(i));
    CHECK(ad[i].ndof_total <= 3000);
  }
  CHECK(meshes.size() == ad.size());
  // the next refinement would have exceeded the budget
  CHECK(count_dofs(refine_uniform(meshes.back()), kVf2).total > 3000);
}

TEST_CASE("adaptive loop: smooth problem, eta decreases") {
  StudyOptions quiet;
  quiet.timing = false;
  const auto r = adaptive_loop(make_unit_square(2), kVf2, smooth_problem(), 0.5, 4000, quiet);
  REQUIRE(r.size() >= 5);
  int down = 0;
  for (std::size_t i = 1; i < r.size(); ++i) down += r[i].eta < r[i - 1].eta;
  CHECK(down >= 0.9 * static_cast<double>(r.size() - 1));
}

TEST_CASE("adaptive loop: singular problem refines towards the corner") {
  const Problem p = singular_problem();
  StudyOptions quiet;
  quiet.timing = false;
  std::vector<Mesh> meshes;
  const auto r = adaptive_loop(p.make_domain(), kVf2, p, 0.5, 6000, quiet, &meshes);
  REQUIRE(meshes.size() >= 4);
  auto corner_h = [](const Mesh& m) {
    double h = 0.0;
    for (std::size_t t = 0; t < m.num_triangles(); ++t)
      for (int v : m.triangle(static_cast<int>(t)).v)
        if (norm(m.vertex(v)) == 0.0) h = std::max(h, m.diameter(static_cast<int>(t)));
    return h;
  };
  const double corner_ratio = corner_h(meshes.back()) / corner_h(meshes.front());
  const double global_ratio = meshes.back().h_max() / meshes.front().h_max();
  CHECK(corner_ratio < global_ratio);
}

TEST_CASE("error paths") {
  const Problem p = smooth_problem();
  const Mesh m = make_unit_square(2);
  CHECK_THROWS_AS(adaptive_loop(m, kVf2, p, 0.0, 1000), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_loop(m, kVf2, p, 1.5, 1000), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_loop(m, kVf2, p, 0.5, 10), std::invalid_argument);

  const Solution s = assemble_and_solve(m, kVf2, p);
  Solution tampered = s;
  tampered.ndof_total += 1;
  CHECK_THROWS_AS(error_indicators(tampered, p), std::invalid_argument);

  Problem broken = singular_problem();
  broken.u_exact = nullptr;
  CHECK_THROWS_AS(DpgSystem(broken.make_domain(), kVf2, broken), std::invalid_argument);

  CHECK_THROWS_AS(DpgSystem(m, Formulation{Scheme::vf2, 2, 3}, p), std::invalid_argument);

  const DpgSystem sys(m, kVf2, p);
  CHECK_THROWS_AS(sys.make_solution(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}
