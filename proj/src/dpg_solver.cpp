// SPDX-License-Identifier: Apache-2.0

#include "dpg/dpg_solver.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCholesky>

namespace dpg {

double BrokenField::eval(const Mesh& mesh, int t, Point x) const {
  const ElementBasis basis(mesh.corners(t), degree);
  return eval_expansion(basis, coeffs.col(t), x);
}

DofCount count_dofs(const Mesh& mesh, const Formulation& form) {
  int nboundary = 0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) nboundary += mesh.is_boundary_vertex(static_cast<int>(v));
  const int nv = static_cast<int>(mesh.num_vertices());
  DofCount c;
  c.field = 2 * static_cast<int>(mesh.num_triangles()) * poly_dim(form.field_degree);
  c.total = c.field + 3 * (nv - nboundary) + 3 * nv;
  return c;
}

namespace {

struct LocalMatrices {
  Eigen::MatrixXd g, b;
  Eigen::VectorXd l;
};

LocalMatrices local_matrices(const Mesh& mesh, int t, const Formulation& form, const Problem& problem) {
  const ElementSpaces spaces = ElementSpaces::make(mesh.corners(t), form);
  return {local_gram(spaces, form), local_b(spaces, form), local_load(spaces, form, problem.f)};
}

}  // namespace

DpgSystem::DpgSystem(const Mesh& mesh, const Formulation& form, const Problem& problem)
    : mesh_(mesh),
      form_(form),
      problem_(problem),
      layout_(LocalLayout::of(form)),
      u_space_(apply_clamped_bc(build_trace_space(mesh_))) {
  form_.validate();
  const int ntri = static_cast<int>(mesh_.num_triangles());
  const int nf = layout_.nfield;
  nfield_total_ = 2 * ntri * nf;
  nuhat_free_ = u_space_.num_free();
  nunknown_ = nfield_total_ + nuhat_free_ + u_space_.num_dofs();

  if (problem_.boundary == BoundaryMode::interpolated) {
    if (!problem_.u_exact || !problem_.grad_u_exact)
      throw std::invalid_argument("DpgSystem: interpolated boundary data needs u_exact and grad_u_exact");
    boundary_values_ = interpolate_boundary_data(u_space_, problem_.u_exact, problem_.grad_u_exact);
  } else {
    boundary_values_ = TraceCoeffs::Zero(u_space_.num_dofs());
  }

  locals_.resize(ntri);
  std::vector<std::string> failures(ntri);
#pragma omp parallel for schedule(dynamic, 16)
  for (int t = 0; t < ntri; ++t) {
    try {
      const ElementSpaces spaces = ElementSpaces::make(mesh_.corners(t), form_);
      const Eigen::MatrixXd root = local_gram_root(spaces, form_);
      const Eigen::VectorXd diag = root.diagonal().cwiseAbs();
      if (!(diag.minCoeff() > 1e-13 * diag.maxCoeff()))
        throw NumericalError("singular test Gram matrix");
      const auto lower = root.transpose().triangularView<Eigen::Lower>();
      Local& loc = locals_[t];
      loc.w = lower.solve(local_b(spaces, form_));
      loc.wl = lower.solve(local_load(spaces, form_, problem_.f));
      loc.map.assign(layout_.cols, -1);
      loc.fixed = Eigen::VectorXd::Zero(layout_.cols);
      for (int j = 0; j < nf; ++j) {
        loc.map[layout_.u + j] = t * nf + j;
        loc.map[layout_.sigma + j] = ntri * nf + t * nf + j;
      }
      const auto& tri = mesh_.triangle(t);
      for (int a = 0; a < 3; ++a) {
        for (int c = 0; c < 3; ++c) {
          const int dof = TraceSpace::dof(tri.v[a], c);
          const int col = layout_.u_hat + 3 * a + c;
          const int free = u_space_.free_index(dof);
          if (free >= 0) {
            loc.map[col] = nfield_total_ + free;
          } else {
            loc.fixed(col) = boundary_values_(dof);
          }
          loc.map[layout_.sigma_hat + 3 * a + c] = nfield_total_ + nuhat_free_ + dof;
        }
      }
    } catch (const std::exception& e) {
      failures[t] = e.what();
    }
  }
  for (int t = 0; t < ntri; ++t)
    if (!failures[t].empty()) throw NumericalError("element " + std::to_string(t) + ": " + failures[t]);
}

DpgSystem::Global DpgSystem::assemble() const {
  SparseSymBuilder builder(nunknown_);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nunknown_);
  for (const Local& loc : locals_) {
    Eigen::MatrixXd s = loc.w.transpose() * loc.w;
    s = 0.5 * (s + s.transpose());
    const Eigen::VectorXd g = loc.w.transpose() * loc.wl - s * loc.fixed;
    const int n = static_cast<int>(loc.map.size());
    for (int i = 0; i < n; ++i) {
      const int gi = loc.map[i];
      if (gi < 0) continue;
      rhs(gi) += g(i);
      for (int j = 0; j < n; ++j) {
        const int gj = loc.map[j];
        if (gj >= 0) builder.add(gi, gj, s(i, j));
      }
    }
  }
  return {builder.compress(), rhs};
}

Eigen::VectorXd DpgSystem::solve(SparseSolveInfo* info) const {
  const Global g = assemble();
  return sparse_spd_solve(g.matrix, g.rhs, info);
}

Eigen::VectorXd DpgSystem::local_vector(int t, const Eigen::VectorXd& x) const {
  const Local& loc = locals_[t];
  Eigen::VectorXd xt = loc.fixed;
  for (std::size_t i = 0; i < loc.map.size(); ++i)
    if (loc.map[i] >= 0) xt(static_cast<Eigen::Index>(i)) = x(loc.map[i]);
  return xt;
}

Solution DpgSystem::make_solution(const Eigen::VectorXd& x) const {
  if (x.size() != nunknown_) throw std::invalid_argument("make_solution: unknown vector has wrong length");
  const int ntri = static_cast<int>(mesh_.num_triangles());
  const int nf = layout_.nfield;
  Solution s;
  s.mesh = mesh_;
  s.formulation = form_;
  s.u.degree = s.sigma.degree = form_.field_degree;
  s.u.coeffs = Eigen::Map<const Eigen::MatrixXd>(x.data(), nf, ntri);
  s.sigma.coeffs = Eigen::Map<const Eigen::MatrixXd>(x.data() + ntri * nf, nf, ntri);
  const int ndof = u_space_.num_dofs();
  s.u_hat = boundary_values_;
  for (int d = 0; d < ndof; ++d) {
    const int free = u_space_.free_index(d);
    if (free >= 0) s.u_hat(d) = x(nfield_total_ + free);
  }
  s.sigma_hat = x.segment(nfield_total_ + nuhat_free_, ndof);
  s.ndof_field = nfield_total_;
  s.ndof_total = nunknown_;
  return s;
}

Indicators DpgSystem::indicators(const Eigen::VectorXd& x) const {
  const int ntri = static_cast<int>(mesh_.num_triangles());
  Indicators ind;
  ind.local.resize(ntri);
  double sum = 0.0;
  for (int t = 0; t < ntri; ++t) {
    const Local& loc = locals_[t];
    const double e2 = (loc.wl - loc.w * local_vector(t, x)).squaredNorm();
    ind.local[t] = std::sqrt(e2);
    sum += e2;
  }
  ind.total = std::sqrt(sum);
  return ind;
}

Eigen::VectorXd DpgSystem::normal_residual(const Eigen::VectorXd& x) const {
  Eigen::VectorXd res = Eigen::VectorXd::Zero(nunknown_);
  for (int t = 0; t < static_cast<int>(locals_.size()); ++t) {
    const Local& loc = locals_[t];
    const Eigen::VectorXd r = loc.w.transpose() * (loc.wl - loc.w * local_vector(t, x));
    for (std::size_t i = 0; i < loc.map.size(); ++i)
      if (loc.map[i] >= 0) res(loc.map[i]) += r(static_cast<Eigen::Index>(i));
  }
  return res;
}

double DpgSystem::global_residual_norm(const Eigen::VectorXd& x) const {
  const int ntri = static_cast<int>(mesh_.num_triangles());
  const int rows = layout_.rows;
  const int nrow = ntri * rows;
  std::vector<Eigen::Triplet<double>> bt, gt;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(nrow);
  for (int t = 0; t < ntri; ++t) {
    const LocalMatrices m = local_matrices(mesh_, t, form_, problem_);
    const Local& loc = locals_[t];
    const int r0 = t * rows;
    load.segment(r0, rows) = m.l - m.b * loc.fixed;
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < layout_.cols; ++j)
        if (loc.map[j] >= 0 && m.b(i, j) != 0.0) bt.emplace_back(r0 + i, loc.map[j], m.b(i, j));
      for (int j = 0; j < rows; ++j) gt.emplace_back(r0 + i, r0 + j, m.g(i, j));
    }
  }
  Eigen::SparseMatrix<double> b(nrow, nunknown_), g(nrow, nrow);
  b.setFromTriplets(bt.begin(), bt.end());
  g.setFromTriplets(gt.begin(), gt.end());
  const Eigen::VectorXd r = load - b * x;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(g);
  if (llt.info() != Eigen::Success) throw NumericalError("global_residual_norm: Gram factorization failed");
  const Eigen::VectorXd y = llt.solve(r);
  return std::sqrt(std::max(0.0, r.dot(y)));
}

Solution assemble_and_solve(const Mesh& mesh, const Formulation& form, const Problem& problem) {
  const DpgSystem system(mesh, form, problem);
  return system.make_solution(system.solve());
}

namespace {

Eigen::VectorXd unknowns_of(const DpgSystem& system, const Solution& s) {
  const int ntri = static_cast<int>(s.mesh.num_triangles());
  const int nf = static_cast<int>(s.u.coeffs.rows());
  const TraceSpace space = apply_clamped_bc(build_trace_space(system.mesh()));
  Eigen::VectorXd x(system.num_unknowns());
  x.head(ntri * nf) = Eigen::Map<const Eigen::VectorXd>(s.u.coeffs.data(), ntri * nf);
  x.segment(ntri * nf, ntri * nf) = Eigen::Map<const Eigen::VectorXd>(s.sigma.coeffs.data(), ntri * nf);
  const int nfield = 2 * ntri * nf;
  for (int d = 0; d < space.num_dofs(); ++d)
    if (space.free_index(d) >= 0) x(nfield + space.free_index(d)) = s.u_hat(d);
  x.tail(space.num_dofs()) = s.sigma_hat;
  return x;
}

}  // namespace

Indicators error_indicators(const Solution& solution, const Problem& problem) {
  const DpgSystem system(solution.mesh, solution.formulation, problem);
  if (system.num_unknowns() != solution.ndof_total)
    throw std::invalid_argument("error_indicators: solution does not belong to this mesh");
  return system.indicators(unknowns_of(system, solution));
}

StudyRecord solve_level(const Mesh& mesh, const Formulation& form, const Problem& problem, int level,
                        const StudyOptions& opts, Indicators* out) {
  const auto start = std::chrono::steady_clock::now();
  const DpgSystem system(mesh, form, problem);
  const Eigen::VectorXd x = system.solve();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Solution sol = system.make_solution(x);
  sol.solve_seconds = opts.timing ? seconds : 0.0;
  const Indicators ind = system.indicators(x);

  StudyRecord rec;
  rec.level = level;
  rec.ndof_total = sol.ndof_total;
  rec.ndof_field = sol.ndof_field;
  rec.h_max = mesh.h_max();
  rec.eta = ind.total;
  if (problem.has_exact()) {
    const FieldErrors err = l2_errors(sol, problem);
    rec.err_u = err.u;
    rec.err_sigma = err.sigma;
  }
  rec.solve_seconds = sol.solve_seconds;
  if (out) *out = ind;
  return rec;
}

namespace {

[[noreturn]] void rethrow_with_level(int level) {
  try {
    throw;
  } catch (const NumericalError& e) {
    throw NumericalError("level " + std::to_string(level) + ": " + e.what());
  }
}

}  // namespace

std::vector<StudyRecord> run_mesh_sequence(const std::vector<Mesh>& meshes, const Formulation& form,
                                           const Problem& problem, const StudyOptions& opts) {
  std::vector<StudyRecord> records;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const int level = static_cast<int>(i);
    try {
      records.push_back(solve_level(meshes[i], form, problem, level, opts));
    } catch (...) {
      rethrow_with_level(level);
    }
  }
  return records;
}

std::vector<StudyRecord> adaptive_loop(const Mesh& initial, const Formulation& form, const Problem& problem,
                                       double theta, int max_dofs, const StudyOptions& opts,
                                       std::vector<Mesh>* meshes) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("adaptive_loop: theta must lie in (0, 1]");
  if (count_dofs(initial, form).total > max_dofs)
    throw std::invalid_argument("adaptive_loop: max_dofs is below the initial number of unknowns");
  std::vector<StudyRecord> records;
  Mesh mesh = initial;
  for (int level = 0;; ++level) {
    Indicators ind;
    try {
      records.push_back(solve_level(mesh, form, problem, level, opts, &ind));
    } catch (...) {
      rethrow_with_level(level);
    }
    if (meshes) meshes->push_back(mesh);
    const MarkSet marked = doerfler_mark(ind.local, theta);
    if (marked.empty()) break;
    Mesh next = refine_nvb(mesh, marked);
    if (count_dofs(next, form).total > max_dofs) break;
    mesh = std::move(next);
  }
  return records;
}

}  // namespace dpg
