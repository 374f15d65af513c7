// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dpg/forms.hpp"
#include "dpg/linsolve.hpp"
#include "dpg/mesh.hpp"
#include "dpg/problems.hpp"
#include "dpg/trace_space.hpp"

namespace dpg {

/// Element-wise polynomial coefficients in the orthonormal element basis;
/// column t belongs to triangle t.
struct BrokenField {
  int degree = 0;
  Eigen::MatrixXd coeffs;

  double eval(const Mesh& mesh, int t, Point x) const;
};

struct Solution {
  Mesh mesh;
  Formulation formulation;
  BrokenField u;
  BrokenField sigma;
  TraceCoeffs u_hat;      // all 3 V dofs, boundary values included
  TraceCoeffs sigma_hat;
  int ndof_field = 0;
  int ndof_total = 0;
  double solve_seconds = 0.0;
};

struct Indicators {
  std::vector<double> local;  // eta(T)
  double total = 0.0;
};

struct DofCount {
  int field = 0;
  int total = 0;
};

/// Unknowns of the global system on this mesh: both fields, the free u_hat
/// dofs and every sigma_hat dof.
DofCount count_dofs(const Mesh& mesh, const Formulation& form);

/// Global DPG system built from per-element Schur complements.
///
/// Unknown order: [u (element-major) | sigma | free u_hat | sigma_hat].
/// Constrained u_hat dofs carry the boundary data and are eliminated.
class DpgSystem {
 public:
  DpgSystem(const Mesh& mesh, const Formulation& form, const Problem& problem);
  // the trace space points into mesh_
  DpgSystem(const DpgSystem&) = delete;
  DpgSystem& operator=(const DpgSystem&) = delete;

  const Mesh& mesh() const { return mesh_; }
  const Formulation& formulation() const { return form_; }
  int num_unknowns() const { return nunknown_; }
  int num_field_dofs() const { return nfield_total_; }

  struct Global {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
  };
  /// Assembled normal equations A x = rhs in a fixed element order.
  Global assemble() const;

  Eigen::VectorXd solve(SparseSolveInfo* info = nullptr) const;
  Solution make_solution(const Eigen::VectorXd& x) const;

  /// Local residual norms eta(T) of the unknown vector x.
  Indicators indicators(const Eigen::VectorXd& x) const;

  /// Residual norm sqrt(r^T G^-1 r) from a globally assembled B and
  /// block-diagonal G, solved with a sparse factorization.
  double global_residual_norm(const Eigen::VectorXd& x) const;

  /// B^T G^-1 (l - B x) over the unknowns, accumulated element by element.
  Eigen::VectorXd normal_residual(const Eigen::VectorXd& x) const;

  /// Element vector [u | sigma | u_hat (9) | sigma_hat (9)] of triangle t.
  Eigen::VectorXd local_vector(int t, const Eigen::VectorXd& x) const;

 private:
  struct Local {
    Eigen::MatrixXd w;   // R^-T B with G = R^T R
    Eigen::VectorXd wl;  // R^-T l
    std::vector<int> map;  // column -> unknown, or -1 when constrained
    Eigen::VectorXd fixed;  // prescribed values of constrained columns
  };

  Mesh mesh_;
  Formulation form_;
  Problem problem_;
  LocalLayout layout_;
  TraceSpace u_space_;
  TraceCoeffs boundary_values_;
  int nfield_total_ = 0;
  int nuhat_free_ = 0;
  int nunknown_ = 0;
  std::vector<Local> locals_;
};

Solution assemble_and_solve(const Mesh& mesh, const Formulation& form, const Problem& problem);

Indicators error_indicators(const Solution& solution, const Problem& problem);

struct StudyOptions {
  bool timing = true;  // record wall time of assembly and solve; 0 otherwise
};

/// Solves on one mesh and fills a record; indicators returned through `out`.
StudyRecord solve_level(const Mesh& mesh, const Formulation& form, const Problem& problem, int level,
                        const StudyOptions& opts = {}, Indicators* out = nullptr);

/// Solve on each mesh of a prescribed sequence.
std::vector<StudyRecord> run_mesh_sequence(const std::vector<Mesh>& meshes, const Formulation& form,
                                           const Problem& problem, const StudyOptions& opts = {});

/// Solve, estimate, mark (Doerfler), refine, while the next mesh stays within
/// max_dofs unknowns. Meshes of every solved level are returned through `meshes`.
std::vector<StudyRecord> adaptive_loop(const Mesh& initial, const Formulation& form, const Problem& problem,
                                       double theta, int max_dofs, const StudyOptions& opts = {},
                                       std::vector<Mesh>* meshes = nullptr);

}  // namespace dpg
