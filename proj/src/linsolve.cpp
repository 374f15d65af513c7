// SPDX-License-Identifier: Apache-2.0

#include "dpg/linsolve.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>

namespace dpg {

DenseSpdFactor::DenseSpdFactor(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw NumericalError("dense_spd: matrix is not square");
  const int n = static_cast<int>(a.rows());
  const double scale = a.cwiseAbs().maxCoeff();
  if (n > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() > 1e-13 * scale)
    throw NumericalError("dense_spd: matrix is not symmetric");
  l_ = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j) - l_.row(j).head(j).squaredNorm();
    if (!(d > 0.0))
      throw NumericalError("dense_spd: nonpositive pivot " + std::to_string(d) + " at index " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (int i = j + 1; i < n; ++i)
      l_(i, j) = (a(i, j) - l_.row(i).head(j).dot(l_.row(j).head(j))) / ljj;
  }
}

Eigen::MatrixXd DenseSpdFactor::solve(const Eigen::MatrixXd& rhs) const {
  const auto lower = l_.triangularView<Eigen::Lower>();
  return lower.transpose().solve(lower.solve(rhs));
}

Eigen::VectorXd DenseSpdFactor::solve(const Eigen::VectorXd& rhs) const {
  const auto lower = l_.triangularView<Eigen::Lower>();
  return lower.transpose().solve(lower.solve(rhs));
}

Eigen::MatrixXd dense_spd_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs) {
  return DenseSpdFactor(a).solve(rhs);
}

Eigen::SparseMatrix<double> SparseSymBuilder::compress() const {
  Eigen::SparseMatrix<double> m(n_, n_);
  m.setFromTriplets(triplets_.begin(), triplets_.end());
  m.makeCompressed();
  return m;
}

Eigen::VectorXd conjugate_gradient(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                                   double tol, int max_iter, SparseSolveInfo* info) {
  const Eigen::Index n = b.size();
  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = a.coeff(i, i);
    if (!(d > 0.0)) throw NumericalError("cg: nonpositive diagonal entry at index " + std::to_string(i));
    inv_diag(i) = 1.0 / d;
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    if (info) *info = {SparseMethod::cg, 0, 0.0};
    return x;
  }
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd ap = a * p;
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0))
      throw NumericalError("cg: breakdown (nonpositive curvature) at iteration " + std::to_string(it));
    const double alpha = rz / curvature;
    x += alpha * p;
    r -= alpha * ap;
    const double rel = r.norm() / bnorm;
    if (rel <= tol) {
      if (info) *info = {SparseMethod::cg, it, rel};
      return x;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw NumericalError("cg: no convergence after " + std::to_string(max_iter) + " iterations");
}

Eigen::VectorXd sparse_spd_solve(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                                 SparseSolveInfo* info) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw NumericalError("sparse_spd_solve: size mismatch");
  const double bnorm = b.norm();
  const Eigen::Index n = a.rows();
  // symmetric Jacobi scaling: the trace and field blocks differ by powers of h
  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = a.coeff(i, i);
    if (!(d > 0.0)) throw NumericalError("sparse_spd_solve: nonpositive diagonal entry at index " + std::to_string(i));
    scale(i) = 1.0 / std::sqrt(d);
  }
  const Eigen::SparseMatrix<double> as = scale.asDiagonal() * a * scale.asDiagonal();
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt(as);
  if (llt.info() == Eigen::Success) {
    auto solve_scaled = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
      return scale.cwiseProduct(llt.solve(Eigen::VectorXd(scale.cwiseProduct(r))));
    };
    Eigen::VectorXd x = solve_scaled(b);
    double rel = bnorm > 0.0 ? (b - a * x).norm() / bnorm : 0.0;
    // a few steps of iterative refinement
    for (int step = 0; step < 3 && rel > 1e-10; ++step) {
      x += solve_scaled(b - a * x);
      rel = (b - a * x).norm() / bnorm;
    }
    if (llt.info() == Eigen::Success && rel <= 1e-10) {
      if (info) *info = {SparseMethod::direct, 0, rel};
      return x;
    }
  }
  return conjugate_gradient(a, b, 1e-12, 10 * std::max(static_cast<int>(n), 1), info);
}

}  // namespace dpg
