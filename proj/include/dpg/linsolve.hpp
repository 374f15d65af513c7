// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dpg {

/// Raised when a factorization or iterative solve breaks down.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cholesky factor of a dense symmetric positive definite matrix.
class DenseSpdFactor {
 public:
  /// Throws NumericalError naming the first nonpositive pivot, or if the
  /// input is not symmetric to 1e-13 relative.
  explicit DenseSpdFactor(const Eigen::MatrixXd& a);

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  int size() const { return static_cast<int>(l_.rows()); }
  const Eigen::MatrixXd& lower() const { return l_; }

 private:
  Eigen::MatrixXd l_;
};

Eigen::MatrixXd dense_spd_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs);

/// Symmetric sparse matrix assembled from triplets (duplicates are summed).
class SparseSymBuilder {
 public:
  explicit SparseSymBuilder(int n) : n_(n) {}
  void add(int i, int j, double v) { triplets_.emplace_back(i, j, v); }
  int size() const { return n_; }
  Eigen::SparseMatrix<double> compress() const;

 private:
  int n_;
  std::vector<Eigen::Triplet<double>> triplets_;
};

enum class SparseMethod { direct, cg };

struct SparseSolveInfo {
  SparseMethod method = SparseMethod::direct;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Sparse Cholesky (AMD ordering) with residual check; on failure falls back
/// to Jacobi-preconditioned CG (rel. residual 1e-12, at most 10 n iterations).
Eigen::VectorXd sparse_spd_solve(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                                 SparseSolveInfo* info = nullptr);

/// Preconditioned CG only. Throws NumericalError on breakdown (nonpositive
/// curvature) or non-convergence.
Eigen::VectorXd conjugate_gradient(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                                   double tol, int max_iter, SparseSolveInfo* info = nullptr);

}  // namespace dpg
