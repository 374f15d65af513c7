// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include <Eigen/Dense>

#include "dpg/basis.hpp"
#include "dpg/trace_space.hpp"

namespace dpg {

/// Which ultraweak formulation is discretized.
///
/// vf1: test space H(Delta) x H(Delta), test norm ||v||_Delta^2 + ||tau||_Delta^2.
/// vf2: test space H^2 x H(Delta), test norm ||v||_2^2 + ||tau||_Delta^2.
enum class Scheme { vf1, vf2 };

struct Formulation {
  Scheme scheme = Scheme::vf2;
  int field_degree = 0;  // u_h, sigma_h are piecewise polynomials of this degree
  int test_degree = 4;   // enriched test space degree

  /// Throws std::invalid_argument unless test_degree >= field_degree + 2.
  void validate() const;
};

/// Per-element bases for the field unknowns and the test functions.
struct ElementSpaces {
  ElementBasis test;
  ElementBasis field;

  static ElementSpaces make(const std::array<Point, 3>& corners, const Formulation& form,
                            ElementBasis::Kind kind = ElementBasis::Kind::orthonormal);
};

/// Column layout of the local trial-to-test matrix:
/// [u (nf) | sigma (nf) | u_hat (9) | sigma_hat (9)], where the trace blocks
/// hold (value, dx, dy) for local vertices 0, 1, 2.
struct LocalLayout {
  int nfield = 0;
  int ntest = 0;  // test functions per block (v or tau)
  int u = 0, sigma = 0, u_hat = 0, sigma_hat = 0;
  int cols = 0;
  int rows = 0;

  static LocalLayout of(const Formulation& form);
};

/// Block-diagonal test Gram matrix (v block first, then tau).
Eigen::MatrixXd local_gram(const ElementSpaces& spaces, const Formulation& form);

/// Upper-triangular R with local_gram = R^T R, from a Householder QR of the
/// quadrature-weighted test evaluations. Never forms G, so the factor keeps
/// its accuracy on strongly graded meshes where G itself is ill-conditioned.
Eigen::MatrixXd local_gram_root(const ElementSpaces& spaces, const Formulation& form);

/// Trial-to-test matrix: rows are test functions, columns follow LocalLayout.
///
/// Both schemes assemble the same skeleton integrand -oint(w dn t - dn w t):
/// sigma_hat stores the trace of sigma, which absorbs the sign flip between the
/// H(Delta) and H(div div) conventions of the sigma trace.
Eigen::MatrixXd local_b(const ElementSpaces& spaces, const Formulation& form);

/// Load vector (f, v_i) on the v block, zero on the tau block.
Eigen::VectorXd local_load(const ElementSpaces& spaces, const Formulation& form, const ScalarField& f);

/// Quadrature exactness used for volume and skeleton terms.
inline int volume_exactness(int test_degree) { return 2 * test_degree + 2; }
inline int edge_exactness(int test_degree) { return 2 * test_degree + 4; }

}  // namespace dpg
