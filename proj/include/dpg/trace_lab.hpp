// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "dpg/mesh.hpp"
#include "dpg/polynomial.hpp"

namespace dpg {

/// C = 1 / (2 int_0^1 exp(-1/(1-s^2)) ds), by adaptive Gauss-Kronrod to 1e-10.
double mollifier_constant();

/// Radial bump phi_eps(t) = (C/eps) exp(-eps^2/(eps^2-t^2)) for |t| < eps, zero
/// otherwise, normalized so that int_0^1 phi_eps = 1/2, and the associated
/// test function v_eps(x, y) = -(x + y) phi_eps(|(x, y)|).
class MollifierFamily {
 public:
  MollifierFamily();
  double constant() const { return c_; }
  double phi(double eps, double t) const;
  double dphi(double eps, double t) const;
  double v(double eps, Point x) const;
  Point grad_v(double eps, Point x) const;

 private:
  double c_;
};

/// int_0^1 phi_eps(t) dt by panel Gauss quadrature (should be 1/2).
double mollifier_mass(const MollifierFamily& fam, double eps);

/// Boundary pairing <dn v_eps, z> - <v_eps, dn z> over the reference triangle
/// (0,0), (1,0), (0,1). Tends to z(0,0) as eps -> 0. Requires 0 < eps < 1/2.
double pair_trace_veps(const MollifierFamily& fam, const Polynomial2& z, double eps);

/// ||z||_{2,T}^2 = ||z||^2 + ||grad z||^2 + ||Hess z||^2 on the reference triangle.
double h2_norm_reference(const Polynomial2& z);

struct DiracStudy {
  std::vector<double> eps;
  std::vector<double> error;  // max_z |pair - z(0,0)| / ||z||_{2,T}
  double slope = 0.0;         // log-log slope; NaN when undefined
};

/// Every monomial x^i y^j with i + j <= degree.
std::vector<Polynomial2> monomials_up_to(int degree);

DiracStudy dirac_convergence_study(const std::vector<double>& eps_list, const std::vector<Polynomial2>& z_list);

struct UnboundedRow {
  int n = 0;
  double value_at_origin = 0.0;  // v_n(0,0) = -log n
  double l2_norm = 0.0;          // over the upper half disk
};

/// v_n = log|x - (0, -1/n)| on the upper unit half disk.
std::vector<UnboundedRow> unboundedness_demo(const std::vector<int>& n_list);

struct NormPair {
  double duality = 0.0;
  double extension = 0.0;
};

/// Discrete sandwich for the trace norm of z on a triangle.
///
/// duality: sup of ((Delta w, z) - (w, Delta z)) / ||w||_Delta over polynomials
/// w of degree dual_degree. extension: min of ||y||_Delta over y = z + b^2 q with
/// b the cubic bubble and deg y <= extension_degree, so y has exactly the trace
/// pair of z. Requires both degrees >= 4 and deg z <= extension_degree.
NormPair norm_identity_check(const std::array<Point, 3>& element, const Polynomial2& z, int dual_degree,
                             int extension_degree);

/// ||t phi_eps(t)||_{L2(0,1)}.
double weighted_mollifier_norm(const MollifierFamily& fam, double eps);

/// ||v||_inf / (eps^{1/2} ||v'||) for v(t) = t^2 on (0, eps), by quadrature.
double linf_over_scaled_derivative(double eps);

}  // namespace dpg
