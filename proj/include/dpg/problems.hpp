// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "dpg/mesh.hpp"
#include "dpg/trace_space.hpp"

namespace dpg {

struct Solution;

enum class BoundaryMode { homogeneous, interpolated };

/// Manufactured problem Delta^2 u = f with clamped boundary data.
struct Problem {
  std::string name;
  ScalarField u_exact;      // may be empty when no exact solution is known
  VectorField grad_u_exact;
  ScalarField sigma_exact;  // Delta u
  ScalarField f;
  BoundaryMode boundary = BoundaryMode::homogeneous;
  std::function<Mesh()> make_domain;
  /// Point where sigma_exact blows up; error quadrature refines towards it.
  std::optional<Point> singular_point;

  bool has_exact() const { return static_cast<bool>(u_exact) && static_cast<bool>(sigma_exact); }
};

inline constexpr double kSingularAlpha = 0.673583432147380;
inline constexpr double kSingularC = 1.234587795273723;

/// u = g(x) g(y), g(t) = t^2 (1-t)^2 on the unit square, homogeneous clamped data.
Problem smooth_problem();

/// Corner singularity u = r^(1+a) (cos((a+1)phi) + C cos((a-1)phi)) on the
/// sector of opening 5 pi / 4, phi in (-5 pi/8, 5 pi/8); f = 0, boundary data
/// interpolated at the vertices.
Problem singular_problem();

/// f = 0 with homogeneous data on the given domain; the solution is zero.
Problem zero_problem(std::function<Mesh()> make_domain);

/// Polynomial exact solution with f = Delta^2 u supplied by the caller,
/// boundary data interpolated.
Problem polynomial_problem(std::string name, ScalarField u, VectorField grad, ScalarField sigma, ScalarField f,
                           std::function<Mesh()> make_domain);

struct FieldErrors {
  double u = 0.0;
  double sigma = 0.0;
};

/// L2 errors of the field unknowns. Elements touching the singular point are
/// integrated on a geometrically graded sub-triangulation (4 levels).
FieldErrors l2_errors(const Solution& solution, const Problem& problem);

/// One refinement level of a convergence study.
struct StudyRecord {
  int level = 0;
  int ndof_total = 0;
  int ndof_field = 0;
  double h_max = 0.0;
  double eta = 0.0;
  double err_u = 0.0;
  double err_sigma = 0.0;
  double solve_seconds = 0.0;
};

enum class RateKey { eta, err_u, err_sigma };
enum class RateAxis { h, ndof };

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Decay rate over the last min(4, n) records (n >= 3): the fitted slope
/// against h, or minus the slope against ndof. Throws std::invalid_argument on
/// nonpositive values or too few records.
double estimate_rate(std::span<const StudyRecord> records, RateKey key, RateAxis axis);

}  // namespace dpg
