#pragma once

#include <array>

#include "elasticnet/types.hpp"

namespace elasticnet {

inline constexpr double kDefaultDeltaMin = 1e-6;
inline constexpr double kDefaultSpanTol = 1e-6;

/// Junction tangents, second normal curvature derivatives, and the solved
/// tangential speeds at the triple junction.
struct JunctionState {
  std::array<Vec, 3> T;       // unit tangents at x = 0
  std::array<Vec, 3> A;       // nabla_s^2 kappa_i at x = 0
  Eigen::Matrix3d gram;       // <T_i, T_j>
  double det = 0.0;           // closed-form junction determinant
  std::array<double, 3> phi0{};
  double delta = 0.0;         // achieved angle margin
  int span_dim = 0;
  bool solvable = false;      // phi0 holds a valid solve
};

/// Symmetric system matrix: diagonal 2, off-diagonal -<T_i, T_j>.
Eigen::Matrix3d junction_matrix(const std::array<Vec, 3>& T);

/// Closed formula 8 - 2 sum T_ij^2 - 2 T_12 T_23 T_31.
double junction_determinant(const std::array<Vec, 3>& T);

/// Tangential speeds phi_i(0) via the closed-form inverse of the junction
/// matrix. Throws DegenerateJunction when det < 2 * delta_min.
std::array<double, 3> solve_tangential_speeds(const std::array<Vec, 3>& T,
                                              const std::array<Vec, 3>& A,
                                              double delta_min = kDefaultDeltaMin);

/// Same system solved with a generic pivoted LU; cross-check path.
std::array<double, 3> solve_tangential_speeds_pivoted(const std::array<Vec, 3>& T,
                                                      const std::array<Vec, 3>& A,
                                                      double delta_min = kDefaultDeltaMin);

/// Numerical rank of the 3 x n tangent matrix.
int span_dimension(const std::array<Vec, 3>& T, double tol = kDefaultSpanTol);

/// delta = 1 - min_{i != j} |<T_i, T_j>|, clamped to [0, 1].
double angle_margin(const std::array<Vec, 3>& T);

/// Assembles the full state; on a degenerate junction phi0 stays zero and
/// the failure is rethrown only if solve is requested.
JunctionState make_junction_state(const std::array<Vec, 3>& T, const std::array<Vec, 3>& A,
                                  double delta_min = kDefaultDeltaMin, bool solve = true);

}  // namespace elasticnet
