#pragma once

#include <array>
#include <optional>

#include "elasticnet/network.hpp"

namespace elasticnet {

struct CompatThresholds {
  double kappa_end_tol = 1e-6;
  double sum_tol = 1e-6;
};

/// Structural and compatibility residuals of an initial network.
struct CompatReport {
  bool endpoint_ok = false;
  bool concurrency_ok = false;
  std::array<std::array<double, 2>, 3> kappa_ends{};  // |kappa_i| at x = 0, 1
  double sum_condition = 0.0;
  bool angle_ok = false;  // span of junction tangents >= 2
  std::optional<double> order1_residual;

  bool passes(const CompatThresholds& thresholds) const;
};

CompatReport check_initial(const Network& net, const CompatThresholds& thresholds = {});

/// Max pairwise spread of the three junction velocities -A_i + phi_i T_i;
/// the first-order compatibility residual.
double check_order1(const Network& net);

/// Three quintic curves: position and prescribed unit tangent at the
/// junction, position at P_i, zero second derivative at both ends. The
/// sampled nodes get a discrete end-curvature correction so the stored
/// network satisfies the curvature boundary conditions to solver precision.
Network generate_star(const std::array<Vec, 3>& endpoints, const Vec& junction,
                      const std::array<Vec, 3>& tangents, int N,
                      const std::array<double, 3>& lambda = {1.0, 1.0, 1.0});

/// Minimal perturbation of the junction-adjacent nodes pushing the
/// third-order balance residual below 1e-8 while keeping the end curvatures
/// near zero. Throws ProjectionFailed on stall or excessive energy change.
Network project_sum_condition(const Network& net);

/// Canonical symmetric star: endpoints on a circle of the given radius at
/// mutual 120 degrees, junction at the centroid, junction tangents rotated
/// in-plane by skew_radians away from the radial directions.
Network make_symmetric_star(int n, int N, double radius, double skew_radians,
                            const std::array<double, 3>& lambda);

}  // namespace elasticnet
