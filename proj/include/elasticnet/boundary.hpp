#pragma once

#include "elasticnet/network.hpp"

namespace elasticnet {

/// Discrete curvature vector at one end of the curve, evaluated with the
/// same one-sided pipeline the full-curve operators use.
Vec end_curvature(const DiscreteCurve& curve, bool at_start);

/// nabla_s^2 kappa at one end (one-sided pipeline, local window).
Vec end_nabla2_kappa(const DiscreteCurve& curve, bool at_start);

/// Moves the two nodes adjacent to the chosen end by the minimal-norm
/// correction that zeroes the discrete end curvature; a few passes absorb
/// the metric's mild nonlinearity.
void zero_end_curvature(DiscreteCurve& curve, bool at_start, int passes = 3);

/// Junction balance vector evaluated from leading-node windows only;
/// agrees exactly with junction_balance_vector.
Vec junction_balance_vector_local(const Network& net);

/// Gauss-Newton passes moving node 1 of each curve (minimal-norm least
/// squares across the three nodes) to push |junction balance| below target.
/// Returns the achieved residual.
double reduce_sum_condition(Network& net, double target, int max_iter);

}  // namespace elasticnet
