#pragma once

#include <vector>

#include "elasticnet/types.hpp"

namespace elasticnet {

/// Open curve sampled on the uniform parameter grid x_j = j/N, j = 0..N.
struct DiscreteCurve {
  NodeField nodes;  // (N+1) x n

  int dim() const { return static_cast<int>(nodes.cols()); }
  int segments() const { return static_cast<int>(nodes.rows()) - 1; }

  /// Throws if the curve breaks a structural invariant: N >= 16, n >= 2,
  /// finite coordinates, no repeated consecutive nodes.
  void validate() const;
};

inline constexpr int kDefaultMaxOrder = 4;
inline constexpr double kDegeneracyFactor = 1e-8;

/// Per-node metric, tangent, curvature and normal derivatives of curvature.
struct GeometricFields {
  Scalars metric;                      // |d_x f| per node
  NodeField tangent;                   // unit d_s f
  NodeField kappa;                     // d_s^2 f
  std::vector<NodeField> nabla_kappa;  // nabla_s^m kappa, m = 0..M
  Scalars arclength;                   // cumulative arclength at nodes
  double length = 0.0;

  int max_order() const { return static_cast<int>(nabla_kappa.size()) - 1; }
};

/// d/dx on the uniform grid: centered in the interior, second-order
/// one-sided at both ends.
NodeField dx(const NodeField& f);
Scalars dx(const Scalars& f);

Scalars compute_metric(const DiscreteCurve& curve);
NodeField compute_tangent(const DiscreteCurve& curve);
NodeField compute_curvature(const DiscreteCurve& curve);

/// Arclength derivative (1/g) d_x applied to a field; no projection.
NodeField d_ds(const NodeField& field, const Scalars& metric);
Scalars d_ds(const Scalars& field, const Scalars& metric);

/// Normal-projected arclength derivative:
/// nabla_s phi = d_s phi - <d_s phi, tau> tau.
NodeField nabla_s(const NodeField& field, const Scalars& metric, const NodeField& tangent);
NodeField nabla_s(const NodeField& field, const DiscreteCurve& curve);

/// Iterated nabla_s applied to the curvature vector; m = 0 returns kappa.
NodeField nabla_s_power(const DiscreteCurve& curve, int m, int max_order = kDefaultMaxOrder);

GeometricFields compute_fields(const DiscreteCurve& curve, int max_order = kDefaultMaxOrder);

/// Max norm over interior nodes of d_s kappa - (nabla_s kappa - |kappa|^2 tau).
double partial_s_kappa_identity_residual(const DiscreteCurve& curve);

double curve_length(const DiscreteCurve& curve);
Scalars cumulative_arclength(const Scalars& metric);

/// Trapezoid integral of a per-node scalar field against the arclength
/// element ds = g dx.
double integrate_ds(const Scalars& values, const Scalars& metric);

/// Same trace, nodes redistributed at equal arclength spacing.
DiscreteCurve resample_by_arclength(const DiscreteCurve& curve);

/// Leading nodes of a curve as a standalone sub-curve. Values computed at
/// node 0 through the standard operators agree exactly with the full-curve
/// pipeline as long as the read row stays clear of the window's far end
/// (validity shrinks by one row per derivative application).
DiscreteCurve head_window(const DiscreteCurve& curve, int count);
DiscreteCurve tail_window(const DiscreteCurve& curve, int count);

}  // namespace elasticnet
