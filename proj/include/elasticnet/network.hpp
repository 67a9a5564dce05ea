#pragma once

#include <array>

#include "elasticnet/curve.hpp"
#include "elasticnet/types.hpp"

namespace elasticnet {

/// Three curves sharing the junction node f_i(0), with fixed outer endpoints
/// P_i = f_i(1) and per-curve length weights lambda_i.
struct Network {
  std::array<DiscreteCurve, 3> curves;
  std::array<Vec, 3> endpoints;
  std::array<double, 3> lambda{1.0, 1.0, 1.0};

  int dim() const { return curves[0].dim(); }
  int segments() const { return curves[0].segments(); }

  Vec junction() const { return curves[0].nodes.row(0); }
  /// Writes the same value to node 0 of all three curves.
  void set_junction(const Vec& point);

  /// Structural invariants: exact endpoint pin, exact concurrency, distinct
  /// endpoints, matching grids, admissible weights.
  void validate(bool allow_zero_lambda = false) const;
};

struct EnergyBreakdown {
  std::array<double, 3> elastic{};
  std::array<double, 3> lengths{};
  double weighted_total = 0.0;
};

/// Bending energy (1/2) int |kappa|^2 ds of a single curve.
double elastic_energy(const DiscreteCurve& curve);

EnergyBreakdown network_energy(const Network& net);

/// d/de L(f + e eta) at e = 0: <tau, eta>|_dI - int <kappa, eta> ds.
double first_variation_length(const DiscreteCurve& curve, const NodeField& eta);

/// d/de E(f + e eta) at e = 0, including both boundary terms.
double first_variation_elastic(const DiscreteCurve& curve, const NodeField& eta);

/// L^2(ds) norm over interior nodes of nabla_s^2 kappa + (1/2)|kappa|^2 kappa
/// - lambda kappa.
double euler_lagrange_residual(const DiscreteCurve& curve, double lambda);

/// Third-order junction balance sum_i (nabla_s kappa_i - lambda_i tau_i)(0).
Vec junction_balance_vector(const Network& net);
double junction_balance_residual(const Network& net);

}  // namespace elasticnet
