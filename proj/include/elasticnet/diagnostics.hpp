#pragma once

#include <map>
#include <string>
#include <vector>

#include "elasticnet/flow.hpp"

namespace elasticnet {

struct NormReport {
  std::vector<double> L2_norms;      // ||nabla_s^m kappa||_{L^2}, m = 0..k
  std::vector<double> scaled_norms;  // dilation-invariant versions
  int k = 0;
};

NormReport norm_report(const DiscreteCurve& curve, int k,
                       int max_order = kDefaultMaxOrder);

/// L^{i+1-1/p} (int |nabla_s^i kappa|^p ds)^{1/p}; p may be infinity, which
/// uses the max norm with exponent i+1.
double scale_invariant_norm(const DiscreteCurve& curve, int i, double p,
                            int max_order = kDefaultMaxOrder);

struct InterpolationCheck {
  double lhs = 0.0;
  double rhs = 0.0;  // without the unknown constant
  double ratio = 0.0;
};

/// ||nabla^i kappa||_p against ||kappa||_2^{1-a} ||kappa||_{k,2}^a with
/// a = (i + 1/2 - 1/p)/k.
InterpolationCheck gagliardo_nirenberg_check(const DiscreteCurve& curve, int i, int k,
                                             double p, int max_order = kDefaultMaxOrder);

/// ||kappa||_{k,2} over (||nabla^k kappa||_2 + ||kappa||_2); 0 when flat.
double sobolev_equivalence_check(const DiscreteCurve& curve, int k,
                                 int max_order = kDefaultMaxOrder);

enum class Violation { None, Length, Delta };

struct AssumptionMonitor {
  double min_length = 0.0;
  double delta = 0.0;
  int span_dim = 0;
  Violation violated = Violation::None;
};

struct MonitorThresholds {
  double min_length = 0.0;
  double delta_min = kDefaultDeltaMin;
};

AssumptionMonitor assumption_monitor(const Network& net, const MonitorThresholds& thresholds);

/// Named boundary-condition residuals of a flow state: end curvatures, the
/// even-derivative value at the fixed end, the junction balance, the
/// fourth-order junction reduction, and the endpoint pin.
std::map<std::string, double> boundary_residual_report(const FlowState& state);

struct DissipationReport {
  double lhs = 0.0;       // dE/dt across the pair of states
  double rhs = 0.0;       // -sum int |V|^2 ds, averaged over the step
  double mismatch = 0.0;  // relative
};

DissipationReport dissipation_report(const FlowState& prev, const FlowState& next);

}  // namespace elasticnet
