#include "elasticnet/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elasticnet/boundary.hpp"

namespace elasticnet {

namespace {

double lp_norm_ds(const NodeField& field, const Scalars& metric, double p) {
  if (std::isinf(p)) return field.rowwise().norm().maxCoeff();
  Scalars values(field.rows());
  for (int j = 0; j < field.rows(); ++j) values(j) = std::pow(field.row(j).norm(), p);
  return std::pow(integrate_ds(values, metric), 1.0 / p);
}

double scaled_norm(const NodeField& field, const Scalars& metric, double length, int i,
                   double p) {
  const double exponent = std::isinf(p) ? (i + 1.0) : (i + 1.0 - 1.0 / p);
  return std::pow(length, exponent) * lp_norm_ds(field, metric, p);
}

// ||kappa||_{k,2} = sum_{m<=k} scaled L2 norms of nabla^m kappa.
double sum_scaled_l2(const GeometricFields& F, int k) {
  double sum = 0.0;
  for (int m = 0; m <= k; ++m)
    sum += scaled_norm(F.nabla_kappa[m], F.metric, F.length, m, 2.0);
  return sum;
}

}  // namespace

NormReport norm_report(const DiscreteCurve& curve, int k, int max_order) {
  if (k > max_order) throw OrderTooHigh("norm order exceeds cap");
  const GeometricFields F = compute_fields(curve, k);
  NormReport report;
  report.k = k;
  for (int m = 0; m <= k; ++m) {
    report.L2_norms.push_back(lp_norm_ds(F.nabla_kappa[m], F.metric, 2.0));
    report.scaled_norms.push_back(
        scaled_norm(F.nabla_kappa[m], F.metric, F.length, m, 2.0));
  }
  return report;
}

double scale_invariant_norm(const DiscreteCurve& curve, int i, double p, int max_order) {
  if (i > max_order) throw OrderTooHigh("derivative order exceeds cap");
  const GeometricFields F = compute_fields(curve, i);
  return scaled_norm(F.nabla_kappa[i], F.metric, F.length, i, p);
}

InterpolationCheck gagliardo_nirenberg_check(const DiscreteCurve& curve, int i, int k,
                                             double p, int max_order) {
  if (k > max_order) throw OrderTooHigh("derivative order exceeds cap");
  if (!(0 <= i && i < k)) throw OrderTooHigh("need 0 <= i < k");
  const GeometricFields F = compute_fields(curve, k);
  InterpolationCheck check;
  check.lhs = scaled_norm(F.nabla_kappa[i], F.metric, F.length, i, p);
  const double alpha = (i + 0.5 - 1.0 / p) / k;
  const double kappa_l2 = scaled_norm(F.kappa, F.metric, F.length, 0, 2.0);
  check.rhs = std::pow(kappa_l2, 1.0 - alpha) * std::pow(sum_scaled_l2(F, k), alpha);
  check.ratio = check.rhs > 0.0 ? check.lhs / check.rhs : 0.0;
  return check;
}

double sobolev_equivalence_check(const DiscreteCurve& curve, int k, int max_order) {
  if (k > max_order) throw OrderTooHigh("derivative order exceeds cap");
  const GeometricFields F = compute_fields(curve, k);
  const double bracket = scaled_norm(F.nabla_kappa[k], F.metric, F.length, k, 2.0) +
                         scaled_norm(F.kappa, F.metric, F.length, 0, 2.0);
  return bracket > 0.0 ? sum_scaled_l2(F, k) / bracket : 0.0;
}

AssumptionMonitor assumption_monitor(const Network& net, const MonitorThresholds& thresholds) {
  AssumptionMonitor monitor;
  monitor.min_length = std::numeric_limits<double>::infinity();
  std::array<Vec, 3> T;
  for (int i = 0; i < 3; ++i) {
    monitor.min_length = std::min(monitor.min_length, curve_length(net.curves[i]));
    const NodeField deriv = dx(head_window(net.curves[i], 7).nodes);
    T[i] = deriv.row(0).transpose() / deriv.row(0).norm();
  }
  monitor.delta = angle_margin(T);
  monitor.span_dim = span_dimension(T);
  if (monitor.min_length < thresholds.min_length)
    monitor.violated = Violation::Length;
  else if (monitor.delta < thresholds.delta_min || monitor.span_dim < 2)
    monitor.violated = Violation::Delta;
  return monitor;
}

std::map<std::string, double> boundary_residual_report(const FlowState& state) {
  std::map<std::string, double> report;
  double kappa0 = 0.0, kappa1 = 0.0, nabla2_end = 0.0, reduction = 0.0, pin = 0.0;
  const int N = state.net.segments();
  for (int i = 0; i < 3; ++i) {
    const DiscreteCurve& curve = state.net.curves[i];
    kappa0 = std::max(kappa0, end_curvature(curve, true).norm());
    kappa1 = std::max(kappa1, end_curvature(curve, false).norm());
    nabla2_end = std::max(nabla2_end, end_nabla2_kappa(curve, false).norm());
    pin = std::max(pin,
                   (curve.nodes.row(N) - state.net.endpoints[i].transpose()).norm());
    // nabla^4 kappa = lambda nabla^2 kappa + phi nabla kappa at the junction.
    const GeometricFields F = compute_fields(curve, 4);
    const Vec value = F.nabla_kappa[4].row(0).transpose() -
                      state.net.lambda[i] * F.nabla_kappa[2].row(0).transpose() -
                      state.junction.phi0[i] * F.nabla_kappa[1].row(0).transpose();
    reduction = std::max(reduction, value.norm());
  }
  report["kappa0"] = kappa0;
  report["kappa1"] = kappa1;
  report["nabla2_kappa1"] = nabla2_end;
  report["sum_balance"] = junction_balance_vector_local(state.net).norm();
  report["junction_reduction"] = reduction;
  report["endpoint_pin"] = pin;
  return report;
}

DissipationReport dissipation_report(const FlowState& prev, const FlowState& next) {
  DissipationReport report;
  const double dt = next.time - prev.time;
  if (dt <= 0.0) return report;
  const double e_prev = prev.cache->energy.weighted_total;
  const double e_next = next.cache->energy.weighted_total;
  report.lhs = (e_next - e_prev) / dt;
  double d_prev = 0.0, d_next = 0.0;
  for (int i = 0; i < 3; ++i) {
    d_prev += prev.cache->dissipation[i];
    d_next += next.cache->dissipation[i];
  }
  report.rhs = -0.5 * (d_prev + d_next);
  const double scale = std::max({std::abs(report.lhs), std::abs(report.rhs), 1e-300});
  report.mismatch = std::abs(report.lhs - report.rhs) / scale;
  return report;
}

}  // namespace elasticnet
