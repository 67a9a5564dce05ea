#include "elasticnet/curve.hpp"

#include <algorithm>
#include <cmath>

namespace elasticnet {

namespace {

constexpr int kMinSegments = 16;

double trapezoid(const Scalars& values, double h) {
  const int m = static_cast<int>(values.size());
  double sum = 0.5 * (values(0) + values(m - 1));
  for (int j = 1; j < m - 1; ++j) sum += values(j);
  return sum * h;
}

}  // namespace

void DiscreteCurve::validate() const {
  if (dim() < 2) throw DegenerateCurve("ambient dimension must be >= 2");
  if (segments() < kMinSegments) throw DegenerateCurve("need at least 16 node intervals");
  if (!nodes.allFinite()) throw DegenerateCurve("non-finite node coordinates");
  for (int j = 0; j < segments(); ++j) {
    if ((nodes.row(j + 1) - nodes.row(j)).norm() == 0.0)
      throw DegenerateCurve("repeated consecutive nodes");
  }
}

// One-sided end rows use a 5-point stencil whose truncation error matches
// the centered rows' (h^2/6) f''' form through third order, so the error
// field stays smooth and iterated arclength derivatives keep second order
// up to the boundary. Short arrays fall back to the classic 3-point rows.
namespace {
constexpr double kEnd0 = -2.5, kEnd1 = 5.5, kEnd2 = -5.0, kEnd3 = 2.5, kEnd4 = -0.5;
}

NodeField dx(const NodeField& f) {
  const int rows = static_cast<int>(f.rows());
  const int n = static_cast<int>(f.cols());
  const double h = 1.0 / (rows - 1);
  NodeField out(rows, n);
  if (rows >= 5) {
    out.row(0) = (kEnd0 * f.row(0) + kEnd1 * f.row(1) + kEnd2 * f.row(2) +
                  kEnd3 * f.row(3) + kEnd4 * f.row(4)) /
                 h;
    out.row(rows - 1) = -(kEnd0 * f.row(rows - 1) + kEnd1 * f.row(rows - 2) +
                          kEnd2 * f.row(rows - 3) + kEnd3 * f.row(rows - 4) +
                          kEnd4 * f.row(rows - 5)) /
                        h;
  } else {
    out.row(0) = (-3.0 * f.row(0) + 4.0 * f.row(1) - f.row(2)) / (2.0 * h);
    out.row(rows - 1) =
        (3.0 * f.row(rows - 1) - 4.0 * f.row(rows - 2) + f.row(rows - 3)) / (2.0 * h);
  }
  for (int j = 1; j < rows - 1; ++j) out.row(j) = (f.row(j + 1) - f.row(j - 1)) / (2.0 * h);
  return out;
}

Scalars dx(const Scalars& f) {
  const int rows = static_cast<int>(f.size());
  const double h = 1.0 / (rows - 1);
  Scalars out(rows);
  if (rows >= 5) {
    out(0) = (kEnd0 * f(0) + kEnd1 * f(1) + kEnd2 * f(2) + kEnd3 * f(3) + kEnd4 * f(4)) / h;
    out(rows - 1) = -(kEnd0 * f(rows - 1) + kEnd1 * f(rows - 2) + kEnd2 * f(rows - 3) +
                      kEnd3 * f(rows - 4) + kEnd4 * f(rows - 5)) /
                    h;
  } else {
    out(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    out(rows - 1) = (3.0 * f(rows - 1) - 4.0 * f(rows - 2) + f(rows - 3)) / (2.0 * h);
  }
  for (int j = 1; j < rows - 1; ++j) out(j) = (f(j + 1) - f(j - 1)) / (2.0 * h);
  return out;
}

Scalars compute_metric(const DiscreteCurve& curve) {
  const NodeField deriv = dx(curve.nodes);
  Scalars metric = deriv.rowwise().norm();
  const int N = curve.segments();
  const double length = trapezoid(metric, 1.0 / N);
  const double threshold = kDegeneracyFactor * length / N;
  if (metric.minCoeff() < threshold)
    throw DegenerateCurve("metric below degeneracy threshold");
  return metric;
}

NodeField compute_tangent(const DiscreteCurve& curve) {
  const NodeField deriv = dx(curve.nodes);
  const Scalars metric = compute_metric(curve);
  NodeField tangent = deriv;
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  return tangent;
}

NodeField d_ds(const NodeField& field, const Scalars& metric) {
  NodeField out = dx(field);
  for (int j = 0; j < out.rows(); ++j) out.row(j) /= metric(j);
  return out;
}

Scalars d_ds(const Scalars& field, const Scalars& metric) {
  Scalars out = dx(field);
  return out.cwiseQuotient(metric);
}

NodeField compute_curvature(const DiscreteCurve& curve) {
  const Scalars metric = compute_metric(curve);
  NodeField tangent = dx(curve.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  return d_ds(tangent, metric);
}

NodeField nabla_s(const NodeField& field, const Scalars& metric, const NodeField& tangent) {
  NodeField out = d_ds(field, metric);
  for (int j = 0; j < out.rows(); ++j) {
    const double along = out.row(j).dot(tangent.row(j));
    out.row(j) -= along * tangent.row(j);
  }
  return out;
}

NodeField nabla_s(const NodeField& field, const DiscreteCurve& curve) {
  const Scalars metric = compute_metric(curve);
  NodeField tangent = dx(curve.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  return nabla_s(field, metric, tangent);
}

NodeField nabla_s_power(const DiscreteCurve& curve, int m, int max_order) {
  if (m > max_order) throw OrderTooHigh("requested nabla_s order exceeds cap");
  const Scalars metric = compute_metric(curve);
  NodeField tangent = dx(curve.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  NodeField field = d_ds(tangent, metric);  // kappa
  for (int k = 0; k < m; ++k) field = nabla_s(field, metric, tangent);
  return field;
}

GeometricFields compute_fields(const DiscreteCurve& curve, int max_order) {
  GeometricFields out;
  out.metric = compute_metric(curve);
  NodeField tangent = dx(curve.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= out.metric(j);
  out.tangent = tangent;
  out.kappa = d_ds(tangent, out.metric);
  out.nabla_kappa.reserve(max_order + 1);
  out.nabla_kappa.push_back(out.kappa);
  for (int m = 1; m <= max_order; ++m)
    out.nabla_kappa.push_back(nabla_s(out.nabla_kappa.back(), out.metric, tangent));
  out.arclength = cumulative_arclength(out.metric);
  out.length = out.arclength(out.arclength.size() - 1);
  return out;
}

double partial_s_kappa_identity_residual(const DiscreteCurve& curve) {
  const Scalars metric = compute_metric(curve);
  NodeField tangent = dx(curve.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  const NodeField kappa = d_ds(tangent, metric);
  const NodeField ds_kappa = d_ds(kappa, metric);
  const NodeField nab_kappa = nabla_s(kappa, metric, tangent);
  double worst = 0.0;
  for (int j = 1; j < kappa.rows() - 1; ++j) {
    const double k2 = kappa.row(j).squaredNorm();
    const double r = (ds_kappa.row(j) - nab_kappa.row(j) + k2 * tangent.row(j)).norm();
    worst = std::max(worst, r);
  }
  return worst;
}

Scalars cumulative_arclength(const Scalars& metric) {
  const int rows = static_cast<int>(metric.size());
  const double h = 1.0 / (rows - 1);
  Scalars s(rows);
  s(0) = 0.0;
  for (int j = 1; j < rows; ++j) s(j) = s(j - 1) + 0.5 * (metric(j - 1) + metric(j)) * h;
  return s;
}

double curve_length(const DiscreteCurve& curve) {
  const Scalars metric = compute_metric(curve);
  return trapezoid(metric, 1.0 / curve.segments());
}

double integrate_ds(const Scalars& values, const Scalars& metric) {
  return trapezoid(values.cwiseProduct(metric), 1.0 / (static_cast<int>(metric.size()) - 1));
}

namespace {

// Cubic Hermite value on [0,1] from endpoint values/derivatives.
double hermite(double p0, double p1, double d0, double d1, double u) {
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * d0 +
         (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * d1;
}

double hermite_deriv(double p0, double p1, double d0, double d1, double u) {
  const double u2 = u * u;
  return (6 * u2 - 6 * u) * p0 + (3 * u2 - 4 * u + 1) * d0 + (-6 * u2 + 6 * u) * p1 +
         (3 * u2 - 2 * u) * d1;
}

}  // namespace

DiscreteCurve resample_by_arclength(const DiscreteCurve& curve) {
  const int N = curve.segments();
  const int n = curve.dim();
  const double h = 1.0 / N;
  const Scalars metric = compute_metric(curve);
  const Scalars s = cumulative_arclength(metric);
  const double length = s(N);
  const NodeField deriv = dx(curve.nodes);

  DiscreteCurve out;
  out.nodes.resize(N + 1, n);
  out.nodes.row(0) = curve.nodes.row(0);
  out.nodes.row(N) = curve.nodes.row(N);

  int seg = 0;
  for (int k = 1; k < N; ++k) {
    const double target = length * k / N;
    while (seg < N - 1 && s(seg + 1) < target) ++seg;
    // Invert the monotone Hermite interpolant of s on [x_seg, x_seg+1];
    // the interpolant's u-derivatives are h * g at the segment ends.
    const double p0 = s(seg), p1 = s(seg + 1);
    const double d0 = h * metric(seg), d1 = h * metric(seg + 1);
    double lo = 0.0, hi = 1.0, u = (target - p0) / std::max(p1 - p0, 1e-300);
    u = std::clamp(u, 0.0, 1.0);
    for (int it = 0; it < 60; ++it) {
      const double value = hermite(p0, p1, d0, d1, u) - target;
      if (value > 0)
        hi = u;
      else
        lo = u;
      const double slope = hermite_deriv(p0, p1, d0, d1, u);
      double next = (slope != 0.0) ? u - value / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - u) < 1e-15) {
        u = next;
        break;
      }
      u = next;
    }
    for (int c = 0; c < n; ++c) {
      out.nodes(k, c) = hermite(curve.nodes(seg, c), curve.nodes(seg + 1, c),
                                h * deriv(seg, c), h * deriv(seg + 1, c), u);
    }
  }
  out.validate();
  return out;
}

DiscreteCurve head_window(const DiscreteCurve& curve, int count) {
  DiscreteCurve out;
  out.nodes = curve.nodes.topRows(count);
  return out;
}

DiscreteCurve tail_window(const DiscreteCurve& curve, int count) {
  DiscreteCurve out;
  out.nodes = curve.nodes.bottomRows(count);
  return out;
}

}  // namespace elasticnet
