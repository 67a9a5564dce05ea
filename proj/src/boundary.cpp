#include "elasticnet/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace elasticnet {

namespace {

// Window sizes giving exact row-0 parity with the full pipeline: validity
// shrinks by one row per derivative application from the far end.
constexpr int kCurvatureWindow = 7;
constexpr int kBalanceWindow = 9;

DiscreteCurve reversed(const DiscreteCurve& curve) {
  DiscreteCurve out;
  out.nodes = curve.nodes.colwise().reverse();
  return out;
}

Scalars window_metric(const DiscreteCurve& window) {
  // Raw metric, no degeneracy check: windows are tiny and the threshold is
  // owned by the full-curve operators.
  return dx(window.nodes).rowwise().norm();
}

Vec window_kappa0(const DiscreteCurve& window) {
  const Scalars metric = window_metric(window);
  NodeField tangent = dx(window.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  return d_ds(tangent, metric).row(0).transpose();
}

// nabla_s kappa - lambda tau at row 0 of a leading window.
Vec window_balance_term(const DiscreteCurve& window, double lambda) {
  const Scalars metric = window_metric(window);
  NodeField tangent = dx(window.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  const NodeField kappa = d_ds(tangent, metric);
  const NodeField nab_kappa = nabla_s(kappa, metric, tangent);
  return (nab_kappa.row(0) - lambda * tangent.row(0)).transpose();
}

}  // namespace

Vec end_curvature(const DiscreteCurve& curve, bool at_start) {
  if (at_start) return window_kappa0(head_window(curve, kCurvatureWindow));
  return window_kappa0(reversed(tail_window(curve, kCurvatureWindow)));
}

Vec end_nabla2_kappa(const DiscreteCurve& curve, bool at_start) {
  const DiscreteCurve window = at_start ? head_window(curve, kBalanceWindow)
                                        : reversed(tail_window(curve, kBalanceWindow));
  const Scalars metric = window_metric(window);
  NodeField tangent = dx(window.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  const NodeField kappa = d_ds(tangent, metric);
  const NodeField nab = nabla_s(kappa, metric, tangent);
  return nabla_s(nab, metric, tangent).row(0).transpose();
}

void zero_end_curvature(DiscreteCurve& curve, bool at_start, int passes) {
  const int N = curve.segments();
  // Window rows map to curve rows 0,1,2,... (or N,N-1,N-2,... when mirrored).
  const auto row_of = [&](int w) { return at_start ? w : N - w; };

  for (int pass = 0; pass < passes; ++pass) {
    DiscreteCurve window;
    window.nodes.resize(kCurvatureWindow, curve.dim());
    for (int w = 0; w < kCurvatureWindow; ++w) window.nodes.row(w) = curve.nodes.row(row_of(w));

    const Vec kappa0 = window_kappa0(window);
    const double norm = kappa0.norm();
    if (norm == 0.0) break;

    // Directional sensitivities of the end curvature to window nodes 1, 2,
    // probed along the current residual direction.
    const Vec direction = kappa0 / norm;
    const double probe = 1e-6 * std::max(1.0, window.nodes.row(1).norm());
    double c[2];
    for (int k = 0; k < 2; ++k) {
      DiscreteCurve probed = window;
      probed.nodes.row(1 + k) += probe * direction.transpose();
      c[k] = (window_kappa0(probed) - kappa0).dot(direction) / probe;
    }
    const double scale = c[0] * c[0] + c[1] * c[1];
    if (scale == 0.0) break;
    curve.nodes.row(row_of(1)) += (-c[0] / scale) * kappa0.transpose();
    curve.nodes.row(row_of(2)) += (-c[1] / scale) * kappa0.transpose();
  }
}

Vec junction_balance_vector_local(const Network& net) {
  Vec sum = Vec::Zero(net.dim());
  for (int i = 0; i < 3; ++i)
    sum += window_balance_term(head_window(net.curves[i], kBalanceWindow), net.lambda[i]);
  return sum;
}

double reduce_sum_condition(Network& net, double target, int max_iter) {
  const int n = net.dim();
  Vec residual = junction_balance_vector_local(net);
  double best = residual.norm();
  if (best <= target) return best;

  for (int iter = 0; iter < max_iter; ++iter) {
    // Numerical Jacobian of the balance vector w.r.t. node 1 of each curve.
    Eigen::MatrixXd jac(n, 3 * n);
    for (int i = 0; i < 3; ++i) {
      DiscreteCurve window = head_window(net.curves[i], kBalanceWindow);
      const Vec base = window_balance_term(window, net.lambda[i]);
      const double eps = 1e-7 * std::max(1.0, window.nodes.row(1).norm());
      for (int c = 0; c < n; ++c) {
        window.nodes(1, c) += eps;
        jac.col(i * n + c) = (window_balance_term(window, net.lambda[i]) - base) / eps;
        window.nodes(1, c) = net.curves[i].nodes(1, c);
      }
    }
    // Minimal-norm solution of jac * delta = -residual.
    const Eigen::MatrixXd gram = jac * jac.transpose();
    const Vec delta = jac.transpose() * gram.ldlt().solve(-residual);
    for (int i = 0; i < 3; ++i)
      net.curves[i].nodes.row(1) += delta.segment(i * n, n).transpose();

    residual = junction_balance_vector_local(net);
    const double now = residual.norm();
    if (now <= target) return now;
    if (now >= best) return now;  // stalled
    best = now;
  }
  return best;
}

}  // namespace elasticnet
