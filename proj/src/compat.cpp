#include "elasticnet/compat.hpp"

#include <algorithm>
#include <cmath>

#include "elasticnet/boundary.hpp"
#include "elasticnet/junction.hpp"

namespace elasticnet {

namespace {

bool rows_equal(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  for (int c = 0; c < a.size(); ++c)
    if (a(c) != b(c)) return false;
  return true;
}

std::array<Vec, 3> junction_tangents(const Network& net) {
  std::array<Vec, 3> T;
  for (int i = 0; i < 3; ++i) {
    const DiscreteCurve window = head_window(net.curves[i], 7);
    const NodeField deriv = dx(window.nodes);
    T[i] = deriv.row(0).transpose() / deriv.row(0).norm();
  }
  return T;
}

}  // namespace

bool CompatReport::passes(const CompatThresholds& thresholds) const {
  double worst_kappa = 0.0;
  for (const auto& pair : kappa_ends)
    worst_kappa = std::max({worst_kappa, pair[0], pair[1]});
  return endpoint_ok && concurrency_ok && angle_ok &&
         worst_kappa <= thresholds.kappa_end_tol && sum_condition <= thresholds.sum_tol;
}

CompatReport check_initial(const Network& net, const CompatThresholds&) {
  CompatReport report;
  const int N = net.segments();
  report.endpoint_ok = true;
  for (int i = 0; i < 3; ++i)
    report.endpoint_ok = report.endpoint_ok &&
                         rows_equal(net.curves[i].nodes.row(N), net.endpoints[i].transpose());
  report.concurrency_ok = rows_equal(net.curves[0].nodes.row(0), net.curves[1].nodes.row(0)) &&
                          rows_equal(net.curves[0].nodes.row(0), net.curves[2].nodes.row(0));
  for (int i = 0; i < 3; ++i) {
    report.kappa_ends[i][0] = end_curvature(net.curves[i], true).norm();
    report.kappa_ends[i][1] = end_curvature(net.curves[i], false).norm();
  }
  report.sum_condition = junction_balance_vector_local(net).norm();
  report.angle_ok = span_dimension(junction_tangents(net)) >= 2;
  try {
    report.order1_residual = check_order1(net);
  } catch (const DegenerateJunction&) {
    report.order1_residual.reset();
  }
  return report;
}

double check_order1(const Network& net) {
  const auto T = junction_tangents(net);
  std::array<Vec, 3> A;
  for (int i = 0; i < 3; ++i) A[i] = end_nabla2_kappa(net.curves[i], true);
  const auto phi = solve_tangential_speeds(T, A);
  std::array<Vec, 3> velocity;
  for (int i = 0; i < 3; ++i) velocity[i] = -A[i] + phi[i] * T[i];
  double spread = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      spread = std::max(spread, (velocity[i] - velocity[j]).norm());
  return spread;
}

Network generate_star(const std::array<Vec, 3>& endpoints, const Vec& junction,
                      const std::array<Vec, 3>& tangents, int N,
                      const std::array<double, 3>& lambda) {
  const int n = static_cast<int>(junction.size());
  for (const auto& t : tangents)
    if (std::abs(t.norm() - 1.0) > 1e-8)
      throw InfeasibleGeometry("junction tangents must be unit vectors");

  // Quintic Hermite conditions on p, p', p'' at x = 0 and x = 1 in the
  // monomial basis.
  Eigen::Matrix<double, 6, 6> conditions;
  conditions << 1, 0, 0, 0, 0, 0,    // p(0)
      0, 1, 0, 0, 0, 0,              // p'(0)
      0, 0, 2, 0, 0, 0,              // p''(0)
      1, 1, 1, 1, 1, 1,              // p(1)
      0, 1, 2, 3, 4, 5,              // p'(1)
      0, 0, 2, 6, 12, 20;            // p''(1)
  const Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(conditions);

  Network net;
  net.lambda = lambda;
  for (int i = 0; i < 3; ++i) {
    const Vec chord = endpoints[i] - junction;
    const double span = chord.norm();
    if (span < 1e-10 * std::max(1.0, junction.norm() + endpoints[i].norm()))
      throw InfeasibleGeometry("endpoint too close to the junction");
    const Vec unit = tangents[i] / tangents[i].norm();
    const Vec outgoing = chord / span;

    Eigen::MatrixXd coeffs(6, n);
    for (int c = 0; c < n; ++c) {
      Eigen::Matrix<double, 6, 1> rhs;
      rhs << junction(c), span * unit(c), 0.0, endpoints[i](c), span * outgoing(c), 0.0;
      coeffs.col(c) = lu.solve(rhs);
    }

    DiscreteCurve curve;
    curve.nodes.resize(N + 1, n);
    for (int j = 0; j <= N; ++j) {
      const double x = static_cast<double>(j) / N;
      Eigen::Matrix<double, 1, 6> powers;
      powers << 1.0, x, x * x, x * x * x, x * x * x * x, x * x * x * x * x;
      curve.nodes.row(j) = powers * coeffs;
    }
    curve.nodes.row(0) = junction.transpose();
    curve.nodes.row(N) = endpoints[i].transpose();

    try {
      curve.validate();
      compute_metric(curve);
    } catch (const DegenerateCurve& err) {
      throw InfeasibleGeometry(std::string("degenerate construction: ") + err.what());
    }
    zero_end_curvature(curve, true);
    zero_end_curvature(curve, false);
    net.curves[i] = curve;
    net.endpoints[i] = endpoints[i];
  }
  net.validate(true);
  return net;
}

Network project_sum_condition(const Network& net) {
  const auto T = junction_tangents(net);
  if (span_dimension(T) < 2)
    throw ProjectionFailed("angle condition fails: junction tangents span < 2");

  constexpr double kTarget = 1e-8;
  Network out = net;
  double residual = junction_balance_vector_local(out).norm();
  if (residual <= kTarget) return out;

  const double energy_before = network_energy(out).weighted_total;
  double best = residual;
  for (int iter = 0; iter < 40; ++iter) {
    reduce_sum_condition(out, kTarget, 1);
    for (auto& curve : out.curves) zero_end_curvature(curve, true, 2);
    residual = junction_balance_vector_local(out).norm();
    if (residual <= kTarget) break;
    if (residual >= best)
      throw ProjectionFailed("sum-condition projection stalled");
    best = residual;
  }
  if (residual > kTarget) throw ProjectionFailed("sum-condition projection did not converge");

  const double energy_after = network_energy(out).weighted_total;
  if (std::abs(energy_after - energy_before) >
      0.01 * std::max(energy_before, 1e-300))
    throw ProjectionFailed("sum-condition projection perturbed the energy by more than 1%");
  return out;
}

Network make_symmetric_star(int n, int N, double radius, double skew_radians,
                            const std::array<double, 3>& lambda) {
  std::array<Vec, 3> endpoints;
  std::array<Vec, 3> tangents;
  const Vec junction = Vec::Zero(n);
  for (int i = 0; i < 3; ++i) {
    const double angle = M_PI / 2.0 + i * 2.0 * M_PI / 3.0;
    Vec p = Vec::Zero(n);
    p(0) = radius * std::cos(angle);
    p(1) = radius * std::sin(angle);
    endpoints[i] = p;
    Vec t = Vec::Zero(n);
    t(0) = std::cos(angle + skew_radians);
    t(1) = std::sin(angle + skew_radians);
    tangents[i] = t;
  }
  return generate_star(endpoints, junction, tangents, N, lambda);
}

}  // namespace elasticnet
