#include "elasticnet/network.hpp"

#include <cmath>

namespace elasticnet {

void Network::set_junction(const Vec& point) {
  for (auto& curve : curves) curve.nodes.row(0) = point.transpose();
}

namespace {
bool exactly_equal(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  if (a.size() != b.size()) return false;
  for (int c = 0; c < a.size(); ++c)
    if (a(c) != b(c)) return false;
  return true;
}
}  // namespace

void Network::validate(bool allow_zero_lambda) const {
  const int n = curves[0].dim();
  const int N = curves[0].segments();
  for (int i = 0; i < 3; ++i) {
    curves[i].validate();
    if (curves[i].dim() != n || curves[i].segments() != N)
      throw DegenerateCurve("curves must share ambient dimension and grid size");
    if (static_cast<int>(endpoints[i].size()) != n)
      throw DegenerateCurve("endpoint dimension mismatch");
    if (!exactly_equal(curves[i].nodes.row(N), endpoints[i].transpose()))
      throw DegenerateCurve("outer endpoint not pinned to P_i");
    const double li = lambda[i];
    if (!(li >= 0.0) || (!allow_zero_lambda && li <= 0.0))
      throw DegenerateCurve("length weight out of admissible range");
  }
  if (!exactly_equal(curves[0].nodes.row(0), curves[1].nodes.row(0)) ||
      !exactly_equal(curves[0].nodes.row(0), curves[2].nodes.row(0)))
    throw DegenerateCurve("junction nodes not concurrent");
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if ((endpoints[i] - endpoints[j]).norm() == 0.0)
        throw DegenerateCurve("endpoints P_i must be pairwise distinct");
}

double elastic_energy(const DiscreteCurve& curve) {
  const Scalars metric = compute_metric(curve);
  NodeField tangent = dx(curve.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  const NodeField kappa = d_ds(tangent, metric);
  return 0.5 * integrate_ds(kappa.rowwise().squaredNorm(), metric);
}

EnergyBreakdown network_energy(const Network& net) {
  EnergyBreakdown out;
  for (int i = 0; i < 3; ++i) {
    out.elastic[i] = elastic_energy(net.curves[i]);
    out.lengths[i] = curve_length(net.curves[i]);
    out.weighted_total += out.elastic[i] + net.lambda[i] * out.lengths[i];
  }
  return out;
}

double first_variation_length(const DiscreteCurve& curve, const NodeField& eta) {
  const Scalars metric = compute_metric(curve);
  NodeField tangent = dx(curve.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  const NodeField kappa = d_ds(tangent, metric);
  const int N = curve.segments();
  const double boundary =
      tangent.row(N).dot(eta.row(N)) - tangent.row(0).dot(eta.row(0));
  Scalars integrand(N + 1);
  for (int j = 0; j <= N; ++j) integrand(j) = kappa.row(j).dot(eta.row(j));
  return boundary - integrate_ds(integrand, metric);
}

double first_variation_elastic(const DiscreteCurve& curve, const NodeField& eta) {
  const Scalars metric = compute_metric(curve);
  NodeField tangent = dx(curve.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  const NodeField kappa = d_ds(tangent, metric);
  const NodeField nab_kappa = nabla_s(kappa, metric, tangent);
  const NodeField nab2_kappa = nabla_s(nab_kappa, metric, tangent);
  const NodeField ds_eta = d_ds(eta, metric);
  const int N = curve.segments();

  auto boundary_pair = [&](int j) {
    const double first = ds_eta.row(j).dot(kappa.row(j));
    const Eigen::RowVectorXd combo =
        nab_kappa.row(j) + 0.5 * kappa.row(j).squaredNorm() * tangent.row(j);
    return first - eta.row(j).dot(combo);
  };
  const double boundary = boundary_pair(N) - boundary_pair(0);

  Scalars integrand(N + 1);
  for (int j = 0; j <= N; ++j) {
    const Eigen::RowVectorXd el =
        nab2_kappa.row(j) + 0.5 * kappa.row(j).squaredNorm() * kappa.row(j);
    integrand(j) = el.dot(eta.row(j));
  }
  return boundary + integrate_ds(integrand, metric);
}

double euler_lagrange_residual(const DiscreteCurve& curve, double lambda) {
  const Scalars metric = compute_metric(curve);
  NodeField tangent = dx(curve.nodes);
  for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
  const NodeField kappa = d_ds(tangent, metric);
  const NodeField nab2_kappa = nabla_s(nabla_s(kappa, metric, tangent), metric, tangent);
  const int N = curve.segments();
  const double h = 1.0 / N;
  // Trapezoid on the interior subgrid [x_1, x_{N-1}].
  double sum = 0.0;
  for (int j = 1; j < N; ++j) {
    const double r2 =
        (nab2_kappa.row(j) + (0.5 * kappa.row(j).squaredNorm() - lambda) * kappa.row(j))
            .squaredNorm();
    const double weight = (j == 1 || j == N - 1) ? 0.5 : 1.0;
    sum += weight * r2 * metric(j) * h;
  }
  return std::sqrt(sum);
}

Vec junction_balance_vector(const Network& net) {
  Vec sum = Vec::Zero(net.dim());
  for (int i = 0; i < 3; ++i) {
    const DiscreteCurve& curve = net.curves[i];
    const Scalars metric = compute_metric(curve);
    NodeField tangent = dx(curve.nodes);
    for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
    const NodeField kappa = d_ds(tangent, metric);
    const NodeField nab_kappa = nabla_s(kappa, metric, tangent);
    sum += nab_kappa.row(0).transpose() - net.lambda[i] * tangent.row(0).transpose();
  }
  return sum;
}

double junction_balance_residual(const Network& net) {
  return junction_balance_vector(net).norm();
}

}  // namespace elasticnet
