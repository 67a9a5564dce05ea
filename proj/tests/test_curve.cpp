#include <doctest.h>

#include <cmath>

#include "elasticnet/curve.hpp"
#include "helpers.hpp"

using namespace elasticnet;
using namespace elasticnet::testing;

namespace {

double arc_spacing(const DiscreteCurve& curve) {
  return curve_length(curve) / curve.segments();
}

// Max node error of the metric on a circle arc (the arc's metric is exactly
// constant, so the discrete error field is genuinely second order).
double circle_metric_error(int N) {
  const double theta = M_PI / 2.0;
  const DiscreteCurve arc = make_circle_arc(1.0, 0.1, 0.1 + theta, N);
  const Scalars metric = compute_metric(arc);
  return (metric.array() - theta).abs().maxCoeff();
}

double circle_kappa_error(int N, double radius) {
  const DiscreteCurve arc = make_circle_arc(radius, 0.0, M_PI / 2.0, N);
  const NodeField kappa = compute_curvature(arc);
  double worst = 0.0;
  for (int j = 0; j <= N; ++j)
    worst = std::max(worst, std::abs(kappa.row(j).norm() - 1.0 / radius));
  return worst;
}

// Max node error of the curvature vector of (t, t^2) against the analytic
// formula; even N keeps the node layout aligned across refinements.
double quadratic_kappa_error(int N) {
  const DiscreteCurve curve = make_quadratic(N, -0.5, 0.5);
  const NodeField kappa = compute_curvature(curve);
  double worst = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double t = -0.5 + static_cast<double>(j) / N;
    worst = std::max(worst, (kappa.row(j).transpose() - quadratic_kappa(t)).norm());
  }
  return worst;
}

// Analytic nabla_s kappa of (t, t^2): (dk/ds) times the unit normal.
Vec quadratic_nabla_kappa(double t) {
  const double g2 = 1.0 + 4.0 * t * t;
  const double dk_ds = -24.0 * t / (g2 * g2 * g2);
  Vec normal(2);
  normal << -2.0 * t / std::sqrt(g2), 1.0 / std::sqrt(g2);
  return dk_ds * normal;
}

double quadratic_nabla_kappa_error(int N) {
  const DiscreteCurve curve = make_quadratic(N, -0.5, 0.5);
  const NodeField nk = nabla_s_power(curve, 1);
  double worst = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double t = -0.5 + static_cast<double>(j) / N;
    worst = std::max(worst, (nk.row(j).transpose() - quadratic_nabla_kappa(t)).norm());
  }
  return worst;
}

double circle_nabla_kappa_error(int N) {
  const DiscreteCurve arc = make_circle_arc(1.0, 0.2, 0.2 + M_PI / 2.0, N);
  const NodeField nk = nabla_s_power(arc, 1);
  return nk.rowwise().norm().maxCoeff();
}

}  // namespace

TEST_CASE("metric of a straight segment is one") {
  const DiscreteCurve seg = make_segment(vec2(0, 0), vec2(1, 0), 64);
  const Scalars metric = compute_metric(seg);
  for (int j = 0; j < metric.size(); ++j) CHECK(metric(j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("metric of the semicircle is pi") {
  const DiscreteCurve semi = make_semicircle(200);
  const Scalars metric = compute_metric(semi);
  for (int j = 0; j < metric.size(); ++j) CHECK(std::abs(metric(j) - M_PI) < 1e-3);
}

TEST_CASE("metric error on a circle arc shrinks at second order") {
  // The analytic metric of (t, t^2) is reproduced exactly by these stencils,
  // so the quadratic cannot probe the metric's convergence; the arc can.
  const DiscreteCurve quad = make_quadratic(128, 0.0, 1.0);
  const Scalars metric = compute_metric(quad);
  for (int j = 0; j <= 128; ++j) {
    const double t = static_cast<double>(j) / 128;
    CHECK(std::abs(metric(j) - quadratic_metric(t, 0.0, 1.0)) < 1e-12);
  }
  const double ratio = circle_metric_error(100) / circle_metric_error(200);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("degenerate curves are rejected") {
  DiscreteCurve bad = make_segment(vec2(0, 0), vec2(1, 0), 32);
  bad.nodes.row(5) = bad.nodes.row(4);
  CHECK_THROWS_AS(bad.validate(), DegenerateCurve);

  // All interior nodes collapsed near the start: the metric dips under the
  // degeneracy threshold even though consecutive nodes stay distinct.
  DiscreteCurve pinched = make_segment(vec2(0, 0), vec2(1, 0), 32);
  for (int j = 1; j < 32; ++j) pinched.nodes(j, 0) = 1e-13 * j;
  CHECK_THROWS_AS(compute_metric(pinched), DegenerateCurve);
}

TEST_CASE("tangent of a segment and the semicircle") {
  const DiscreteCurve seg = make_segment(vec2(0, 0), vec2(2, 0), 40);
  const NodeField tau = compute_tangent(seg);
  CHECK(tau(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(tau(0, 1)) < 1e-13);

  const NodeField tau_semi = compute_tangent(make_semicircle(200));
  CHECK(std::abs(tau_semi(0, 0)) < 1e-3);
  CHECK(tau_semi(0, 1) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("tangents are unit to machine precision on random curves") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const DiscreteCurve curve = make_random_smooth(3, 150, seed);
    const NodeField tau = compute_tangent(curve);
    for (int j = 0; j < tau.rows(); ++j)
      CHECK(std::abs(tau.row(j).norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("curvature of a straight segment vanishes") {
  const NodeField kappa = compute_curvature(make_segment(vec2(0, 0), vec2(3, 1), 50));
  CHECK(kappa.rowwise().norm().maxCoeff() < 1e-10);
}

TEST_CASE("curvature magnitude of a radius-2 arc is one half") {
  // Constant-speed arcs enjoy extra error cancellation, so only smallness
  // and decay are asserted here; the clean second-order ratio is measured
  // on the quadratic below.
  const double h = (M_PI / 2.0 * 2.0) / 100.0;
  const double e100 = circle_kappa_error(100, 2.0);
  CHECK(e100 < h * h);
  CHECK(circle_kappa_error(200, 2.0) < e100 / 2.0);
}

TEST_CASE("curvature error on the quadratic shrinks at second order") {
  const double ratio = quadratic_kappa_error(100) / quadratic_kappa_error(200);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("curvature of the parabola at the apex is (0, 2)") {
  const int N = 100;  // even, so a node sits at t = 0
  const DiscreteCurve parabola = make_quadratic(N, -0.5, 0.5);
  const NodeField kappa = compute_curvature(parabola);
  const Vec expected = quadratic_kappa(0.0);
  CHECK((kappa.row(N / 2).transpose() - expected).norm() < 1e-3);
}

TEST_CASE("nabla_s of kappa vanishes on circle arcs") {
  const double h = (M_PI / 2.0) / 100.0;
  const double e100 = circle_nabla_kappa_error(100);
  CHECK(e100 < 5.0 * h * h);
  CHECK(circle_nabla_kappa_error(200) < e100 / 2.0);
}

TEST_CASE("nabla_s kappa error on the quadratic shrinks at second order") {
  const double ratio = quadratic_nabla_kappa_error(100) / quadratic_nabla_kappa_error(200);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("nabla_s of a constant field along a segment vanishes") {
  const DiscreteCurve seg = make_segment(vec2(0, 0), vec2(1, 1), 40);
  NodeField field(41, 2);
  for (int j = 0; j <= 40; ++j) field.row(j) << 0.3, -0.7;
  // Constant fields are not normal, but the derivative is still zero.
  CHECK(nabla_s(field, seg).rowwise().norm().maxCoeff() < 1e-11);
}

TEST_CASE("nabla_s output is orthogonal to the tangent") {
  const DiscreteCurve curve = make_random_smooth(2, 120, 7);
  const NodeField tau = compute_tangent(curve);
  const NodeField nk = nabla_s_power(curve, 1);
  for (int j = 0; j < nk.rows(); ++j) CHECK(std::abs(nk.row(j).dot(tau.row(j))) < 1e-12);
}

TEST_CASE("nabla_s_power order zero returns kappa and high orders are capped") {
  const DiscreteCurve curve = make_random_smooth(2, 80, 11);
  const NodeField kappa = compute_curvature(curve);
  const NodeField same = nabla_s_power(curve, 0);
  CHECK((kappa - same).norm() == 0.0);
  CHECK_THROWS_AS(nabla_s_power(curve, 5), OrderTooHigh);
}

TEST_CASE("second curvature derivative on the parabola matches a dense grid") {
  // Reference at N = 1600 restricted to the shared coarse nodes. High
  // derivatives keep clean second order away from a boundary layer; the
  // one-sided rows degrade gracefully and are monitored elsewhere.
  const int kRef = 1600;
  const NodeField ref = nabla_s_power(make_quadratic(kRef, -0.5, 0.5), 2);
  auto error_at = [&](int N) {
    const NodeField coarse = nabla_s_power(make_quadratic(N, -0.5, 0.5), 2);
    const int stride = kRef / N;
    double worst = 0.0;
    for (int j = 5; j <= N - 5; ++j)
      worst = std::max(worst, (coarse.row(j) - ref.row(j * stride)).norm());
    return worst;
  };
  // The apex carries |nabla^4 kappa| of order 10^3, so the absolute level
  // is coarse there; the refinement ratio is the real assertion.
  const double e100 = error_at(100);
  const double e200 = error_at(200);
  CHECK(e100 < 0.15);
  CHECK(e100 / e200 > 3.0);
  CHECK(e100 / e200 < 5.0);
}

TEST_CASE("conversion identity residual vanishes on straight segments") {
  CHECK(partial_s_kappa_identity_residual(make_segment(vec2(0, 0), vec2(2, 1), 64)) < 1e-10);
}

TEST_CASE("conversion identity residual decays at second order") {
  auto residual_circle = [](int N) {
    return partial_s_kappa_identity_residual(make_circle_arc(1.0, 0.0, M_PI / 2.0, N));
  };
  const double h100 = M_PI / 2.0 / 100.0;
  CHECK(residual_circle(100) < 5.0 * h100 * h100);
  CHECK(residual_circle(200) < residual_circle(100) / 2.0);

  auto residual_wavy = [](int N) {
    return partial_s_kappa_identity_residual(make_random_smooth(2, N, 21));
  };
  const double wavy_ratio = residual_wavy(100) / residual_wavy(200);
  CHECK(wavy_ratio > 3.0);
  CHECK(wavy_ratio < 5.0);
}

TEST_CASE("length of simple curves") {
  CHECK(curve_length(make_segment(vec2(0, 0), vec2(3, 4), 32)) ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(std::abs(curve_length(make_semicircle(200)) - M_PI) < 1e-3);
  CHECK(std::abs(curve_length(make_circle_arc(2.0, 0.0, M_PI / 2.0, 200)) - M_PI) < 1e-3);
}

TEST_CASE("resampling an already uniform curve barely moves nodes") {
  const DiscreteCurve arc = make_circle_arc(1.0, 0.0, M_PI, 100);
  const DiscreteCurve resampled = resample_by_arclength(arc);
  const double h = arc_spacing(arc);
  CHECK((resampled.nodes - arc.nodes).rowwise().norm().maxCoeff() < h * h);
}

TEST_CASE("resampling restores uniform spacing on a stretched segment") {
  DiscreteCurve stretched;
  const int N = 100;
  stretched.nodes.resize(N + 1, 2);
  for (int j = 0; j <= N; ++j) {
    const double x = static_cast<double>(j) / N;
    const double q = 0.5 * (x + x * x);  // monotone reparametrization
    stretched.nodes(j, 0) = 2.0 * q;
    stretched.nodes(j, 1) = 0.0;
  }
  const double length_before = curve_length(stretched);
  const DiscreteCurve uniform = resample_by_arclength(stretched);
  const double length_after = curve_length(uniform);
  CHECK(std::abs(length_after - length_before) < 1e-10);
  const Scalars metric = compute_metric(uniform);
  CHECK((metric.maxCoeff() - metric.minCoeff()) < 1e-6 * metric.maxCoeff());
}

TEST_CASE("elastic-energy stability of resampling on a clustered semicircle") {
  DiscreteCurve clustered;
  const int N = 200;
  clustered.nodes.resize(N + 1, 2);
  for (int j = 0; j <= N; ++j) {
    const double x = static_cast<double>(j) / N;
    const double theta = M_PI * (x + 0.25 * std::sin(M_PI * x) / M_PI);
    clustered.nodes(j, 0) = std::cos(theta);
    clustered.nodes(j, 1) = std::sin(theta);
  }
  const DiscreteCurve uniform = resample_by_arclength(clustered);
  auto elastic = [](const DiscreteCurve& c) {
    const Scalars metric = compute_metric(c);
    NodeField tangent = dx(c.nodes);
    for (int j = 0; j < tangent.rows(); ++j) tangent.row(j) /= metric(j);
    const NodeField kappa = d_ds(tangent, metric);
    return 0.5 * integrate_ds(kappa.rowwise().squaredNorm(), metric);
  };
  const double before = elastic(clustered);
  const double after = elastic(uniform);
  CHECK(std::abs(after - before) <= 0.01 * before);
  CHECK(std::abs(curve_length(uniform) - curve_length(clustered)) <
        0.01 * curve_length(clustered));
}
