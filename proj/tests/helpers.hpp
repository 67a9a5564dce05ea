#pragma once

#include <cmath>
#include <random>

#include "elasticnet/compat.hpp"
#include "elasticnet/curve.hpp"
#include "elasticnet/network.hpp"

namespace elasticnet::testing {

inline DiscreteCurve make_segment(const Vec& a, const Vec& b, int N) {
  DiscreteCurve curve;
  curve.nodes.resize(N + 1, a.size());
  for (int j = 0; j <= N; ++j) {
    const double x = static_cast<double>(j) / N;
    curve.nodes.row(j) = ((1.0 - x) * a + x * b).transpose();
  }
  return curve;
}

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

/// Circle arc of radius R around `center`, polar angle from theta0 to theta1.
inline DiscreteCurve make_circle_arc(double radius, double theta0, double theta1, int N,
                                     const Vec& center = Vec::Zero(2)) {
  DiscreteCurve curve;
  curve.nodes.resize(N + 1, 2);
  for (int j = 0; j <= N; ++j) {
    const double theta = theta0 + (theta1 - theta0) * j / N;
    curve.nodes(j, 0) = center(0) + radius * std::cos(theta);
    curve.nodes(j, 1) = center(1) + radius * std::sin(theta);
  }
  return curve;
}

inline DiscreteCurve make_semicircle(int N) { return make_circle_arc(1.0, 0.0, M_PI, N); }

/// (t, t^2) with t running linearly from t0 to t1.
inline DiscreteCurve make_quadratic(int N, double t0 = 0.0, double t1 = 1.0) {
  DiscreteCurve curve;
  curve.nodes.resize(N + 1, 2);
  for (int j = 0; j <= N; ++j) {
    const double t = t0 + (t1 - t0) * j / N;
    curve.nodes(j, 0) = t;
    curve.nodes(j, 1) = t * t;
  }
  return curve;
}

inline double quadratic_metric(double t, double t0, double t1) {
  return std::abs(t1 - t0) * std::sqrt(1.0 + 4.0 * t * t);
}

/// Curvature vector of (t, t^2) at parameter value t.
inline Vec quadratic_kappa(double t) {
  const double g2 = 1.0 + 4.0 * t * t;
  Vec v(2);
  v << -4.0 * t / (g2 * g2), 2.0 / (g2 * g2);
  return v;
}

/// Smooth wiggly curve: straight chord plus sine modes with decaying
/// amplitudes. Deterministic per seed.
inline DiscreteCurve make_random_smooth(int n, int N, unsigned seed, double amplitude = 0.2) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Vec a = Vec::Zero(n), b = Vec::Zero(n);
  b(0) = 1.0;
  for (int c = 1; c < n; ++c) b(c) = 0.3 * uniform(rng);
  constexpr int kModes = 4;
  Eigen::MatrixXd coeff(kModes, n);
  for (int k = 0; k < kModes; ++k)
    for (int c = 0; c < n; ++c) coeff(k, c) = amplitude * uniform(rng) / ((k + 1) * (k + 1));
  DiscreteCurve curve;
  curve.nodes.resize(N + 1, n);
  for (int j = 0; j <= N; ++j) {
    const double x = static_cast<double>(j) / N;
    Vec p = (1.0 - x) * a + x * b;
    for (int k = 0; k < kModes; ++k)
      p += std::sin((k + 1) * M_PI * x) * coeff.row(k).transpose();
    curve.nodes.row(j) = p.transpose();
  }
  return curve;
}

/// Gentle random curve for gradient checks: a randomized circle arc plus a
/// single small sine mode. High curvature derivatives stay mild, so the
/// h^2 consistency floor of the discrete first-variation formulas sits well
/// under the comparison tolerance.
inline DiscreteCurve make_gentle_random_curve(int N, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  const double radius = 1.5 + 0.4 * uniform(rng);
  const double start = 0.4 * uniform(rng);
  const double span = 0.55 * M_PI + 0.15 * uniform(rng);
  DiscreteCurve curve = make_circle_arc(radius, start, start + span, N);
  const double cx = 0.02 * uniform(rng);
  const double cy = 0.02 * uniform(rng);
  for (int j = 0; j <= N; ++j) {
    const double x = static_cast<double>(j) / N;
    curve.nodes(j, 0) += cx * std::sin(M_PI * x);
    curve.nodes(j, 1) += cy * std::sin(M_PI * x);
  }
  return curve;
}

/// Variation with dominant linear content plus damped sine modes; the mild
/// roughness keeps the finite-difference comparison floor low.
inline NodeField make_gentle_variation(int n, int N, unsigned seed,
                                       bool zero_at_ends = false) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  NodeField eta(N + 1, n);
  for (int c = 0; c < n; ++c) {
    const double c0 = zero_at_ends ? 0.0 : uniform(rng);
    const double c1 = zero_at_ends ? 0.0 : uniform(rng);
    const double m1 = 0.3 * uniform(rng);
    const double m2 = 0.3 * uniform(rng) / 8.0;
    for (int j = 0; j <= N; ++j) {
      const double x = static_cast<double>(j) / N;
      eta(j, c) = c0 * (1.0 - x) + c1 * x + m1 * std::sin(M_PI * x) +
                  m2 * std::sin(2.0 * M_PI * x);
    }
  }
  return eta;
}

/// Smooth variation field; optionally clamped to zero at both endpoints.
inline NodeField make_random_variation(int n, int N, unsigned seed,
                                       bool zero_at_ends = false) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  constexpr int kModes = 3;
  NodeField eta(N + 1, n);
  for (int c = 0; c < n; ++c) {
    const double c0 = zero_at_ends ? 0.0 : uniform(rng);
    const double c1 = zero_at_ends ? 0.0 : uniform(rng);
    double modes[kModes];
    for (double& m : modes) m = uniform(rng);
    for (int j = 0; j <= N; ++j) {
      const double x = static_cast<double>(j) / N;
      double value = c0 * (1.0 - x) + c1 * x;
      for (int k = 0; k < kModes; ++k)
        value += modes[k] * std::sin((k + 1) * M_PI * x) / (k + 1);
      eta(j, c) = value;
    }
  }
  return eta;
}

/// Straight three-spoke star with prescribed in-plane spoke angles.
inline Network make_straight_star(const std::array<double, 3>& angles, double radius, int N,
                                  const std::array<double, 3>& lambda) {
  Network net;
  net.lambda = lambda;
  const Vec junction = Vec::Zero(2);
  for (int i = 0; i < 3; ++i) {
    Vec p(2);
    p << radius * std::cos(angles[i]), radius * std::sin(angles[i]);
    net.curves[i] = make_segment(junction, p, N);
    net.endpoints[i] = p;
  }
  return net;
}

/// The canonical curved acceptance star: equilateral endpoints, junction at
/// the centroid, junction tangents skewed in-plane.
inline Network make_acceptance_star(int N, double radius = 8.0,
                                    double skew = 25.0 * M_PI / 180.0,
                                    const std::array<double, 3>& lambda = {0.1, 0.1, 0.1}) {
  return make_symmetric_star(2, N, radius, skew, lambda);
}

inline std::array<Vec, 3> unit_tangents_120() {
  std::array<Vec, 3> T;
  for (int i = 0; i < 3; ++i) {
    const double angle = M_PI / 2.0 + i * 2.0 * M_PI / 3.0;
    T[i] = vec2(std::cos(angle), std::sin(angle));
  }
  return T;
}

inline std::array<Vec, 3> random_unit_tangents(int n, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::array<Vec, 3> T;
  for (auto& t : T) {
    t.resize(n);
    do {
      for (int c = 0; c < n; ++c) t(c) = gauss(rng);
    } while (t.norm() < 1e-8);
    t /= t.norm();
  }
  return T;
}

}  // namespace elasticnet::testing
