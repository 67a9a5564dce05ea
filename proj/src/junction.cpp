#include "elasticnet/junction.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace elasticnet {

namespace {

constexpr double kUnitTangentTol = 1e-10;

void require_unit(const std::array<Vec, 3>& T) {
  for (const auto& t : T)
    if (std::abs(t.norm() - 1.0) > kUnitTangentTol)
      throw NonUnitTangent("junction tangent is not unit length");
}

std::array<double, 3> right_hand_side(const std::array<Vec, 3>& T,
                                      const std::array<Vec, 3>& A) {
  std::array<double, 3> rhs{};
  for (int i = 0; i < 3; ++i)
    rhs[i] = -(A[(i + 1) % 3] + A[(i + 2) % 3]).dot(T[i]);
  return rhs;
}

}  // namespace

Eigen::Matrix3d junction_matrix(const std::array<Vec, 3>& T) {
  require_unit(T);
  Eigen::Matrix3d m;
  const double t12 = T[0].dot(T[1]);
  const double t13 = T[0].dot(T[2]);
  const double t23 = T[1].dot(T[2]);
  m << 2.0, -t12, -t13,
      -t12, 2.0, -t23,
      -t13, -t23, 2.0;
  return m;
}

double junction_determinant(const std::array<Vec, 3>& T) {
  const double t12 = T[0].dot(T[1]);
  const double t13 = T[0].dot(T[2]);
  const double t23 = T[1].dot(T[2]);
  return 8.0 - 2.0 * (t12 * t12 + t13 * t13 + t23 * t23) - 2.0 * t12 * t23 * t13;
}

std::array<double, 3> solve_tangential_speeds(const std::array<Vec, 3>& T,
                                              const std::array<Vec, 3>& A,
                                              double delta_min) {
  require_unit(T);
  const double det = junction_determinant(T);
  if (det < 2.0 * delta_min)
    throw DegenerateJunction("junction determinant below 2*delta_min");
  const double t12 = T[0].dot(T[1]);
  const double t13 = T[0].dot(T[2]);
  const double t23 = T[1].dot(T[2]);
  Eigen::Matrix3d inv;
  inv << 4.0 - t23 * t23, 2.0 * t12 + t13 * t23, 2.0 * t13 + t12 * t23,
      2.0 * t12 + t13 * t23, 4.0 - t13 * t13, t12 * t13 + 2.0 * t23,
      2.0 * t13 + t12 * t23, t12 * t13 + 2.0 * t23, 4.0 - t12 * t12;
  inv /= det;
  const auto rhs = right_hand_side(T, A);
  const Eigen::Vector3d phi = inv * Eigen::Vector3d(rhs[0], rhs[1], rhs[2]);
  return {phi(0), phi(1), phi(2)};
}

std::array<double, 3> solve_tangential_speeds_pivoted(const std::array<Vec, 3>& T,
                                                      const std::array<Vec, 3>& A,
                                                      double delta_min) {
  require_unit(T);
  if (junction_determinant(T) < 2.0 * delta_min)
    throw DegenerateJunction("junction determinant below 2*delta_min");
  const Eigen::Matrix3d m = junction_matrix(T);
  const auto rhs = right_hand_side(T, A);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (!lu.isInvertible()) throw LinearSolveFailure("pivoted junction solve failed");
  const Eigen::Vector3d phi = lu.solve(Eigen::Vector3d(rhs[0], rhs[1], rhs[2]));
  return {phi(0), phi(1), phi(2)};
}

int span_dimension(const std::array<Vec, 3>& T, double tol) {
  const int n = static_cast<int>(T[0].size());
  Eigen::MatrixXd stacked(3, n);
  for (int i = 0; i < 3; ++i) stacked.row(i) = T[i].transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return rank;
}

double angle_margin(const std::array<Vec, 3>& T) {
  const double t12 = std::abs(T[0].dot(T[1]));
  const double t13 = std::abs(T[0].dot(T[2]));
  const double t23 = std::abs(T[1].dot(T[2]));
  const double margin = 1.0 - std::min({t12, t13, t23});
  return std::clamp(margin, 0.0, 1.0);
}

JunctionState make_junction_state(const std::array<Vec, 3>& T, const std::array<Vec, 3>& A,
                                  double delta_min, bool solve) {
  require_unit(T);
  JunctionState state;
  state.T = T;
  state.A = A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) state.gram(i, j) = T[i].dot(T[j]);
  state.det = junction_determinant(T);
  state.delta = angle_margin(T);
  state.span_dim = span_dimension(T);
  if (solve) {
    state.phi0 = solve_tangential_speeds(T, A, delta_min);
    state.solvable = true;
  }
  return state;
}

}  // namespace elasticnet
