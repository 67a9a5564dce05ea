#include "elasticnet/flow.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "elasticnet/boundary.hpp"
#include "elasticnet/compat.hpp"

namespace elasticnet {

namespace {

constexpr double kEnforceSumTarget = 1e-9;
constexpr double kEnforceKappaTarget = 1e-11;
constexpr double kDefaultImexDt = 1e-3;

NodeField projected_velocity(const GeometricFields& F, double lambda) {
  const int rows = static_cast<int>(F.kappa.rows());
  NodeField v(rows, F.kappa.cols());
  for (int j = 0; j < rows; ++j) {
    const double k2 = F.kappa.row(j).squaredNorm();
    v.row(j) = -F.nabla_kappa[2].row(j) - (0.5 * k2 - lambda) * F.kappa.row(j);
    v.row(j) -= v.row(j).dot(F.tangent.row(j)) * F.tangent.row(j);
  }
  return v;
}

std::shared_ptr<const StateCache> make_cache(const Network& net) {
  auto cache = std::make_shared<StateCache>();
  for (int i = 0; i < 3; ++i) {
    cache->fields[i] = compute_fields(net.curves[i], 2);
    const GeometricFields& F = cache->fields[i];
    cache->velocity[i] = projected_velocity(F, net.lambda[i]);
    cache->dissipation[i] =
        integrate_ds(cache->velocity[i].rowwise().squaredNorm(), F.metric);
    cache->energy.elastic[i] = 0.5 * integrate_ds(F.kappa.rowwise().squaredNorm(), F.metric);
    cache->energy.lengths[i] = F.length;
    cache->energy.weighted_total +=
        cache->energy.elastic[i] + net.lambda[i] * F.length;
  }
  return cache;
}

JunctionState junction_from_cache(const StateCache& cache, double delta_min) {
  std::array<Vec, 3> T, A;
  for (int i = 0; i < 3; ++i) {
    T[i] = cache.fields[i].tangent.row(0).transpose();
    A[i] = cache.fields[i].nabla_kappa[2].row(0).transpose();
  }
  try {
    return make_junction_state(T, A, delta_min, true);
  } catch (const DegenerateJunction&) {
    return make_junction_state(T, A, delta_min, false);
  }
}

struct Motions {
  std::array<NodeField, 3> total;  // V + phi tau over all nodes
  Vec junction_mean;
  double spread = 0.0;
};

// Throws DegenerateJunction when the tangential solve is unavailable.
Motions compute_motions(const StateCache& cache, const JunctionState& junction) {
  if (!junction.solvable)
    throw DegenerateJunction("junction system unsolvable for this state");
  Motions m;
  std::array<Vec, 3> jvel;
  for (int i = 0; i < 3; ++i) {
    const GeometricFields& F = cache.fields[i];
    const int rows = static_cast<int>(F.tangent.rows());
    Scalars phi =
        junction.phi0[i] * (1.0 - F.arclength.array() / F.length).matrix();
    NodeField W = cache.velocity[i];
    for (int j = 0; j < rows; ++j) W.row(j) += phi(j) * F.tangent.row(j);
    m.total[i] = std::move(W);
    jvel[i] = -junction.A[i] + junction.phi0[i] * junction.T[i];
  }
  m.junction_mean = (jvel[0] + jvel[1] + jvel[2]) / 3.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      m.spread = std::max(m.spread, (jvel[i] - jvel[j]).norm());
  return m;
}

void enforce_boundary_inplace(Network& net) {
  const int N = net.segments();
  for (int i = 0; i < 3; ++i)
    net.curves[i].nodes.row(N) = net.endpoints[i].transpose();
  net.set_junction(net.curves[0].nodes.row(0).transpose());
  for (int pass = 0; pass < 6; ++pass) {
    for (auto& curve : net.curves) {
      zero_end_curvature(curve, true, 2);
      zero_end_curvature(curve, false, 2);
    }
    const double sum = reduce_sum_condition(net, kEnforceSumTarget, 2);
    double worst_kappa = 0.0;
    for (const auto& curve : net.curves)
      worst_kappa = std::max({worst_kappa, end_curvature(curve, true).norm(),
                              end_curvature(curve, false).norm()});
    if (sum <= kEnforceSumTarget && worst_kappa <= kEnforceKappaTarget) break;
  }
}

// Builds the new state, enforcing boundaries and the energy-descent check.
FlowState finalize_step(const FlowState& prev, Network next_net, double dt,
                        const FlowConfig& config) {
  enforce_boundary_inplace(next_net);
  for (const auto& curve : next_net.curves)
    if (!curve.nodes.allFinite()) throw BlowUp("non-finite node coordinates after step");

  FlowState next;
  next.net = std::move(next_net);
  next.time = prev.time + dt;
  next.step_count = prev.step_count + 1;
  next.last_dt = dt;
  next.cache = make_cache(next.net);
  next.junction = junction_from_cache(*next.cache, config.halt_on.delta_min);

  const double e_prev = prev.cache->energy.weighted_total;
  const double e_next = next.cache->energy.weighted_total;
  const double tol = config.energy_tol_rate * std::abs(e_prev) * dt +
                     64.0 * std::numeric_limits<double>::epsilon() * std::abs(e_prev);
  if (e_next - e_prev > tol)
    throw StepRejected("energy increased beyond tolerance");
  return next;
}

Network apply_motion(const Network& base, const Motions& m, double dt) {
  Network out = base;
  const int N = base.segments();
  for (int i = 0; i < 3; ++i)
    out.curves[i].nodes.middleRows(1, N - 1) += dt * m.total[i].middleRows(1, N - 1);
  const Vec j_new = base.junction() + dt * m.junction_mean;
  out.set_junction(j_new);
  return out;
}

FlowState advance_explicit(const FlowState& state, double dt, const FlowConfig& config) {
  const Motions k1 = compute_motions(*state.cache, state.junction);
  if (k1.spread > config.halt_on.max_spread)
    throw StepRejected("junction velocity spread above threshold");

  Network next_net;
  if (config.scheme == TimeScheme::Euler) {
    next_net = apply_motion(state.net, k1, dt);
  } else {
    // Classic RK4; intermediate stages reuse the full velocity assembly.
    const auto stage = [&](const Network& net) {
      const auto cache = make_cache(net);
      return compute_motions(*cache, junction_from_cache(*cache, config.halt_on.delta_min));
    };
    const Motions k2 = stage(apply_motion(state.net, k1, dt / 2.0));
    const Motions k3 = stage(apply_motion(state.net, k2, dt / 2.0));
    const Motions k4 = stage(apply_motion(state.net, k3, dt));
    Motions combo;
    for (int i = 0; i < 3; ++i)
      combo.total[i] =
          (k1.total[i] + 2.0 * k2.total[i] + 2.0 * k3.total[i] + k4.total[i]) / 6.0;
    combo.junction_mean = (k1.junction_mean + 2.0 * k2.junction_mean +
                           2.0 * k3.junction_mean + k4.junction_mean) /
                          6.0;
    combo.spread = k1.spread;
    next_net = apply_motion(state.net, combo, dt);
  }
  FlowState next = finalize_step(state, std::move(next_net), dt, config);
  next.last_spread = k1.spread;
  return next;
}

using Sparse = Eigen::SparseMatrix<double>;
using SparseRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Mirrors the difference rows of dx() exactly, matched end stencils included.
Sparse build_dx_matrix(int N) {
  const double h = 1.0 / N;
  const double end[5] = {-2.5, 5.5, -5.0, 2.5, -0.5};
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * N + 10);
  for (int k = 0; k < 5; ++k) {
    trip.emplace_back(0, k, end[k] / h);
    trip.emplace_back(N, N - k, -end[k] / h);
  }
  for (int j = 1; j < N; ++j) {
    trip.emplace_back(j, j - 1, -1.0 / (2.0 * h));
    trip.emplace_back(j, j + 1, 1.0 / (2.0 * h));
  }
  Sparse out(N + 1, N + 1);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Linearly implicit step: the frozen-metric fourth-derivative operator is
// treated implicitly, everything else explicitly; the boundary rows encode
// the endpoint pin, end curvatures, and the third-order junction balance;
// concurrency is exact through a single shared junction unknown.
FlowState advance_imex(const FlowState& state, double dt, const FlowConfig& config) {
  const Motions m = compute_motions(*state.cache, state.junction);
  const int N = state.net.segments();
  const int n = state.net.dim();
  const int dim = 3 * N + 1;
  const auto gidx = [N](int curve, int node) {
    return node == 0 ? 0 : 1 + curve * N + (node - 1);
  };

  const Sparse dxm = build_dx_matrix(N);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * (N + 1) * 12);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dim, n);

  for (int i = 0; i < 3; ++i) {
    const GeometricFields& F = state.cache->fields[i];
    const Sparse m1 = F.metric.cwiseInverse().asDiagonal() * dxm;
    const Sparse m2 = m1 * m1;
    const SparseRow m3 = (m2 * m1).eval();
    const SparseRow m4 = (m2 * m2).eval();
    const SparseRow m2r = m2;
    const SparseRow m1r = m1;
    const NodeField& nodes = state.net.curves[i].nodes;
    const NodeField m4f = m4 * nodes;

    for (int j = 2; j <= N - 2; ++j) {
      const int r = gidx(i, j);
      trip.emplace_back(r, r, 1.0);
      for (SparseRow::InnerIterator it(m4, j); it; ++it)
        trip.emplace_back(r, gidx(i, static_cast<int>(it.col())), dt * it.value());
      rhs.row(r) = nodes.row(j) + dt * (m.total[i].row(j) + m4f.row(j));
    }
    // End curvature rows kappa(0) = 0, kappa(1) = 0.
    for (SparseRow::InnerIterator it(m2r, 0); it; ++it)
      trip.emplace_back(gidx(i, 1), gidx(i, static_cast<int>(it.col())), it.value());
    for (SparseRow::InnerIterator it(m2r, N); it; ++it)
      trip.emplace_back(gidx(i, N - 1), gidx(i, static_cast<int>(it.col())), it.value());
    // Endpoint pin.
    trip.emplace_back(gidx(i, N), gidx(i, N), 1.0);
    rhs.row(gidx(i, N)) = state.net.endpoints[i].transpose();
    // Junction balance row (shared row 0).
    for (SparseRow::InnerIterator it(m3, 0); it; ++it)
      trip.emplace_back(0, gidx(i, static_cast<int>(it.col())), it.value());
    for (SparseRow::InnerIterator it(m1r, 0); it; ++it)
      trip.emplace_back(0, gidx(i, static_cast<int>(it.col())),
                        -state.net.lambda[i] * it.value());
  }

  Sparse system(dim, dim);
  system.setFromTriplets(trip.begin(), trip.end());
  system.makeCompressed();
  Eigen::SparseLU<Sparse> lu;
  lu.analyzePattern(system);
  lu.factorize(system);
  if (lu.info() != Eigen::Success)
    throw LinearSolveFailure("IMEX system factorization failed");

  Network next_net = state.net;
  for (int c = 0; c < n; ++c) {
    const Eigen::VectorXd u = lu.solve(rhs.col(c));
    if (lu.info() != Eigen::Success)
      throw LinearSolveFailure("IMEX solve failed");
    for (int i = 0; i < 3; ++i) {
      next_net.curves[i].nodes(0, c) = u(0);
      for (int j = 1; j <= N; ++j) next_net.curves[i].nodes(j, c) = u(gidx(i, j));
    }
  }

  FlowState next = finalize_step(state, std::move(next_net), dt, config);
  next.last_spread = m.spread;
  return next;
}

double el_residual_from_fields(const GeometricFields& F, double lambda) {
  const int N = static_cast<int>(F.kappa.rows()) - 1;
  const double h = 1.0 / N;
  double sum = 0.0;
  for (int j = 1; j < N; ++j) {
    const double r2 =
        (F.nabla_kappa[2].row(j) +
         (0.5 * F.kappa.row(j).squaredNorm() - lambda) * F.kappa.row(j))
            .squaredNorm();
    const double weight = (j == 1 || j == N - 1) ? 0.5 : 1.0;
    sum += weight * r2 * F.metric(j) * h;
  }
  return std::sqrt(sum);
}

}  // namespace

std::string halt_reason_name(HaltReason reason) {
  switch (reason) {
    case HaltReason::ReachedTEnd: return "t_end";
    case HaltReason::Length: return "Length";
    case HaltReason::Delta: return "Delta";
    case HaltReason::BlowUp: return "BlowUp";
    case HaltReason::StepFailure: return "StepFailure";
  }
  return "unknown";
}

NodeField normal_velocity(const DiscreteCurve& curve, double lambda) {
  return projected_velocity(compute_fields(curve, 2), lambda);
}

Scalars tangential_field(const DiscreteCurve& curve, double phi_at_junction) {
  const Scalars metric = compute_metric(curve);
  const Scalars s = cumulative_arclength(metric);
  const double length = s(s.size() - 1);
  return phi_at_junction * (1.0 - s.array() / length).matrix();
}

Vec junction_velocity(const Network& net, double* spread) {
  const auto cache = make_cache(net);
  const JunctionState junction = junction_from_cache(*cache, kDefaultDeltaMin);
  if (!junction.solvable) throw DegenerateJunction("junction system unsolvable");
  const Motions m = compute_motions(*cache, junction);
  if (spread) *spread = m.spread;
  return m.junction_mean;
}

FlowState make_flow_state(Network net, const FlowConfig& config) {
  net.validate(config.allow_zero_lambda);
  FlowState state;
  state.net = std::move(net);
  state.cache = make_cache(state.net);
  state.junction = junction_from_cache(*state.cache, config.halt_on.delta_min);
  return state;
}

FlowState step_explicit(const FlowState& state, double dt, const FlowConfig& config) {
  return advance_explicit(state, dt, config);
}

FlowState step_imex(const FlowState& state, double dt, const FlowConfig& config) {
  return advance_imex(state, dt, config);
}

Network enforce_boundary(const Network& net) {
  Network out = net;
  enforce_boundary_inplace(out);
  return out;
}

double explicit_stability_dt(const Network& net, const FlowConfig& config) {
  double h_min = std::numeric_limits<double>::infinity();
  for (const auto& curve : net.curves) {
    const Scalars metric = compute_metric(curve);
    h_min = std::min(h_min, metric.minCoeff() / curve.segments());
  }
  return config.safety * h_min * h_min * h_min * h_min / config.stability_constant;
}

double tangential_identity_residual(const FlowState& state) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const GeometricFields& F = state.cache->fields[i];
    const double phi0 = state.junction.phi0[i];
    const Scalars phi = phi0 * (1.0 - F.arclength.array() / F.length).matrix();
    const Scalars dphi = d_ds(phi, F.metric);
    worst = std::max(worst, (dphi.array() + phi0 / F.length).abs().maxCoeff());
  }
  return worst;
}

RunResult run(const FlowState& initial, const FlowConfig& config, const DiagSink& sink) {
  FlowState cur = initial;
  if (!cur.cache) cur = make_flow_state(cur.net, config);
  if (!config.force) {
    const CompatReport report = check_initial(cur.net);
    if (!report.passes(CompatThresholds{}))
      throw InfeasibleGeometry("initial data fails the compatibility approval");
  }

  RunResult result;
  RunStats& stats = result.stats;
  const double e0 = cur.cache->energy.weighted_total;
  double min_length0 = std::numeric_limits<double>::infinity();
  double total_length0 = 0.0;
  for (double l : cur.cache->energy.lengths) {
    min_length0 = std::min(min_length0, l);
    total_length0 += l;
  }
  const double length_halt =
      std::max(config.halt_on.min_length_rel * min_length0, config.halt_on.min_length_abs);
  const double lambda_min = *std::min_element(cur.net.lambda.begin(), cur.net.lambda.end());

  double e_prev_step = e0;
  double d_prev_step =
      cur.cache->dissipation[0] + cur.cache->dissipation[1] + cur.cache->dissipation[2];
  double dt_last = 0.0;

  const auto make_record = [&](const FlowState& st, bool first) {
    DiagRecord rec;
    rec.t = st.time;
    rec.E_total = st.cache->energy.weighted_total;
    rec.E = st.cache->energy.elastic;
    rec.L = st.cache->energy.lengths;
    const double d_cur =
        st.cache->dissipation[0] + st.cache->dissipation[1] + st.cache->dissipation[2];
    if (!first && dt_last > 0.0) {
      rec.dissipation_lhs = (st.cache->energy.weighted_total - e_prev_step) / dt_last;
      rec.dissipation_rhs = -0.5 * (d_prev_step + d_cur);
    }
    rec.det = st.junction.det;
    rec.delta = st.junction.delta;
    rec.span_dim = st.junction.span_dim;
    rec.phi0 = st.junction.phi0;
    rec.el_residual = 0.0;
    for (int i = 0; i < 3; ++i)
      rec.el_residual += el_residual_from_fields(st.cache->fields[i], st.net.lambda[i]);
    rec.spread = st.last_spread;
    return rec;
  };

  const auto aggregate_monitors = [&](const FlowState& st) {
    stats.min_det = std::min(stats.min_det, st.junction.det);
    stats.min_delta = std::min(stats.min_delta, st.junction.delta);
    stats.max_spread = std::max(stats.max_spread, st.last_spread);
    for (int i = 0; i < 3; ++i) {
      stats.min_length = std::min(stats.min_length, st.cache->energy.lengths[i]);
      stats.max_kappa_end = std::max({stats.max_kappa_end,
                                      end_curvature(st.net.curves[i], true).norm(),
                                      end_curvature(st.net.curves[i], false).norm()});
      stats.max_nabla2_kappa_fixed_end = std::max(
          stats.max_nabla2_kappa_fixed_end, end_nabla2_kappa(st.net.curves[i], false).norm());
      stats.max_endpoint_drift =
          std::max(stats.max_endpoint_drift,
                   (st.net.curves[i].nodes.row(st.net.segments()) -
                    st.net.endpoints[i].transpose())
                       .norm());
      for (int c = 0; c < st.net.dim(); ++c) {
        if (st.net.curves[i].nodes(0, c) != st.net.curves[0].nodes(0, c))
          stats.concurrency_exact = false;
      }
    }
  };

  const auto check_halt = [&](const FlowState& st) -> bool {
    for (int i = 0; i < 3; ++i) {
      if (st.cache->energy.lengths[i] < length_halt) {
        result.halt = HaltReason::Length;
        result.halt_detail = "curve length below threshold";
        return true;
      }
    }
    const double total_length = st.cache->energy.lengths[0] + st.cache->energy.lengths[1] +
                                st.cache->energy.lengths[2];
    if (config.allow_zero_lambda) {
      if (total_length > total_length0 * (1.0 + config.length_growth_rate * st.time) +
                             1e-12 * total_length0) {
        result.halt = HaltReason::Length;
        result.halt_detail = "length growth budget exceeded";
        return true;
      }
    } else if (lambda_min > 0.0 && total_length > 4.0 * e0 / lambda_min) {
      result.halt = HaltReason::Length;
      result.halt_detail = "length upper bound exceeded";
      return true;
    }
    if (st.junction.span_dim < 2) {
      result.halt = HaltReason::Delta;
      result.halt_detail = "span";
      return true;
    }
    if (st.junction.delta < config.halt_on.delta_min || !st.junction.solvable) {
      result.halt = HaltReason::Delta;
      result.halt_detail = "delta";
      return true;
    }
    double max_kappa = 0.0;
    for (int i = 0; i < 3; ++i)
      max_kappa =
          std::max(max_kappa, st.cache->fields[i].kappa.rowwise().norm().maxCoeff());
    if (max_kappa > config.halt_on.max_kappa) {
      result.halt = HaltReason::BlowUp;
      result.halt_detail = "curvature above cap";
      return true;
    }
    return false;
  };

  aggregate_monitors(cur);
  stats.max_tangential_identity =
      std::max(stats.max_tangential_identity,
               cur.junction.solvable ? tangential_identity_residual(cur) : 0.0);
  long last_emitted = -1;
  if (sink) {
    sink(make_record(cur, true), cur);
    last_emitted = cur.step_count;
  }

  bool halted = false;
  while (true) {
    if (check_halt(cur)) {
      halted = true;
      break;
    }
    if (cur.time >= config.t_end * (1.0 - 1e-12)) {
      result.halt = HaltReason::ReachedTEnd;
      break;
    }

    double dt;
    if (config.dt_mode == DtMode::Explicit) {
      const double auto_dt = explicit_stability_dt(cur.net, config);
      dt = config.dt_initial > 0.0 ? std::min(config.dt_initial, auto_dt) : auto_dt;
    } else {
      dt = config.dt_initial > 0.0 ? config.dt_initial : kDefaultImexDt;
    }
    dt = std::min(dt, config.t_end - cur.time);

    FlowState next;
    bool stepped = false;
    for (int attempt = 0; attempt < 10 && !stepped; ++attempt) {
      try {
        next = (config.dt_mode == DtMode::Explicit) ? advance_explicit(cur, dt, config)
                                                    : advance_imex(cur, dt, config);
        stepped = true;
      } catch (const StepRejected&) {
        ++stats.rejected_steps;
        dt /= 2.0;
      } catch (const DegenerateJunction& err) {
        result.halt = HaltReason::Delta;
        result.halt_detail = err.what();
        halted = true;
        break;
      } catch (const BlowUp& err) {
        result.halt = HaltReason::BlowUp;
        result.halt_detail = err.what();
        halted = true;
        break;
      } catch (const DegenerateCurve& err) {
        result.halt = HaltReason::BlowUp;
        result.halt_detail = err.what();
        halted = true;
        break;
      } catch (const LinearSolveFailure& err) {
        result.halt = HaltReason::StepFailure;
        result.halt_detail = err.what();
        halted = true;
        break;
      }
    }
    if (halted) break;
    if (!stepped) {
      result.halt = HaltReason::StepFailure;
      result.halt_detail = "step rejected repeatedly";
      break;
    }

    stats.max_step_energy_increase =
        std::max(stats.max_step_energy_increase,
                 next.cache->energy.weighted_total - cur.cache->energy.weighted_total);
    stats.max_dt = std::max(stats.max_dt, next.last_dt);
    ++stats.accepted_steps;

    e_prev_step = cur.cache->energy.weighted_total;
    d_prev_step =
        cur.cache->dissipation[0] + cur.cache->dissipation[1] + cur.cache->dissipation[2];
    dt_last = next.last_dt;
    cur = std::move(next);
    aggregate_monitors(cur);

    if (config.output_every > 0 && cur.step_count % config.output_every == 0) {
      if (cur.junction.solvable)
        stats.max_tangential_identity =
            std::max(stats.max_tangential_identity, tangential_identity_residual(cur));
      const DiagRecord rec = make_record(cur, false);
      const double balance = junction_balance_vector_local(cur.net).norm();
      if (rec.el_residual + balance < config.quasi_stationary_tol) result.converged = true;
      if (sink) {
        sink(rec, cur);
        last_emitted = cur.step_count;
      }
    }
  }

  if (sink && last_emitted != cur.step_count) sink(make_record(cur, false), cur);
  result.final_state = std::move(cur);
  return result;
}

}  // namespace elasticnet
