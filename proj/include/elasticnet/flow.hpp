#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "elasticnet/junction.hpp"
#include "elasticnet/network.hpp"

namespace elasticnet {

enum class DtMode { Explicit, Imex };
enum class TimeScheme { Euler, Rk4 };

/// Forward-Euler stability constant for the leading fourth-order operator:
/// dt_max ~ h^4 / C with h the arclength node spacing. Determined empirically
/// on the symmetric star family (theory for the pure biharmonic symbol
/// gives 8; the measured constant includes the junction coupling).
inline constexpr double kExplicitStabilityConstant = 12.0;

struct HaltThresholds {
  double min_length_rel = 1e-3;   // fraction of initial min curve length
  double min_length_abs = 0.0;
  double delta_min = kDefaultDeltaMin;
  double max_kappa = 1e8;
  double max_spread = 1e6;
};

struct FlowConfig {
  double dt_initial = 0.0;  // 0 = automatic from the stability bound
  DtMode dt_mode = DtMode::Explicit;
  TimeScheme scheme = TimeScheme::Euler;
  double safety = 0.4;
  double stability_constant = kExplicitStabilityConstant;
  double t_end = 1.0;
  HaltThresholds halt_on;
  int output_every = 100;
  double energy_tol_rate = 1e-8;     // per unit time, relative to the energy
  bool allow_zero_lambda = false;
  double length_growth_rate = 1.0;   // budget slope for the lambda >= 0 mode
  double quasi_stationary_tol = 1e-6;
  bool force = false;  // skip the initial compatibility approval
};

/// Fields, velocities and energies derived from one network snapshot.
struct StateCache {
  std::array<GeometricFields, 3> fields;
  std::array<NodeField, 3> velocity;  // projected normal velocity V_i
  std::array<double, 3> dissipation;  // int |V_i|^2 ds
  EnergyBreakdown energy;
};

struct FlowState {
  Network net;
  double time = 0.0;
  long step_count = 0;
  JunctionState junction;
  double last_dt = 0.0;
  double last_spread = 0.0;  // junction velocity spread of the producing step
  std::shared_ptr<const StateCache> cache;  // derived, always present
};

enum class HaltReason { ReachedTEnd, Length, Delta, BlowUp, StepFailure };

std::string halt_reason_name(HaltReason reason);

/// One diagnostics sample; mirrors the CSV columns.
struct DiagRecord {
  double t = 0.0;
  double E_total = 0.0;
  std::array<double, 3> E{};  // per-curve elastic energies
  std::array<double, 3> L{};
  double dissipation_lhs = 0.0;
  double dissipation_rhs = 0.0;
  double det = 0.0;
  double delta = 0.0;
  int span_dim = 0;
  std::array<double, 3> phi0{};
  double el_residual = 0.0;
  double spread = 0.0;
};

/// Worst-case monitors aggregated over every accepted step of a run.
struct RunStats {
  double max_step_energy_increase = -1e300;
  long accepted_steps = 0;
  long rejected_steps = 0;
  double max_kappa_end = 0.0;
  double max_nabla2_kappa_fixed_end = 0.0;
  double max_endpoint_drift = 0.0;
  bool concurrency_exact = true;
  double max_tangential_identity = 0.0;  // sampled steps
  double max_spread = 0.0;
  double max_dt = 0.0;
  double min_det = 1e300;
  double min_delta = 1e300;
  double min_length = 1e300;
};

struct RunResult {
  FlowState final_state;
  HaltReason halt = HaltReason::ReachedTEnd;
  std::string halt_detail;
  bool converged = false;  // quasi-stationarity observed
  RunStats stats;
};

using DiagSink = std::function<void(const DiagRecord&, const FlowState&)>;

/// -nabla_s^2 kappa - (1/2)|kappa|^2 kappa + lambda kappa, projected normal.
NodeField normal_velocity(const DiscreteCurve& curve, double lambda);

/// Linear-in-arclength tangential speed with value phi_at_junction at x = 0
/// and zero at x = 1.
Scalars tangential_field(const DiscreteCurve& curve, double phi_at_junction);

/// Mean of the three junction velocities -A_i + phi_i(0) T_i; the max
/// pairwise spread is written through the optional pointer.
Vec junction_velocity(const Network& net, double* spread = nullptr);

/// Builds the derived cache and junction state (solve attempted; a
/// degenerate junction leaves junction.solvable false instead of throwing).
FlowState make_flow_state(Network net, const FlowConfig& config = {});

FlowState step_explicit(const FlowState& state, double dt, const FlowConfig& config = {});
FlowState step_imex(const FlowState& state, double dt, const FlowConfig& config = {});

/// Pins endpoints, shares the junction node, zeroes the discrete end
/// curvatures and reduces the third-order junction balance.
Network enforce_boundary(const Network& net);

/// safety * h_min^4 / stability_constant, h_min the min arclength spacing.
double explicit_stability_dt(const Network& net, const FlowConfig& config = {});

/// Max over curves and nodes of |d_s phi_i + phi_i(0)/L_i|.
double tangential_identity_residual(const FlowState& state);

RunResult run(const FlowState& initial, const FlowConfig& config, const DiagSink& sink = {});

}  // namespace elasticnet
