#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chred/poisson.hpp"
#include "chred/reduce.hpp"

namespace chred {

/// Fiber-preserving map on a phase space whose first `base_dim` coordinates
/// are base coordinates (base_dim may be zero for reduced phase spaces,
/// making the whole space a fiber).
struct FiberMap {
  int base_dim = 0;
  VectorFn map_fn;
  MatrixFn jac_fn;  // optional analytic Jacobian
  double fd_step = kFdStep;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return map_fn(x); }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    return jac_fn ? jac_fn(x) : central_jacobian(map_fn, x, fd_step);
  }

  static FiberMap identity(int base_dim, int phase_dim);
  /// (q, p) -> (q, 0): its lift contribution vanishes identically, so this
  /// is the canonical "no force" map.
  static FiberMap zero_section(int base_dim, int phase_dim);
  /// (q, p) -> (q, A p).
  static FiberMap fiber_linear(int base_dim, const Eigen::MatrixXd& a);
  /// (q, p) -> (q, p + c).
  static FiberMap fiber_translation(int base_dim, const Eigen::VectorXd& c);
};

struct FiberPreservationResult {
  bool fiber_preserving = false;
  double max_residual = 0.0;
};

/// Base components unchanged at every sampled point.
FiberPreservationResult is_fiber_preserving(
    const FiberMap& m, const std::vector<Eigen::VectorXd>& points,
    double tol = 1e-9);

/// Controlled system on a Poisson phase space: Hamiltonian, optional
/// fiber-preserving force, optional control subset and control law.
/// Dynamics: X = B dH + vlift(F) + vlift(u).
struct CHSystem {
  int base_dim = 0;
  PoissonStructure phase;
  ScalarField hamiltonian;
  std::optional<FiberMap> force;
  std::optional<Submanifold> control_subset;
  std::optional<FiberMap> control_law;

  int phase_dim() const { return phase.dim; }
};

/// Vertical lift of the dynamics vector X(x) through the fiber-preserving M:
/// pushes X(x) forward by T_x M and keeps the fiber component (vector-space
/// fibers transport identically along straight lines). The alternative
/// evaluation order pushes X(M(x)) forward by T_{M(x)} M instead; the two
/// readings coincide for M = identity.
Eigen::VectorXd vertical_lift(const FiberMap& m, const VectorField& x_field,
                              const Eigen::VectorXd& x,
                              bool evaluate_at_image = false,
                              double fiber_tol = 1e-9);

/// Closed-loop field B dH + vlift(F) + vlift(u); `u` overrides the system's
/// stored control law and must be valued in the control subset when one is
/// present. Throws when no control law is available from either source.
VectorField closed_loop_field(const CHSystem& sys,
                              const std::optional<FiberMap>& u = std::nullopt,
                              bool evaluate_at_image = false);

/// Closed-loop field with the control contribution supplied directly as a
/// vertical term (used when only the lift value of a control is known).
VectorField closed_loop_field_with_term(const CHSystem& sys,
                                        const VectorField& vertical_term,
                                        bool evaluate_at_image = false);

/// Drift X_H + vlift(F) without any control.
VectorField open_loop_field(const CHSystem& sys,
                            bool evaluate_at_image = false);

enum class IntegrationMethod { rk4, midpoint };

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
};

/// Fixed-step integration; throws with the step index if the state stops
/// being finite.
Trajectory integrate(const VectorField& x_field, const Eigen::VectorXd& x0,
                     double t_final, double dt,
                     IntegrationMethod method = IntegrationMethod::rk4);

struct DiagnosticsReport {
  std::vector<double> energy;
  std::vector<std::vector<double>> casimirs;  // one series per declared Casimir
  double energy_drift_max = 0.0;
  double casimir_drift_max = 0.0;
  bool energy_monotone_decreasing = true;
};

DiagnosticsReport diagnostics(const Trajectory& traj, const CHSystem& sys);

/// CSV columns: t, x1..xN, H, then one column per declared Casimir.
std::string trajectory_csv(const Trajectory& traj, const CHSystem& sys);
std::string trajectory_json(const Trajectory& traj, const CHSystem& sys);

}  // namespace chred
