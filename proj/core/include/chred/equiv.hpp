#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "chred/chsys.hpp"

namespace chred {

/// Configuration diffeomorphism with inverse and Jacobian (FD fallback).
struct DiffeoMap {
  int dim = 0;
  VectorFn forward;
  VectorFn inverse;
  MatrixFn jac_fn;  // Jacobian of forward; optional
  double fd_step = kFdStep;

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& q) const {
    return jac_fn ? jac_fn(q) : central_jacobian(forward, q, fd_step);
  }

  static DiffeoMap identity(int dim);
  static DiffeoMap linear(const Eigen::MatrixXd& a);
  static DiffeoMap scaling(int dim, double factor);
};

/// Cotangent lift of a configuration diffeomorphism phi: Q1 -> Q2.
/// pull: T*Q2 -> T*Q1, (qb, pb) -> (phi^{-1}(qb), Dphi(phi^{-1}(qb))^T pb);
/// push is its inverse. Lifts preserve the canonical bracket.
class CotangentLift {
 public:
  explicit CotangentLift(DiffeoMap phi);

  const DiffeoMap& phi() const { return phi_; }
  int config_dim() const { return phi_.dim; }
  int phase_dim() const { return 2 * phi_.dim; }

  Eigen::VectorXd pull(const Eigen::VectorXd& x2) const;
  Eigen::VectorXd push(const Eigen::VectorXd& x1) const;

  /// Tangent map of pull at x2.
  Eigen::MatrixXd pull_tangent(const Eigen::VectorXd& x2) const;

 private:
  DiffeoMap phi_;
};

/// Validates invertibility and Jacobian regularity of phi over sampled
/// configuration points, then returns the lift. Throws on a singular
/// Jacobian sample.
CotangentLift cotangent_lift(const DiffeoMap& phi,
                             const std::vector<Eigen::VectorXd>& config_samples = {},
                             double rank_tol = kRankTol);

/// Bracket mismatch of an arbitrary candidate map psi: (P2,B2) -> (P1,B1)
/// over coordinate pairs: max || Jpsi B2 Jpsi^T - B1(psi(x)) ||_inf.
double poisson_map_residual(const VectorFn& psi, const PoissonStructure& b1,
                            const PoissonStructure& b2,
                            const std::vector<Eigen::VectorXd>& points2,
                            double fd_step = kFdStep);

struct Hm1Result {
  bool holds = false;
  double poisson_residual = 0.0;   // bracket mismatch over coordinate pairs
  double w_forward_residual = 0.0; // pull(W2 samples) membership in W1
  double w_reverse_residual = 0.0; // push(W1 samples) membership in W2
};

/// First matching condition: pull is a Poisson map (coordinate brackets
/// suffice on a chart) and the control subsets correspond under it.
Hm1Result check_hm1(const CotangentLift& lift, const PoissonStructure& b1,
                    const PoissonStructure& b2,
                    const std::optional<Submanifold>& w1,
                    const std::optional<Submanifold>& w2,
                    const std::vector<Eigen::VectorXd>& points2,
                    const std::vector<Eigen::VectorXd>& w2_samples = {},
                    const std::vector<Eigen::VectorXd>& w1_samples = {},
                    double tol = 1e-8);

/// Right-hand side of the control-law relation at x in T*Q1:
///   -B1 dH1 - vlift(F1) + Tpull(B2 dH2) + vlift(pull o F2 o push),
/// all evaluated at x. Its base component must vanish for the second
/// matching condition to be satisfiable.
Eigen::VectorXd matching_rhs(const CotangentLift& lift, const CHSystem& sys1,
                             const CHSystem& sys2, const Eigen::VectorXd& x);

/// What vertical vectors the controls of system 1 can attain at a point.
struct AttainableVerticals {
  enum class Kind { full_fiber, subspace, box } kind = Kind::full_fiber;
  Subspace subspace;       // fiber-dim ambient, used for Kind::subspace
  Eigen::VectorXd box_lo;  // used for Kind::box
  Eigen::VectorXd box_hi;

  static AttainableVerticals full();
  static AttainableVerticals in_subspace(Subspace s);
  static AttainableVerticals in_box(Eigen::VectorXd lo, Eigen::VectorXd hi);

  bool contains(const Eigen::VectorXd& fiber_vec, double tol) const;
};

struct Hm2Result {
  bool holds = false;
  double max_base_norm = 0.0;
  double worst_attainability_residual = 0.0;
};

/// Second matching condition: the matching RHS is vertical and its fiber
/// component is attainable by control values in W1 at every sampled point.
Hm2Result check_hm2(const CotangentLift& lift, const CHSystem& sys1,
                    const CHSystem& sys2,
                    const std::vector<Eigen::VectorXd>& points1,
                    const AttainableVerticals& w1_vertical_test,
                    double tol = 1e-8);

/// Lift value of the solved control law for system 1 at x:
///   vlift(u1)(x) = matching_rhs(x) + vlift(pull o u2 o push)(x).
/// Throws when the RHS fails to be vertical.
Eigen::VectorXd solve_control_law(const CotangentLift& lift,
                                  const CHSystem& sys1, const CHSystem& sys2,
                                  const std::optional<FiberMap>& u2,
                                  const Eigen::VectorXd& x,
                                  double vertical_tol = 1e-8);

struct ConjugacyResult {
  double max_trajectory_residual = 0.0;  // max_t ||pull(x2(t)) - x1(t)||
  double max_field_residual = 0.0;       // ||X1(pull(x)) - Tpull(X2(x))||
};

/// Integrates both closed loops (system 2 from x02, system 1 from pull(x02))
/// and reports the conjugacy residuals. `u1_term` is the vertical control
/// contribution of system 1 as a function of the phase point.
ConjugacyResult verify_closed_loop_conjugacy(
    const CotangentLift& lift, const CHSystem& sys1, const VectorField& u1_term,
    const CHSystem& sys2, const std::optional<FiberMap>& u2,
    const Eigen::VectorXd& x02, double t_final, double dt);

}  // namespace chred
