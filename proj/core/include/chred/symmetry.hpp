#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "chred/chsys.hpp"
#include "chred/equiv.hpp"
#include "chred/so3.hpp"

namespace chred {

enum class GroupKind { trivial, s1, so3, product };

/// Matrix Lie group acting linearly on the configuration space R^n, with the
/// induced cotangent lift on phase points (q, p) -> (M q, M^{-T} p) and
/// infinitesimal generators on phase space.
class GroupAction {
 public:
  static GroupAction trivial(int config_dim);
  /// Rotations of R^2, lifted diagonally to T*R^2 = R^4.
  static GroupAction s1_on_r2();
  /// Rotations of R^3, lifted diagonally to T*R^3 = R^6.
  static GroupAction so3_on_r3();
  /// Block product acting on the concatenated configuration spaces.
  static GroupAction product(const GroupAction& a, const GroupAction& b);

  GroupKind kind() const { return kind_; }
  int config_dim() const { return config_dim_; }
  int phase_dim() const { return 2 * config_dim_; }
  int algebra_dim() const { return algebra_dim_; }

  /// Group element from chart parameters (S1: angle; SO3: rotation vector).
  Eigen::MatrixXd config_matrix(const Eigen::VectorXd& params) const;
  /// Lifted linear action on phase points.
  Eigen::MatrixXd phase_matrix(const Eigen::VectorXd& params) const;

  Eigen::VectorXd random_params(Rng& rng) const;

  /// Infinitesimal generator of xi on phase space.
  VectorField generator(const Eigen::VectorXd& xi) const;
  /// Generator matrix on configuration space (hat of xi).
  Eigen::MatrixXd algebra_matrix(const Eigen::VectorXd& xi) const;

 private:
  GroupKind kind_ = GroupKind::trivial;
  int config_dim_ = 0;
  int algebra_dim_ = 0;
  std::shared_ptr<const GroupAction> left_, right_;  // product factors
};

struct InvarianceResult {
  bool invariant = false;
  double max_residual = 0.0;
};

/// |f(g x) - f(x)| over sampled group elements and points.
InvarianceResult is_invariant(const GroupAction& action, const ScalarField& f,
                              const std::vector<Eigen::VectorXd>& group_params,
                              const std::vector<Eigen::VectorXd>& points,
                              double tol = 1e-8);

/// Equivariance ||F(g x) - g F(x)|| (the reading of invariance that makes
/// the reduced force map well-defined).
InvarianceResult is_invariant(const GroupAction& action, const FiberMap& f,
                              const std::vector<Eigen::VectorXd>& group_params,
                              const std::vector<Eigen::VectorXd>& points,
                              double tol = 1e-8);

/// |constraint(g z)| for on-manifold z.
InvarianceResult is_invariant(const GroupAction& action, const Submanifold& w,
                              const std::vector<Eigen::VectorXd>& group_params,
                              const std::vector<Eigen::VectorXd>& w_points,
                              double memb_tol = 1e-8);

/// Dimension of { xi : generator(xi)(z) = 0 }.
int isotropy_dim(const GroupAction& action, const Eigen::VectorXd& z,
                 double rank_tol = kRankTol);

struct Stratum {
  int isotropy_dim = 0;
  std::string tag;
  std::vector<int> point_indices;
};

/// Partition of sample points by isotropy dimension with a structural
/// conjugacy tag per catalog action.
std::vector<Stratum> stratify(const GroupAction& action,
                              const std::vector<Eigen::VectorXd>& points);

/// Momentum map of a cotangent-lifted linear catalog action:
/// J_xi(q, p) = p . xi_Q(q).
struct MomentumMap {
  int algebra_dim = 0;
  VectorFn j;  // phase point -> algebra dual (coordinates in a fixed basis)

  Eigen::VectorXd value(const Eigen::VectorXd& z) const { return j(z); }
  double pairing(const Eigen::VectorXd& xi, const Eigen::VectorXd& z) const {
    return xi.dot(j(z));
  }
};

MomentumMap momentum_map(const GroupAction& action);

/// Coadjoint-equivariance residual ||J(g z) - Ad*_{g^{-1}} J(z)|| over
/// samples (for the catalog actions the coadjoint action is the matrix
/// action itself; trivial for S1).
double coadjoint_equivariance_residual(
    const GroupAction& action, const MomentumMap& j,
    const std::vector<Eigen::VectorXd>& group_params,
    const std::vector<Eigen::VectorXd>& points);

struct MomentumFiberResult {
  Submanifold fiber;  // J^{-1}(O_mu) as a constraint manifold
  ClassifyResult classification;
  int regular_points = 0;
  int singular_points_flagged = 0;
};

/// Builds the preimage of the coadjoint orbit through mu as a constraint
/// manifold (S1: J = mu; SO3: ||q x p||^2 = ||mu||^2), classifies it at the
/// supplied points and flags rank-deficient (singular) ones.
MomentumFiberResult momentum_fiber_coisotropy(
    const GroupAction& action, const PoissonStructure& b,
    const Eigen::VectorXd& orbit_value,
    const std::vector<Eigen::VectorXd>& points, double tol = 1e-8);

/// Residual of the reduced-bracket relation on the rigid-body chart:
///   {f o pi, g o pi}_canonical(x) = {f, g}_minusLP(pi(x)),
/// with pi the body-momentum projection of the exponential chart on T*SO(3).
double lie_poisson_check(const std::vector<Eigen::VectorXd>& chart_points,
                         const ScalarField& f, const ScalarField& g);

/// Residual over all so(3)* coordinate pairs.
double lie_poisson_check_coordinates(
    const std::vector<Eigen::VectorXd>& chart_points);

/// Quadratic invariants of the S1 action on T*R^2:
///   s1 = |q|^2, s2 = |p|^2, s3 = q.p, s4 = q1 p2 - q2 p1,
/// subject to s1 s2 = s3^2 + s4^2.
Eigen::Vector4d s1_invariants(const Eigen::VectorXd& z);

/// Closed-form reduced bracket {s_i, s_j} as a function of the invariants;
/// s4 is a Casimir of the reduced structure.
double singular_reduced_bracket_s1(int i, int j, const Eigen::Vector4d& sigma);

/// Poisson structure on the invariant coordinates (the reduced bracket
/// table assembled into a tensor field on R^4).
PoissonStructure s1_reduced_structure();

/// Numeric validation: canonical brackets of the invariant pullbacks versus
/// the closed-form table, max residual over points and all pairs.
double s1_reduced_bracket_residual(const std::vector<Eigen::VectorXd>& points);

/// One reduction cross-check instance: a Poisson-reducibility test upstairs
/// and the corresponding test on the reduced data, which must agree.
struct CrosscheckScenario {
  std::string name;
  PoissonStructure b_up;
  Submanifold w_up;
  Distribution d_up;
  std::vector<Eigen::VectorXd> points_up;
  PoissonStructure b_down;
  Submanifold w_down;
  Distribution d_down;
  std::vector<Eigen::VectorXd> points_down;
  // Optional invariance preflight (populated when a catalog action exists
  // on the upstairs space).
  std::optional<GroupAction> action;
  std::vector<Eigen::VectorXd> group_params;
};

struct CrosscheckResult {
  bool up_reducible = false;
  bool down_reducible = false;
  bool agree = false;
  double up_residual = 0.0;
  double down_residual = 0.0;
  bool invariance_ok = true;
};

CrosscheckResult reduction_crosscheck(const CrosscheckScenario& scenario,
                                    double tol = 1e-8);

/// The free-region S1 instance: upstairs W = {J = level} in T*R^2 with the
/// orbit distribution, downstairs the invariant-coordinate structure with
/// W = {s4 = level} and the pushed-forward (zero) distribution.
CrosscheckScenario s1_crosscheck_scenario(Rng& rng, int n_points,
                                          double level = 1.0);

/// The rigid-body instance: upstairs the exponential chart on T*SO(3) with
/// W a body-momentum Casimir level set and its characteristic distribution,
/// downstairs so(3)* with the Casimir sphere and the pushed-forward (zero)
/// distribution.
CrosscheckScenario rigid_body_crosscheck_scenario(Rng& rng, int n_points,
                                                  double casimir_level = 1.0);

}  // namespace chred
