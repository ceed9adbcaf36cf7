#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chred/poisson.hpp"
#include "chred/rng.hpp"

namespace chred {

inline constexpr double kMembTol = 1e-10;

/// Embedded submanifold of R^N given by a regular constraint zero level
/// and/or a parametrization. The constraint representation drives membership
/// tests and on-manifold sampling; either representation yields tangent
/// spaces.
class Submanifold {
 public:
  /// W = { z : c(z) = 0 }, c: R^N -> R^k with full-rank Jacobian on W.
  static Submanifold from_constraint(int ambient_dim, int codim, VectorFn c,
                                     MatrixFn jac = nullptr,
                                     double fd_step = kFdStep);

  /// W = image of P: R^d -> R^N.
  static Submanifold from_parametrization(int ambient_dim, int param_dim,
                                          VectorFn p, MatrixFn jac = nullptr,
                                          double fd_step = kFdStep);

  /// Whole space (no constraints).
  static Submanifold full_space(int ambient_dim);

  int ambient_dim() const { return ambient_dim_; }
  int codim() const { return codim_; }
  bool has_constraint() const { return static_cast<bool>(constraint_); }
  bool has_parametrization() const { return static_cast<bool>(param_); }

  Eigen::VectorXd constraint(const Eigen::VectorXd& z) const;
  Eigen::MatrixXd constraint_jacobian(const Eigen::VectorXd& z) const;

  Eigen::VectorXd parametrize(const Eigen::VectorXd& u) const;
  /// Point and tangent space at parameter u (column span of dP(u)).
  std::pair<Eigen::VectorXd, Subspace> point_and_tangent(
      const Eigen::VectorXd& u) const;

  bool contains(const Eigen::VectorXd& z, double memb_tol = kMembTol) const;

  /// Tangent space at an on-manifold z: nullspace of the constraint Jacobian.
  /// Requires the constraint representation.
  Subspace tangent_at(const Eigen::VectorXd& z,
                      double rank_tol = kRankTol) const;

  /// True when the constraint Jacobian drops rank at z.
  bool rank_deficient_at(const Eigen::VectorXd& z,
                         double rank_tol = kRankTol) const;

  /// Gauss-Newton projection of an ambient seed onto the constraint zero set
  /// (min-norm Newton steps, at most `max_iter`). Empty on failure.
  std::optional<Eigen::VectorXd> project(const Eigen::VectorXd& seed,
                                         double memb_tol = kMembTol,
                                         int max_iter = 50) const;

  /// Seeded on-manifold samples: box seeds projected onto W; seeds that fail
  /// to converge are discarded.
  std::vector<Eigen::VectorXd> sample(Rng& rng, int count,
                                      const Eigen::VectorXd& box_center,
                                      double box_half_width,
                                      double memb_tol = kMembTol) const;

 private:
  int ambient_dim_ = 0;
  int codim_ = 0;
  int param_dim_ = 0;
  VectorFn constraint_;
  MatrixFn constraint_jac_;
  VectorFn param_;
  MatrixFn param_jac_;
  double fd_step_ = kFdStep;
};

/// Generalized distribution near W spanned by finitely many vector fields.
struct Distribution {
  std::vector<VectorField> generators;
  int ambient_dim = 0;
  bool claimed_poisson = false;
  bool claimed_integrable = false;
  bool claimed_g_invariant = false;

  static Distribution spanned(int ambient_dim, std::vector<VectorField> gens);
  static Distribution zero(int ambient_dim);

  /// Pointwise fiber D(z), orthonormalized span of the generator values.
  Subspace fiber_at(const Eigen::VectorXd& z,
                    double rank_tol = kRankTol) const;
};

/// D_W(z) = D(z) ^ T_z W.
Subspace dw_fiber(const Distribution& d, const Submanifold& w,
                  const Eigen::VectorXd& z, double memb_tol = kMembTol);

struct PointResidual {
  Eigen::VectorXd point;
  double residual = 0.0;
};

/// Verdict of a pointwise subspace-inclusion test over sampled points.
struct ReducibilityResult {
  bool reducible = false;
  double max_residual = 0.0;
  int points_tested = 0;
  int points_skipped = 0;  // rank-deficient constraint Jacobian
  std::vector<PointResidual> per_point;
};

/// Pointwise reducibility criterion: at each sampled z on W, tests
///   sharp(B(z), ann(D(z)))  within  T_z W + D(z),
/// the finite-dimensional realization of the invariant-differential
/// condition for the quotient bracket to be well-defined. Rank-deficient
/// constraint points are skipped and counted.
ReducibilityResult reducibility_check(const PoissonStructure& b,
                                      const Submanifold& w,
                                      const Distribution& d,
                                      const std::vector<Eigen::VectorXd>& points,
                                      double tol = 1e-8);

enum class SubmanifoldClass { coisotropic, cosymplectic, neither };

std::string to_string(SubmanifoldClass c);

struct ClassifyResult {
  std::vector<SubmanifoldClass> per_point;
  SubmanifoldClass aggregate = SubmanifoldClass::neither;
  bool mixed = false;
  int points_skipped = 0;
};

/// Pointwise classification from the tangent data:
///   coisotropic  when sharp(B,(TW)°) within TW;
///   cosymplectic when sharp(B,(TW)°) ^ TW = 0 and TW + leaf = ambient.
SubmanifoldClass classify_point(const PoissonStructure& b,
                                const Eigen::VectorXd& z,
                                const Subspace& tangent,
                                const Subspace& leaf_tangent,
                                double tol = 1e-8);

ClassifyResult classify_submanifold(
    const PoissonStructure& b, const Submanifold& w,
    const std::vector<Eigen::VectorXd>& points,
    const std::function<Subspace(const Eigen::VectorXd&)>& leaf_tangent_at,
    double tol = 1e-8);

/// D = sharp(B, (TW)°) realized through the constraint gradients:
/// one generator z -> B(z) grad c_i(z) per constraint component.
Distribution characteristic_distribution(const PoissonStructure& b,
                                         const Submanifold& w);

struct ReducedBracketSample {
  double value_at_m = 0.0;
  double value_at_m2 = 0.0;
  double independence_residual = 0.0;
};

/// Evaluates {f_ext, g_ext}_B at two points of a common leaf of D_W.
/// Preconditions: both points lie on W and the extensions are D-invariant
/// (directional derivatives along the generators vanish at both points);
/// violations throw with the offending derivative.
ReducedBracketSample reduced_bracket_sample(
    const PoissonStructure& b, const Submanifold& w, const Distribution& d,
    const ScalarField& f_ext, const ScalarField& g_ext,
    const Eigen::VectorXd& m, const Eigen::VectorXd& m2,
    double invariance_tol = 1e-6, double memb_tol = kMembTol);

struct InvolutivityResult {
  bool involutive = false;
  double worst_residual = 0.0;
};

/// Distance of [X_i, X_j](z) to D(z) over all generator pairs and points.
InvolutivityResult involutivity_check(const Distribution& d,
                                      const std::vector<Eigen::VectorXd>& points,
                                      double tol = 1e-6);

/// Rank at z of the span of drift, controls and iterated Lie brackets up to
/// `depth` (depth 1 = the fields themselves). The standard checkable
/// surrogate for controllability; reported as accessibility.
int accessibility_rank(const VectorField& drift,
                       const std::vector<VectorField>& controls,
                       const Eigen::VectorXd& z, int depth,
                       double rank_tol = kRankTol);

}  // namespace chred
