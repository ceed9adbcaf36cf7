#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace chred {

/// Error type for precondition violations across the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Relative singular-value threshold for all rank / inclusion decisions.
inline constexpr double kRankTol = 1e-9;

/// A linear subspace of R^n at a single manifold point, stored with an
/// orthonormal basis. `dual` distinguishes covector (cotangent) subspaces
/// from tangent ones; mixing the two is a usage error and throws.
/// An empty basis (0 columns) is the zero subspace.
class Subspace {
 public:
  Subspace() = default;

  /// Builds the span of the columns of `basis`, orthonormalizing and rank-
  /// truncating with the relative threshold `rank_tol`. When the columns are
  /// images of a linear map, `scale_floor` should carry the map's norm so
  /// that pure rounding noise is cut instead of normalized into a direction.
  static Subspace span(const Eigen::MatrixXd& basis, bool dual = false,
                       double rank_tol = kRankTol, double scale_floor = 0.0);

  /// The zero subspace of R^n.
  static Subspace zero(int ambient_dim, bool dual = false);

  /// All of R^n.
  static Subspace full(int ambient_dim, bool dual = false);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  bool dual() const { return dual_; }

  /// Orthonormal basis, ambient_dim x dim.
  const Eigen::MatrixXd& basis() const { return basis_; }

  /// Orthogonal projection of `v` onto this subspace.
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;

  /// Distance of `v` to the subspace (norm of the projection residual).
  double distance(const Eigen::VectorXd& v) const;

 private:
  Subspace(Eigen::MatrixXd basis, bool dual)
      : basis_(std::move(basis)), dual_(dual) {}

  Eigen::MatrixXd basis_;  // orthonormal columns
  bool dual_ = false;
};

/// All covectors vanishing on V (or, for dual V, all vectors annihilated by
/// it). Flips the dual flag; dim(result) = ambient_dim - dim(V).
Subspace annihilator(const Subspace& v, double rank_tol = kRankTol);

/// Throws unless `b` is antisymmetric to `tol` (message carries ||B+B^T||).
void require_antisymmetric(const Eigen::MatrixXd& b, double tol = 1e-10);

/// Image of a covector subspace under the bundle map induced by the
/// antisymmetric tensor matrix `b_at_m`: span{ B a : a in basis(W) }.
Subspace sharp_image(const Eigen::MatrixXd& b_at_m, const Subspace& w,
                     double rank_tol = kRankTol);

Subspace subspace_sum(const Subspace& u, const Subspace& v,
                      double rank_tol = kRankTol);

/// Intersection via the double-annihilator identity (U ^ V) = (U° + V°)°.
Subspace subspace_intersect(const Subspace& u, const Subspace& v,
                            double rank_tol = kRankTol);

/// Largest residual of the basis vectors of U after projection onto V.
/// Zero iff U is contained in V.
double inclusion_residual(const Subspace& u, const Subspace& v);

bool is_subspace_of(const Subspace& u, const Subspace& v, double tol = 1e-8);

/// Gap between two subspaces: spectral norm of the difference of their
/// orthogonal projectors. Equals the largest principal-angle sine for
/// equal dimensions and 1 when dimensions differ.
double subspace_gap(const Subspace& u, const Subspace& v);

/// Residual of the pointwise identity
///   sharp(B, ann(sharp(B, ann(V)))) = V ^ leaf_tangent,
/// measured as the gap between the two independently assembled sides.
double verify_characteristic_identity(const Eigen::MatrixXd& b_at_m,
                                      const Subspace& v,
                                      const Subspace& leaf_tangent,
                                      double rank_tol = kRankTol);

}  // namespace chred
