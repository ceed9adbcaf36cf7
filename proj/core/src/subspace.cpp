#include "chred/subspace.hpp"

#include <Eigen/SVD>

namespace chred {

namespace {

// Orthonormal column basis of span(m) with relative rank cut.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m, double rank_tol,
                                  double scale_floor) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  const double cutoff = rank_tol * std::max(smax, scale_floor);
  if (!(smax > cutoff)) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

void require_same_space(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw Error("subspace: ambient dimension mismatch (" +
                std::to_string(u.ambient_dim()) + " vs " +
                std::to_string(v.ambient_dim()) + ")");
  if (u.dual() != v.dual())
    throw Error("subspace: tangent/cotangent flag mismatch");
}

}  // namespace

Subspace Subspace::span(const Eigen::MatrixXd& basis, bool dual,
                        double rank_tol, double scale_floor) {
  if (basis.rows() == 0) throw Error("subspace: ambient dimension must be positive");
  return Subspace(orthonormal_basis(basis, rank_tol, scale_floor), dual);
}

Subspace Subspace::zero(int ambient_dim, bool dual) {
  if (ambient_dim <= 0) throw Error("subspace: ambient dimension must be positive");
  return Subspace(Eigen::MatrixXd(ambient_dim, 0), dual);
}

Subspace Subspace::full(int ambient_dim, bool dual) {
  if (ambient_dim <= 0) throw Error("subspace: ambient dimension must be positive");
  return Subspace(Eigen::MatrixXd::Identity(ambient_dim, ambient_dim), dual);
}

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& v) const {
  if (v.size() != basis_.rows()) throw Error("subspace: vector dimension mismatch");
  if (basis_.cols() == 0) return Eigen::VectorXd::Zero(v.size());
  return basis_ * (basis_.transpose() * v);
}

double Subspace::distance(const Eigen::VectorXd& v) const {
  return (v - project(v)).norm();
}

Subspace annihilator(const Subspace& v, double rank_tol) {
  const int n = v.ambient_dim();
  if (v.dim() == 0) return Subspace::full(n, !v.dual());
  // Kernel of basis^T: left singular vectors past the rank.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v.basis(), Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > rank_tol * smax) ++rank;
  Eigen::MatrixXd ker = svd.matrixU().rightCols(n - rank);
  return Subspace::span(ker, !v.dual(), rank_tol);
}

void require_antisymmetric(const Eigen::MatrixXd& b, double tol) {
  if (b.rows() != b.cols()) throw Error("tensor matrix must be square");
  const double res = (b + b.transpose()).norm();
  if (!(res < tol))
    throw Error("tensor matrix not antisymmetric: ||B+B^T|| = " +
                std::to_string(res));
}

Subspace sharp_image(const Eigen::MatrixXd& b_at_m, const Subspace& w,
                     double rank_tol) {
  require_antisymmetric(b_at_m);
  if (!w.dual()) throw Error("sharp_image: argument must be a covector subspace");
  if (b_at_m.rows() != w.ambient_dim())
    throw Error("sharp_image: dimension mismatch");
  // Rank decisions are made against the tensor's own scale so that images
  // of kernel directions collapse to zero instead of rounding noise.
  return Subspace::span(b_at_m * w.basis(), /*dual=*/false, rank_tol,
                        b_at_m.norm());
}

Subspace subspace_sum(const Subspace& u, const Subspace& v, double rank_tol) {
  require_same_space(u, v);
  Eigen::MatrixXd cat(u.ambient_dim(), u.dim() + v.dim());
  cat << u.basis(), v.basis();
  return Subspace::span(cat, u.dual(), rank_tol);
}

Subspace subspace_intersect(const Subspace& u, const Subspace& v,
                            double rank_tol) {
  require_same_space(u, v);
  Subspace both = subspace_sum(annihilator(u, rank_tol),
                               annihilator(v, rank_tol), rank_tol);
  return annihilator(both, rank_tol);
}

double inclusion_residual(const Subspace& u, const Subspace& v) {
  require_same_space(u, v);
  if (u.dim() == 0) return 0.0;
  Eigen::MatrixXd resid = u.basis();
  if (v.dim() > 0) resid -= v.basis() * (v.basis().transpose() * u.basis());
  // Basis columns are unit vectors, so the spectral norm is already relative.
  return resid.jacobiSvd().singularValues()[0];
}

bool is_subspace_of(const Subspace& u, const Subspace& v, double tol) {
  return inclusion_residual(u, v) < tol;
}

double subspace_gap(const Subspace& u, const Subspace& v) {
  require_same_space(u, v);
  const int n = u.ambient_dim();
  Eigen::MatrixXd pu = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd pv = Eigen::MatrixXd::Zero(n, n);
  if (u.dim() > 0) pu = u.basis() * u.basis().transpose();
  if (v.dim() > 0) pv = v.basis() * v.basis().transpose();
  if (u.dim() == 0 && v.dim() == 0) return 0.0;
  return (pu - pv).jacobiSvd().singularValues()[0];
}

double verify_characteristic_identity(const Eigen::MatrixXd& b_at_m,
                                      const Subspace& v,
                                      const Subspace& leaf_tangent,
                                      double rank_tol) {
  if (v.dual() || leaf_tangent.dual())
    throw Error("verify_characteristic_identity: expects tangent subspaces");
  Subspace image = sharp_image(b_at_m, annihilator(v, rank_tol), rank_tol);
  Subspace lhs = sharp_image(b_at_m, annihilator(image, rank_tol), rank_tol);
  Subspace rhs = subspace_intersect(v, leaf_tangent, rank_tol);
  return subspace_gap(lhs, rhs);
}

}  // namespace chred
