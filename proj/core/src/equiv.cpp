#include "chred/equiv.hpp"

#include <Eigen/LU>
#include <cmath>

namespace chred {

DiffeoMap DiffeoMap::identity(int dim) {
  DiffeoMap d;
  d.dim = dim;
  d.forward = [](const Eigen::VectorXd& q) { return q; };
  d.inverse = [](const Eigen::VectorXd& q) { return q; };
  d.jac_fn = [dim](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Identity(dim, dim).eval();
  };
  return d;
}

DiffeoMap DiffeoMap::linear(const Eigen::MatrixXd& a) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw Error("DiffeoMap::linear: singular matrix");
  Eigen::MatrixXd ainv = lu.inverse();
  DiffeoMap d;
  d.dim = static_cast<int>(a.rows());
  d.forward = [a](const Eigen::VectorXd& q) { return (a * q).eval(); };
  d.inverse = [ainv](const Eigen::VectorXd& q) { return (ainv * q).eval(); };
  d.jac_fn = [a](const Eigen::VectorXd&) { return a; };
  return d;
}

DiffeoMap DiffeoMap::scaling(int dim, double factor) {
  return linear(factor * Eigen::MatrixXd::Identity(dim, dim));
}

CotangentLift::CotangentLift(DiffeoMap phi) : phi_(std::move(phi)) {}

Eigen::VectorXd CotangentLift::pull(const Eigen::VectorXd& x2) const {
  const int n = phi_.dim;
  if (x2.size() != 2 * n) throw Error("cotangent lift: phase dimension mismatch");
  Eigen::VectorXd q1 = phi_.inverse(x2.head(n));
  Eigen::VectorXd x1(2 * n);
  x1.head(n) = q1;
  x1.tail(n) = phi_.jacobian(q1).transpose() * x2.tail(n);
  return x1;
}

Eigen::VectorXd CotangentLift::push(const Eigen::VectorXd& x1) const {
  const int n = phi_.dim;
  if (x1.size() != 2 * n) throw Error("cotangent lift: phase dimension mismatch");
  Eigen::VectorXd q1 = x1.head(n);
  Eigen::VectorXd x2(2 * n);
  x2.head(n) = phi_.forward(q1);
  x2.tail(n) = phi_.jacobian(q1).transpose().partialPivLu().solve(x1.tail(n));
  return x2;
}

Eigen::MatrixXd CotangentLift::pull_tangent(const Eigen::VectorXd& x2) const {
  auto self = *this;
  return central_jacobian(
      [self](const Eigen::VectorXd& x) { return self.pull(x); }, x2,
      phi_.fd_step);
}

CotangentLift cotangent_lift(const DiffeoMap& phi,
                             const std::vector<Eigen::VectorXd>& config_samples,
                             double rank_tol) {
  for (const auto& q : config_samples) {
    Eigen::MatrixXd jac = phi.jacobian(q);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    // Unit scale floor: a Jacobian collapsing toward zero is singular for
    // inversion purposes even if its singular values agree with each other.
    if (sv.size() == 0 ||
        !(sv[sv.size() - 1] > rank_tol * std::max(sv[0], 1.0)))
      throw Error("cotangent_lift: singular Jacobian at a sample point");
    Eigen::VectorXd back = phi.inverse(phi.forward(q));
    if ((back - q).norm() > 1e-6)
      throw Error("cotangent_lift: inverse fails round-trip at a sample point");
  }
  return CotangentLift(phi);
}

double poisson_map_residual(const VectorFn& psi, const PoissonStructure& b1,
                            const PoissonStructure& b2,
                            const std::vector<Eigen::VectorXd>& points2,
                            double fd_step) {
  // On a chart, coordinate pairs generate every bracket:
  //   { xi o psi, xj o psi }_{B2}(x) = (Jpsi B2 Jpsi^T)_{ij}
  // must match {xi, xj}_{B1}(psi(x)) = B1(psi(x))_{ij}.
  double worst = 0.0;
  for (const auto& x : points2) {
    Eigen::MatrixXd jac = central_jacobian(psi, x, fd_step);
    Eigen::MatrixXd lhs = jac * b2.at(x) * jac.transpose();
    Eigen::MatrixXd rhs = b1.at(psi(x));
    worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

Hm1Result check_hm1(const CotangentLift& lift, const PoissonStructure& b1,
                    const PoissonStructure& b2,
                    const std::optional<Submanifold>& w1,
                    const std::optional<Submanifold>& w2,
                    const std::vector<Eigen::VectorXd>& points2,
                    const std::vector<Eigen::VectorXd>& w2_samples,
                    const std::vector<Eigen::VectorXd>& w1_samples,
                    double tol) {
  Hm1Result result;
  result.poisson_residual = poisson_map_residual(
      [&lift](const Eigen::VectorXd& x) { return lift.pull(x); }, b1, b2,
      points2);
  if (w1 && w2) {
    for (const auto& z2 : w2_samples)
      result.w_forward_residual =
          std::max(result.w_forward_residual,
                   w1->constraint(lift.pull(z2)).lpNorm<Eigen::Infinity>());
    for (const auto& z1 : w1_samples)
      result.w_reverse_residual =
          std::max(result.w_reverse_residual,
                   w2->constraint(lift.push(z1)).lpNorm<Eigen::Infinity>());
  }
  result.holds = result.poisson_residual < tol &&
                 result.w_forward_residual < 1e-6 &&
                 result.w_reverse_residual < 1e-6;
  return result;
}

namespace {

std::optional<FiberMap> conjugated_fiber_map(const CotangentLift& lift,
                                             const std::optional<FiberMap>& m2,
                                             int base_dim) {
  if (!m2) return std::nullopt;
  FiberMap composed;
  composed.base_dim = base_dim;
  const FiberMap inner = *m2;
  composed.map_fn = [lift, inner](const Eigen::VectorXd& x1) {
    return lift.pull(inner.apply(lift.push(x1)));
  };
  return composed;
}

}  // namespace

Eigen::VectorXd matching_rhs(const CotangentLift& lift, const CHSystem& sys1,
                             const CHSystem& sys2, const Eigen::VectorXd& x) {
  VectorField xh1 = hamiltonian_field(sys1.phase, sys1.hamiltonian);
  VectorField xh2 = hamiltonian_field(sys2.phase, sys2.hamiltonian);
  Eigen::VectorXd rhs = -xh1.value(x);
  if (sys1.force) rhs -= vertical_lift(*sys1.force, xh1, x);
  Eigen::VectorXd x2 = lift.push(x);
  rhs += lift.pull_tangent(x2) * xh2.value(x2);
  if (auto f2_conj = conjugated_fiber_map(lift, sys2.force, sys1.base_dim))
    rhs += vertical_lift(*f2_conj, xh1, x);
  return rhs;
}

AttainableVerticals AttainableVerticals::full() { return {}; }

AttainableVerticals AttainableVerticals::in_subspace(Subspace s) {
  AttainableVerticals a;
  a.kind = Kind::subspace;
  a.subspace = std::move(s);
  return a;
}

AttainableVerticals AttainableVerticals::in_box(Eigen::VectorXd lo,
                                                Eigen::VectorXd hi) {
  AttainableVerticals a;
  a.kind = Kind::box;
  a.box_lo = std::move(lo);
  a.box_hi = std::move(hi);
  return a;
}

bool AttainableVerticals::contains(const Eigen::VectorXd& fiber_vec,
                                   double tol) const {
  switch (kind) {
    case Kind::full_fiber:
      return true;
    case Kind::subspace:
      return subspace.distance(fiber_vec) < tol;
    case Kind::box:
      for (Eigen::Index i = 0; i < fiber_vec.size(); ++i)
        if (fiber_vec[i] < box_lo[i] - tol || fiber_vec[i] > box_hi[i] + tol)
          return false;
      return true;
  }
  return false;
}

Hm2Result check_hm2(const CotangentLift& lift, const CHSystem& sys1,
                    const CHSystem& sys2,
                    const std::vector<Eigen::VectorXd>& points1,
                    const AttainableVerticals& w1_vertical_test, double tol) {
  Hm2Result result;
  const int base_dim = sys1.base_dim;
  bool attainable = true;
  for (const auto& x : points1) {
    Eigen::VectorXd rhs = matching_rhs(lift, sys1, sys2, x);
    result.max_base_norm = std::max(
        result.max_base_norm, rhs.head(base_dim).lpNorm<Eigen::Infinity>());
    Eigen::VectorXd fiber = rhs.tail(rhs.size() - base_dim);
    if (!w1_vertical_test.contains(fiber, tol)) {
      attainable = false;
      result.worst_attainability_residual = std::max(
          result.worst_attainability_residual,
          w1_vertical_test.kind == AttainableVerticals::Kind::subspace
              ? w1_vertical_test.subspace.distance(fiber)
              : fiber.norm());
    }
  }
  result.holds = result.max_base_norm < tol && attainable;
  return result;
}

Eigen::VectorXd solve_control_law(const CotangentLift& lift,
                                  const CHSystem& sys1, const CHSystem& sys2,
                                  const std::optional<FiberMap>& u2,
                                  const Eigen::VectorXd& x,
                                  double vertical_tol) {
  Eigen::VectorXd rhs = matching_rhs(lift, sys1, sys2, x);
  if (rhs.head(sys1.base_dim).lpNorm<Eigen::Infinity>() > vertical_tol)
    throw Error("solve_control_law: matching RHS is not vertical");
  rhs.head(sys1.base_dim).setZero();
  if (auto u2_conj = conjugated_fiber_map(lift, u2, sys1.base_dim)) {
    VectorField xh1 = hamiltonian_field(sys1.phase, sys1.hamiltonian);
    rhs += vertical_lift(*u2_conj, xh1, x);
  }
  return rhs;
}

ConjugacyResult verify_closed_loop_conjugacy(
    const CotangentLift& lift, const CHSystem& sys1, const VectorField& u1_term,
    const CHSystem& sys2, const std::optional<FiberMap>& u2,
    const Eigen::VectorXd& x02, double t_final, double dt) {
  VectorField x2_field = u2 ? closed_loop_field(sys2, u2)
                            : open_loop_field(sys2);
  VectorField x1_field = closed_loop_field_with_term(sys1, u1_term);

  Trajectory traj2 = integrate(x2_field, x02, t_final, dt);
  Trajectory traj1 = integrate(x1_field, lift.pull(x02), t_final, dt);

  ConjugacyResult result;
  for (std::size_t k = 0; k < traj2.states.size(); ++k) {
    const Eigen::VectorXd& x2 = traj2.states[k];
    result.max_trajectory_residual =
        std::max(result.max_trajectory_residual,
                 (lift.pull(x2) - traj1.states[k]).norm());
    Eigen::VectorXd field_mismatch =
        x1_field.value(lift.pull(x2)) - lift.pull_tangent(x2) * x2_field.value(x2);
    result.max_field_residual =
        std::max(result.max_field_residual, field_mismatch.norm());
  }
  return result;
}

}  // namespace chred
