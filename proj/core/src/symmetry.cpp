#include "chred/symmetry.hpp"

#include <cmath>
#include <numbers>

namespace chred {

namespace {

Eigen::Matrix2d rot2(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

const Eigen::Matrix2d kJ2 = (Eigen::Matrix2d() << 0.0, -1.0, 1.0, 0.0).finished();

}  // namespace

GroupAction GroupAction::trivial(int config_dim) {
  GroupAction a;
  a.kind_ = GroupKind::trivial;
  a.config_dim_ = config_dim;
  a.algebra_dim_ = 0;
  return a;
}

GroupAction GroupAction::s1_on_r2() {
  GroupAction a;
  a.kind_ = GroupKind::s1;
  a.config_dim_ = 2;
  a.algebra_dim_ = 1;
  return a;
}

GroupAction GroupAction::so3_on_r3() {
  GroupAction a;
  a.kind_ = GroupKind::so3;
  a.config_dim_ = 3;
  a.algebra_dim_ = 3;
  return a;
}

GroupAction GroupAction::product(const GroupAction& left,
                                 const GroupAction& right) {
  GroupAction a;
  a.kind_ = GroupKind::product;
  a.config_dim_ = left.config_dim_ + right.config_dim_;
  a.algebra_dim_ = left.algebra_dim_ + right.algebra_dim_;
  a.left_ = std::make_shared<GroupAction>(left);
  a.right_ = std::make_shared<GroupAction>(right);
  return a;
}

Eigen::MatrixXd GroupAction::config_matrix(const Eigen::VectorXd& params) const {
  switch (kind_) {
    case GroupKind::trivial:
      return Eigen::MatrixXd::Identity(config_dim_, config_dim_);
    case GroupKind::s1:
      return rot2(params[0]);
    case GroupKind::so3:
      return so3::exp(params);
    case GroupKind::product: {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(config_dim_, config_dim_);
      const int nl = left_->config_dim_;
      m.topLeftCorner(nl, nl) =
          left_->config_matrix(params.head(left_->algebra_dim_));
      m.bottomRightCorner(config_dim_ - nl, config_dim_ - nl) =
          right_->config_matrix(params.tail(right_->algebra_dim_));
      return m;
    }
  }
  throw Error("config_matrix: unknown group kind");
}

Eigen::MatrixXd GroupAction::phase_matrix(const Eigen::VectorXd& params) const {
  Eigen::MatrixXd m = config_matrix(params);
  const int n = config_dim_;
  Eigen::MatrixXd lifted = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  lifted.topLeftCorner(n, n) = m;
  lifted.bottomRightCorner(n, n) = m.inverse().transpose();
  return lifted;
}

Eigen::VectorXd GroupAction::random_params(Rng& rng) const {
  switch (kind_) {
    case GroupKind::trivial:
      return Eigen::VectorXd(0);
    case GroupKind::s1: {
      Eigen::VectorXd p(1);
      p[0] = rng.uniform(-std::numbers::pi, std::numbers::pi);
      return p;
    }
    case GroupKind::so3: {
      Eigen::VectorXd p(3);
      for (int i = 0; i < 3; ++i) p[i] = rng.uniform(-1.5, 1.5);
      return p;
    }
    case GroupKind::product: {
      Eigen::VectorXd pl = left_->random_params(rng);
      Eigen::VectorXd pr = right_->random_params(rng);
      Eigen::VectorXd p(pl.size() + pr.size());
      p << pl, pr;
      return p;
    }
  }
  throw Error("random_params: unknown group kind");
}

Eigen::MatrixXd GroupAction::algebra_matrix(const Eigen::VectorXd& xi) const {
  switch (kind_) {
    case GroupKind::trivial:
      return Eigen::MatrixXd::Zero(config_dim_, config_dim_);
    case GroupKind::s1:
      return xi[0] * kJ2;
    case GroupKind::so3:
      return so3::hat(xi);
    case GroupKind::product: {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(config_dim_, config_dim_);
      const int nl = left_->config_dim_;
      m.topLeftCorner(nl, nl) = left_->algebra_matrix(xi.head(left_->algebra_dim_));
      m.bottomRightCorner(config_dim_ - nl, config_dim_ - nl) =
          right_->algebra_matrix(xi.tail(right_->algebra_dim_));
      return m;
    }
  }
  throw Error("algebra_matrix: unknown group kind");
}

VectorField GroupAction::generator(const Eigen::VectorXd& xi) const {
  if (xi.size() != algebra_dim_)
    throw Error("generator: algebra dimension mismatch");
  const int n = config_dim_;
  Eigen::MatrixXd a = algebra_matrix(xi);
  Eigen::MatrixXd phase_gen = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  phase_gen.topLeftCorner(n, n) = a;
  phase_gen.bottomRightCorner(n, n) = -a.transpose();
  return VectorField(
      [phase_gen](const Eigen::VectorXd& z) { return (phase_gen * z).eval(); },
      [phase_gen](const Eigen::VectorXd&) { return phase_gen; });
}

InvarianceResult is_invariant(const GroupAction& action, const ScalarField& f,
                              const std::vector<Eigen::VectorXd>& group_params,
                              const std::vector<Eigen::VectorXd>& points,
                              double tol) {
  InvarianceResult result;
  for (const auto& g : group_params) {
    Eigen::MatrixXd m = action.phase_matrix(g);
    for (const auto& x : points)
      result.max_residual = std::max(
          result.max_residual, std::abs(f.value(m * x) - f.value(x)));
  }
  result.invariant = result.max_residual < tol;
  return result;
}

InvarianceResult is_invariant(const GroupAction& action, const FiberMap& f,
                              const std::vector<Eigen::VectorXd>& group_params,
                              const std::vector<Eigen::VectorXd>& points,
                              double tol) {
  InvarianceResult result;
  for (const auto& g : group_params) {
    Eigen::MatrixXd m = action.phase_matrix(g);
    for (const auto& x : points)
      result.max_residual =
          std::max(result.max_residual,
                   (f.apply(m * x) - m * f.apply(x)).lpNorm<Eigen::Infinity>());
  }
  result.invariant = result.max_residual < tol;
  return result;
}

InvarianceResult is_invariant(const GroupAction& action, const Submanifold& w,
                              const std::vector<Eigen::VectorXd>& group_params,
                              const std::vector<Eigen::VectorXd>& w_points,
                              double memb_tol) {
  InvarianceResult result;
  for (const auto& g : group_params) {
    Eigen::MatrixXd m = action.phase_matrix(g);
    for (const auto& z : w_points)
      result.max_residual =
          std::max(result.max_residual,
                   w.constraint(m * z).lpNorm<Eigen::Infinity>());
  }
  result.invariant = result.max_residual < memb_tol;
  return result;
}

int isotropy_dim(const GroupAction& action, const Eigen::VectorXd& z,
                 double rank_tol) {
  const int a = action.algebra_dim();
  if (a == 0) return 0;
  Eigen::MatrixXd gen_values(z.size(), a);
  for (int i = 0; i < a; ++i)
    gen_values.col(i) =
        action.generator(Eigen::VectorXd::Unit(a, i)).value(z);
  return a - Subspace::span(gen_values, false, rank_tol).dim();
}

namespace {

std::string isotropy_tag(const GroupAction& action, int iso_dim) {
  switch (action.kind()) {
    case GroupKind::trivial:
      return "trivial group";
    case GroupKind::s1:
      return iso_dim == 0 ? "trivial isotropy" : "full S1";
    case GroupKind::so3:
      if (iso_dim == 0) return "trivial isotropy";
      if (iso_dim == 1) return "axial SO(2)";
      return "full SO(3)";
    default:
      return "isotropy dim " + std::to_string(iso_dim);
  }
}

}  // namespace

std::vector<Stratum> stratify(const GroupAction& action,
                              const std::vector<Eigen::VectorXd>& points) {
  std::map<int, Stratum> by_dim;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int d = isotropy_dim(action, points[i]);
    auto& stratum = by_dim[d];
    stratum.isotropy_dim = d;
    stratum.tag = isotropy_tag(action, d);
    stratum.point_indices.push_back(static_cast<int>(i));
  }
  std::vector<Stratum> out;
  for (auto& [dim, stratum] : by_dim) out.push_back(std::move(stratum));
  return out;
}

MomentumMap momentum_map(const GroupAction& action) {
  if (action.kind() == GroupKind::product)
    throw Error("momentum_map: build factor maps separately");
  const int a = action.algebra_dim();
  const int n = action.config_dim();
  std::vector<Eigen::MatrixXd> gens;
  for (int i = 0; i < a; ++i)
    gens.push_back(action.algebra_matrix(Eigen::VectorXd::Unit(a, i)));
  MomentumMap j;
  j.algebra_dim = a;
  j.j = [gens, n, a](const Eigen::VectorXd& z) {
    Eigen::VectorXd out(a);
    for (int i = 0; i < a; ++i)
      out[i] = z.tail(n).dot(gens[i] * z.head(n));
    return out;
  };
  return j;
}

double coadjoint_equivariance_residual(
    const GroupAction& action, const MomentumMap& j,
    const std::vector<Eigen::VectorXd>& group_params,
    const std::vector<Eigen::VectorXd>& points) {
  double worst = 0.0;
  for (const auto& g : group_params) {
    Eigen::MatrixXd phase = action.phase_matrix(g);
    // For the catalog actions the coadjoint action on the identified dual is
    // trivial for S1 and the rotation matrix itself for SO(3).
    Eigen::MatrixXd coad =
        action.kind() == GroupKind::so3
            ? action.config_matrix(g)
            : Eigen::MatrixXd::Identity(j.algebra_dim, j.algebra_dim);
    for (const auto& z : points)
      worst = std::max(
          worst, (j.value(phase * z) - coad * j.value(z)).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

namespace {

Submanifold s1_momentum_fiber(double level) {
  auto c = [level](const Eigen::VectorXd& z) {
    Eigen::VectorXd out(1);
    out[0] = z[0] * z[3] - z[1] * z[2] - level;
    return out;
  };
  auto jac = [](const Eigen::VectorXd& z) {
    Eigen::MatrixXd j(1, 4);
    j << z[3], -z[2], -z[1], z[0];
    return j;
  };
  return Submanifold::from_constraint(4, 1, c, jac);
}

Submanifold so3_momentum_fiber(double norm2_level) {
  auto c = [norm2_level](const Eigen::VectorXd& z) {
    Eigen::Vector3d q = z.head<3>(), p = z.tail<3>();
    Eigen::VectorXd out(1);
    out[0] = q.cross(p).squaredNorm() - norm2_level;
    return out;
  };
  auto jac = [](const Eigen::VectorXd& z) {
    Eigen::Vector3d q = z.head<3>(), p = z.tail<3>();
    Eigen::Vector3d mu = q.cross(p);
    Eigen::MatrixXd j(1, 6);
    j.leftCols(3) = (2.0 * p.cross(mu)).transpose();
    j.rightCols(3) = (2.0 * mu.cross(q)).transpose();
    return j;
  };
  return Submanifold::from_constraint(6, 1, c, jac);
}

}  // namespace

MomentumFiberResult momentum_fiber_coisotropy(
    const GroupAction& action, const PoissonStructure& b,
    const Eigen::VectorXd& orbit_value,
    const std::vector<Eigen::VectorXd>& points, double tol) {
  MomentumFiberResult result;
  switch (action.kind()) {
    case GroupKind::s1:
      result.fiber = s1_momentum_fiber(orbit_value[0]);
      break;
    case GroupKind::so3:
      result.fiber = so3_momentum_fiber(orbit_value.squaredNorm());
      break;
    default:
      throw Error("momentum_fiber_coisotropy: catalog actions only");
  }
  auto leaf = [&b](const Eigen::VectorXd&) { return Subspace::full(b.dim); };
  result.classification =
      classify_submanifold(b, result.fiber, points, leaf, tol);
  result.singular_points_flagged = result.classification.points_skipped;
  result.regular_points =
      static_cast<int>(result.classification.per_point.size());
  return result;
}

namespace {

ScalarField pullback_to_chart(const ScalarField& f) {
  return ScalarField([f](const Eigen::VectorXd& x) {
    return f.value(so3::body_momentum(x));
  });
}

}  // namespace

double lie_poisson_check(const std::vector<Eigen::VectorXd>& chart_points,
                         const ScalarField& f, const ScalarField& g) {
  PoissonStructure canonical6 = PoissonStructure::canonical(6);
  PoissonStructure lp = PoissonStructure::lie_poisson_so3();
  ScalarField fp = pullback_to_chart(f);
  ScalarField gp = pullback_to_chart(g);
  double worst = 0.0;
  for (const auto& x : chart_points) {
    const double upstairs = bracket_at(canonical6, fp, gp, x);
    const double downstairs = bracket_at(lp, f, g, so3::body_momentum(x));
    worst = std::max(worst, std::abs(upstairs - downstairs));
  }
  return worst;
}

double lie_poisson_check_coordinates(
    const std::vector<Eigen::VectorXd>& chart_points) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      worst = std::max(worst,
                       lie_poisson_check(chart_points,
                                         ScalarField::coordinate(i, 3),
                                         ScalarField::coordinate(j, 3)));
  return worst;
}

Eigen::Vector4d s1_invariants(const Eigen::VectorXd& z) {
  Eigen::Vector2d q = z.head<2>(), p = z.tail<2>();
  return Eigen::Vector4d(q.squaredNorm(), p.squaredNorm(), q.dot(p),
                         z[0] * z[3] - z[1] * z[2]);
}

double singular_reduced_bracket_s1(int i, int j, const Eigen::Vector4d& sigma) {
  if (i < 1 || i > 4 || j < 1 || j > 4)
    throw Error("singular_reduced_bracket_s1: indices must be in 1..4");
  if (i == j) return 0.0;
  if (i > j) return -singular_reduced_bracket_s1(j, i, sigma);
  if (i == 1 && j == 2) return 4.0 * sigma[2];
  if (i == 1 && j == 3) return 2.0 * sigma[0];
  if (i == 2 && j == 3) return -2.0 * sigma[1];
  return 0.0;  // s4 is a Casimir
}

PoissonStructure s1_reduced_structure() {
  PoissonStructure b;
  b.dim = 4;
  b.tensor = [](const Eigen::VectorXd& s) {
    Eigen::Vector4d sigma = s;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j)
        m(i - 1, j - 1) = singular_reduced_bracket_s1(i, j, sigma);
    return m;
  };
  b.kind = PoissonKind::custom;
  b.declared_casimirs.push_back(ScalarField(
      [](const Eigen::VectorXd& s) { return s[3]; },
      [](const Eigen::VectorXd&) { return Eigen::Vector4d(0, 0, 0, 1).eval(); }));
  b.declared_casimirs.push_back(ScalarField(
      [](const Eigen::VectorXd& s) { return s[0] * s[1] - s[2] * s[2] - s[3] * s[3]; },
      [](const Eigen::VectorXd& s) {
        return Eigen::Vector4d(s[1], s[0], -2.0 * s[2], -2.0 * s[3]).eval();
      }));
  return b;
}

namespace {

ScalarField s1_invariant_field(int k) {
  switch (k) {
    case 1:
      return ScalarField(
          [](const Eigen::VectorXd& z) { return z.head<2>().squaredNorm(); },
          [](const Eigen::VectorXd& z) {
            Eigen::VectorXd g(4);
            g << 2.0 * z[0], 2.0 * z[1], 0.0, 0.0;
            return g;
          });
    case 2:
      return ScalarField(
          [](const Eigen::VectorXd& z) { return z.tail<2>().squaredNorm(); },
          [](const Eigen::VectorXd& z) {
            Eigen::VectorXd g(4);
            g << 0.0, 0.0, 2.0 * z[2], 2.0 * z[3];
            return g;
          });
    case 3:
      return ScalarField(
          [](const Eigen::VectorXd& z) { return z[0] * z[2] + z[1] * z[3]; },
          [](const Eigen::VectorXd& z) {
            Eigen::VectorXd g(4);
            g << z[2], z[3], z[0], z[1];
            return g;
          });
    default:
      return ScalarField(
          [](const Eigen::VectorXd& z) { return z[0] * z[3] - z[1] * z[2]; },
          [](const Eigen::VectorXd& z) {
            Eigen::VectorXd g(4);
            g << z[3], -z[2], -z[1], z[0];
            return g;
          });
  }
}

}  // namespace

double s1_reduced_bracket_residual(const std::vector<Eigen::VectorXd>& points) {
  PoissonStructure canonical4 = PoissonStructure::canonical(4);
  double worst = 0.0;
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      ScalarField fi = s1_invariant_field(i);
      ScalarField fj = s1_invariant_field(j);
      for (const auto& z : points) {
        const double canonical = bracket_at(canonical4, fi, fj, z);
        const double table =
            singular_reduced_bracket_s1(i, j, s1_invariants(z));
        worst = std::max(worst, std::abs(canonical - table));
      }
    }
  }
  return worst;
}

CrosscheckResult reduction_crosscheck(const CrosscheckScenario& scenario,
                                    double tol) {
  CrosscheckResult result;
  if (scenario.action) {
    InvarianceResult w_inv =
        is_invariant(*scenario.action, scenario.w_up, scenario.group_params,
                     scenario.points_up, 1e-6);
    double gen_res = 0.0;
    for (const auto& g : scenario.group_params) {
      Eigen::MatrixXd m = scenario.action->phase_matrix(g);
      for (const auto& gen : scenario.d_up.generators)
        for (const auto& z : scenario.points_up)
          gen_res = std::max(
              gen_res, (m * gen.value(z) - gen.value(m * z)).norm());
    }
    result.invariance_ok = w_inv.invariant && gen_res < 1e-6;
  }
  ReducibilityResult up = reducibility_check(scenario.b_up, scenario.w_up,
                                             scenario.d_up, scenario.points_up,
                                             tol);
  ReducibilityResult down =
      reducibility_check(scenario.b_down, scenario.w_down, scenario.d_down,
                         scenario.points_down, tol);
  result.up_reducible = up.reducible;
  result.down_reducible = down.reducible;
  result.up_residual = up.max_residual;
  result.down_residual = down.max_residual;
  result.agree = up.reducible == down.reducible;
  return result;
}

CrosscheckScenario s1_crosscheck_scenario(Rng& rng, int n_points,
                                          double level) {
  CrosscheckScenario s;
  s.name = "s1_free_region";
  s.b_up = PoissonStructure::canonical(4);
  s.w_up = s1_momentum_fiber(level);
  GroupAction action = GroupAction::s1_on_r2();
  Eigen::VectorXd xi(1);
  xi[0] = 1.0;
  s.d_up = Distribution::spanned(4, {action.generator(xi)});
  s.d_up.claimed_poisson = true;
  s.d_up.claimed_integrable = true;
  s.d_up.claimed_g_invariant = true;
  s.points_up = s.w_up.sample(rng, n_points, Eigen::VectorXd::Zero(4), 1.5);

  s.b_down = s1_reduced_structure();
  // W pushes to {s4 = level}; the orbit distribution pushes to zero.
  auto c_down = [level](const Eigen::VectorXd& sig) {
    Eigen::VectorXd out(1);
    out[0] = sig[3] - level;
    return out;
  };
  auto jac_down = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd j(1, 4);
    j << 0.0, 0.0, 0.0, 1.0;
    return j;
  };
  s.w_down = Submanifold::from_constraint(4, 1, c_down, jac_down);
  s.d_down = Distribution::zero(4);
  for (const auto& z : s.points_up)
    s.points_down.push_back(s1_invariants(z));

  s.action = action;
  for (int i = 0; i < 8; ++i) s.group_params.push_back(action.random_params(rng));
  return s;
}

CrosscheckScenario rigid_body_crosscheck_scenario(Rng& rng, int n_points,
                                                  double casimir_level) {
  CrosscheckScenario s;
  s.name = "rigid_body";
  s.b_up = PoissonStructure::canonical(6);
  auto c_up = [casimir_level](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(1);
    out[0] = so3::body_momentum(x).squaredNorm() - casimir_level;
    return out;
  };
  s.w_up = Submanifold::from_constraint(6, 1, c_up);
  s.d_up = characteristic_distribution(s.b_up, s.w_up);
  // Seeds stay well inside the exponential chart.
  s.points_up = s.w_up.sample(rng, n_points, Eigen::VectorXd::Zero(6), 0.8);

  s.b_down = PoissonStructure::lie_poisson_so3();
  auto c_down = [casimir_level](const Eigen::VectorXd& mu) {
    Eigen::VectorXd out(1);
    out[0] = mu.squaredNorm() - casimir_level;
    return out;
  };
  auto jac_down = [](const Eigen::VectorXd& mu) {
    return (2.0 * mu.transpose()).eval();
  };
  s.w_down = Submanifold::from_constraint(3, 1, c_down, jac_down);
  // The pushforward of the characteristic generators is the downstairs
  // characteristic distribution, whose single generator vanishes on W.
  s.d_down = characteristic_distribution(s.b_down, s.w_down);
  for (const auto& x : s.points_up)
    s.points_down.push_back(so3::body_momentum(x));
  return s;
}

}  // namespace chred
