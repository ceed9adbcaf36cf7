#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chred/chsys.hpp"
#include "chred/reduce.hpp"
#include "chred/rng.hpp"
#include "oracles.hpp"

using namespace chred;

namespace {

// W = {x_i = 0 for i in indices} in R^dim.
Submanifold coordinate_zero(int dim, std::vector<int> indices) {
  const int k = static_cast<int>(indices.size());
  return Submanifold::from_constraint(
      dim, k,
      [indices, k](const Eigen::VectorXd& z) {
        Eigen::VectorXd c(k);
        for (int i = 0; i < k; ++i) c[i] = z[indices[i]];
        return c;
      },
      [indices, k, dim](const Eigen::VectorXd&) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(k, dim);
        for (int i = 0; i < k; ++i) j(i, indices[i]) = 1.0;
        return j;
      });
}

std::vector<Eigen::VectorXd> on_w_points(const Submanifold& w, int n,
                                         std::uint64_t seed) {
  Rng rng(seed);
  return w.sample(rng, n, Eigen::VectorXd::Zero(w.ambient_dim()), 1.5);
}

Eigen::VectorXd unit(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

}  // namespace

TEST_CASE("submanifold basics") {
  Submanifold w = coordinate_zero(4, {3});
  SUBCASE("membership and tangent space") {
    Eigen::VectorXd z(4);
    z << 0.3, -0.8, 1.2, 0.0;
    CHECK(w.contains(z));
    Subspace tw = w.tangent_at(z);
    CHECK(tw.dim() == 3);
    CHECK(tw.distance(unit(4, 0)) < 1e-12);
    CHECK(tw.distance(unit(4, 3)) > 0.99);
  }
  SUBCASE("projection converges onto the zero set") {
    auto z = w.project(Eigen::Vector4d(0.5, 0.5, 0.5, 0.9));
    REQUIRE(z.has_value());
    CHECK(w.contains(*z));
  }
  SUBCASE("seeded sampling lands on W") {
    auto pts = on_w_points(w, 25, 1);
    CHECK(pts.size() == 25);
    for (const auto& z : pts) CHECK(w.contains(z));
  }
  SUBCASE("curved constraint via Gauss-Newton") {
    // p2 = q1^2 in canonical R4 coordinates (q1, q2, p1, p2).
    Submanifold curved = Submanifold::from_constraint(
        4, 1, [](const Eigen::VectorXd& z) {
          return Eigen::VectorXd::Constant(1, z[3] - z[0] * z[0]).eval();
        });
    auto pts = on_w_points(curved, 20, 2);
    CHECK(pts.size() == 20);
    for (const auto& z : pts) CHECK(std::abs(z[3] - z[0] * z[0]) < 1e-9);
  }
}

TEST_CASE("dw_fiber") {
  SUBCASE("transverse plane meets TW trivially") {
    Submanifold w = coordinate_zero(4, {1, 3});  // q2 = p2 = 0
    Distribution d = Distribution::spanned(
        4, {VectorField::constant(unit(4, 1)), VectorField::constant(unit(4, 3))});
    Eigen::VectorXd z = Eigen::VectorXd::Zero(4);
    z[0] = 0.7;
    CHECK(dw_fiber(d, w, z).dim() == 0);
  }
  SUBCASE("generators inside TW give back the fiber") {
    Submanifold w = coordinate_zero(4, {3});
    Distribution d = Distribution::spanned(
        4, {VectorField::constant(unit(4, 0)), VectorField::constant(unit(4, 2))});
    Eigen::VectorXd z = Eigen::VectorXd::Zero(4);
    Subspace meet = dw_fiber(d, w, z);
    CHECK(meet.dim() == 2);
    CHECK(subspace_gap(meet, d.fiber_at(z)) < 1e-12);
  }
  SUBCASE("q2 direction is tangent to {p2 = 0}") {
    Submanifold w = coordinate_zero(4, {3});
    Distribution d =
        Distribution::spanned(4, {VectorField::constant(unit(4, 1))});
    Eigen::VectorXd z = Eigen::VectorXd::Zero(4);
    Subspace meet = dw_fiber(d, w, z);
    CHECK(meet.dim() == 1);
    CHECK(meet.distance(unit(4, 1)) < 1e-12);
  }
  SUBCASE("off-manifold point is rejected") {
    Submanifold w = coordinate_zero(4, {3});
    Distribution d = Distribution::zero(4);
    CHECK_THROWS_AS(dw_fiber(d, w, Eigen::Vector4d(0, 0, 0, 0.5)), Error);
  }
}

TEST_CASE("reducibility criterion on the canonical catalog") {
  PoissonStructure b4 = PoissonStructure::canonical(4);
  SUBCASE("cosymplectic plane q2 = p2 = 0 with its characteristic distribution") {
    Submanifold w = coordinate_zero(4, {1, 3});
    Distribution d = characteristic_distribution(b4, w);
    auto result = reducibility_check(b4, w, d, on_w_points(w, 100, 3));
    CHECK(result.reducible);
    CHECK(result.points_tested == 100);
    CHECK(result.max_residual < 1e-12);
  }
  SUBCASE("coisotropic hyperplane p2 = 0") {
    Submanifold w = coordinate_zero(4, {3});
    Distribution d = characteristic_distribution(b4, w);
    // Oracle: image of ann(D) under sharp spans {q1, p1, q2} directions,
    // inside TW.
    Eigen::VectorXd z = Eigen::VectorXd::Zero(4);
    Subspace image = sharp_image(b4.at(z), annihilator(d.fiber_at(z)));
    Eigen::MatrixXd expected(4, 3);
    expected << 1, 0, 0,
                0, 0, 1,
                0, 1, 0,
                0, 0, 0;
    CHECK(oracle::span_gap(image.basis(), expected) < 1e-12);
    auto result = reducibility_check(b4, w, d, on_w_points(w, 100, 4));
    CHECK(result.reducible);
  }
  SUBCASE("lagrangian line with the zero distribution fails") {
    PoissonStructure b2 = PoissonStructure::canonical(2);
    Submanifold w = coordinate_zero(2, {0});
    auto result =
        reducibility_check(b2, w, Distribution::zero(2), on_w_points(w, 50, 5));
    CHECK_FALSE(result.reducible);
    CHECK(result.max_residual > 0.5);
  }
  SUBCASE("rank-deficient points are skipped and counted") {
    // Constraint x1^2 = 0: gradient vanishes on the whole zero set.
    Submanifold degenerate = Submanifold::from_constraint(
        2, 1, [](const Eigen::VectorXd& z) {
          return Eigen::VectorXd::Constant(1, z[0] * z[0]).eval();
        });
    PoissonStructure b2 = PoissonStructure::canonical(2);
    std::vector<Eigen::VectorXd> pts = {Eigen::Vector2d(0.0, 0.3),
                                        Eigen::Vector2d(0.0, -1.0)};
    auto result =
        reducibility_check(b2, degenerate, Distribution::zero(2), pts);
    CHECK(result.points_tested == 0);
    CHECK(result.points_skipped == 2);
    CHECK_FALSE(result.reducible);
  }
}

TEST_CASE("classification of catalog submanifolds") {
  PoissonStructure b4 = PoissonStructure::canonical(4);
  auto full_leaf = [](const Eigen::VectorXd&) { return Subspace::full(4); };
  SUBCASE("p2 = 0 is coisotropic") {
    Submanifold w = coordinate_zero(4, {3});
    auto result = classify_submanifold(b4, w, on_w_points(w, 40, 6), full_leaf);
    CHECK(result.aggregate == SubmanifoldClass::coisotropic);
    CHECK_FALSE(result.mixed);
  }
  SUBCASE("q2 = p2 = 0 is cosymplectic") {
    Submanifold w = coordinate_zero(4, {1, 3});
    auto result = classify_submanifold(b4, w, on_w_points(w, 40, 7), full_leaf);
    CHECK(result.aggregate == SubmanifoldClass::cosymplectic);
  }
  SUBCASE("the q = 0 line in R2 is coisotropic") {
    PoissonStructure b2 = PoissonStructure::canonical(2);
    Submanifold w = coordinate_zero(2, {0});
    auto leaf2 = [](const Eigen::VectorXd&) { return Subspace::full(2); };
    auto result = classify_submanifold(b2, w, on_w_points(w, 20, 8), leaf2);
    CHECK(result.aggregate == SubmanifoldClass::coisotropic);
  }
  SUBCASE("classification is representation independent") {
    // Same plane q2 = p2 = 0, constraint versus parametrization.
    Submanifold constrained = coordinate_zero(4, {1, 3});
    Submanifold parametrized = Submanifold::from_parametrization(
        4, 2, [](const Eigen::VectorXd& u) {
          Eigen::VectorXd z = Eigen::VectorXd::Zero(4);
          z[0] = u[0];
          z[2] = u[1];
          return z;
        });
    Rng rng(9);
    for (int i = 0; i < 10; ++i) {
      Eigen::VectorXd u = rng.box_point(2, 1.0);
      auto [z, tangent] = parametrized.point_and_tangent(u);
      SubmanifoldClass from_param =
          classify_point(b4, z, tangent, Subspace::full(4));
      SubmanifoldClass from_constraint =
          classify_point(b4, z, constrained.tangent_at(z), Subspace::full(4));
      CHECK(from_param == from_constraint);
    }
  }
}

TEST_CASE("characteristic distribution generators") {
  PoissonStructure b4 = PoissonStructure::canonical(4);
  SUBCASE("p2 = 0 gives the q2 direction") {
    Submanifold w = coordinate_zero(4, {3});
    Distribution d = characteristic_distribution(b4, w);
    REQUIRE(d.generators.size() == 1);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(4);
    CHECK((d.generators[0].value(z) - unit(4, 1)).norm() < 1e-12);
  }
  SUBCASE("no constraints give the zero distribution") {
    Distribution d =
        characteristic_distribution(b4, Submanifold::full_space(4));
    CHECK(d.generators.empty());
    CHECK(d.fiber_at(Eigen::VectorXd::Zero(4)).dim() == 0);
  }
  SUBCASE("angular-momentum level set via finite differences") {
    PoissonStructure b6 = PoissonStructure::canonical(6);
    Submanifold w = Submanifold::from_constraint(
        6, 1, [](const Eigen::VectorXd& z) {
          Eigen::Vector3d q = z.head<3>(), p = z.tail<3>();
          return Eigen::VectorXd::Constant(1, q.cross(p).squaredNorm() - 1.0)
              .eval();
        });
    Distribution d = characteristic_distribution(b6, w);
    Eigen::VectorXd z(6);
    z << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;  // q x p = e3, on W
    // Oracle: sharp of the analytic gradient.
    Eigen::Vector3d q = z.head<3>(), p = z.tail<3>();
    Eigen::Vector3d mu = q.cross(p);
    Eigen::VectorXd grad(6);
    grad.head<3>() = 2.0 * p.cross(mu);
    grad.tail<3>() = 2.0 * mu.cross(q);
    Eigen::VectorXd expected = b6.at(z) * grad;
    CHECK((d.generators[0].value(z) - expected).norm() < 1e-6);
  }
}

TEST_CASE("reduced bracket representative independence") {
  PoissonStructure b4 = PoissonStructure::canonical(4);
  Submanifold w = coordinate_zero(4, {3});
  Distribution d = characteristic_distribution(b4, w);  // span{d/dq2}
  Eigen::VectorXd m(4), m2(4);
  m << 0.4, -0.7, 1.1, 0.0;
  m2 = m;
  m2[1] += 0.9;  // same D_W leaf: only q2 differs
  SUBCASE("canonical pair q1, p1") {
    auto sample = reduced_bracket_sample(b4, w, d,
                                         ScalarField::coordinate(0, 4),
                                         ScalarField::coordinate(2, 4), m, m2);
    CHECK(sample.value_at_m == doctest::Approx(1.0));
    CHECK(sample.value_at_m2 == doctest::Approx(1.0));
    CHECK(sample.independence_residual < 1e-12);
  }
  SUBCASE("constant functions bracket to zero") {
    auto sample = reduced_bracket_sample(b4, w, d, ScalarField::constant(2.0),
                                         ScalarField::coordinate(0, 4), m, m2);
    CHECK(sample.value_at_m == 0.0);
    CHECK(sample.independence_residual == 0.0);
  }
  SUBCASE("non-invariant extension is rejected with the derivative") {
    // f = q1 + q2 has derivative 1 along d/dq2.
    ScalarField bad(
        [](const Eigen::VectorXd& z) { return z[0] + z[1]; },
        [](const Eigen::VectorXd&) {
          Eigen::VectorXd g(4);
          g << 1.0, 1.0, 0.0, 0.0;
          return g;
        });
    CHECK_THROWS_WITH_AS(
        reduced_bracket_sample(b4, w, d, bad, ScalarField::coordinate(2, 4), m,
                               m2),
        doctest::Contains("not invariant"), Error);
  }
  SUBCASE("finite-difference extensions stay within the acceptance budget") {
    // Same invariant pair but with no analytic gradients: the residual is
    // pure finite-difference noise and shrinks with the step.
    auto make_pair = [](double step) {
      ScalarField f([](const Eigen::VectorXd& z) {
        return std::sin(3.0 * z[0]) * (1.0 + z[3]);
      });
      ScalarField g([](const Eigen::VectorXd& z) {
        return z[0] * z[2] * z[2];
      });
      f.fd_step = step;
      g.fd_step = step;
      return std::make_pair(f, g);
    };
    auto [f5, g5] = make_pair(1e-5);
    auto fine = reduced_bracket_sample(b4, w, d, f5, g5, m, m2);
    CHECK(fine.independence_residual < 1e-7);
    auto [f2, g2] = make_pair(1e-2);
    auto coarse = reduced_bracket_sample(b4, w, d, f2, g2, m, m2, 1e-3);
    CHECK(fine.independence_residual <= coarse.independence_residual + 1e-12);
  }
  SUBCASE("residual vanishes for a nonlinear invariant pair") {
    ScalarField f(
        [](const Eigen::VectorXd& z) { return z[0] * z[0] + z[3]; },
        [](const Eigen::VectorXd& z) {
          Eigen::VectorXd g(4);
          g << 2.0 * z[0], 0.0, 0.0, 1.0;
          return g;
        });
    ScalarField g(
        [](const Eigen::VectorXd& z) { return z[0] * z[2]; },
        [](const Eigen::VectorXd& z) {
          Eigen::VectorXd grad(4);
          grad << z[2], 0.0, z[0], 0.0;
          return grad;
        });
    auto sample = reduced_bracket_sample(b4, w, d, f, g, m, m2);
    CHECK(sample.independence_residual < 1e-12);
  }
}

TEST_CASE("involutivity") {
  std::vector<Eigen::VectorXd> pts;
  Rng rng(10);
  pts.push_back(Eigen::Vector3d::Zero());
  for (int i = 0; i < 10; ++i) pts.push_back(rng.box_point(3, 1.0));
  SUBCASE("coordinate fields are involutive") {
    Distribution d = Distribution::spanned(
        3, {VectorField::constant(unit(3, 0)), VectorField::constant(unit(3, 1))});
    auto res = involutivity_check(d, pts);
    CHECK(res.involutive);
    CHECK(res.worst_residual < 1e-9);
  }
  SUBCASE("the bracket of a non-involutive pair escapes the span") {
    VectorField x = VectorField::constant(unit(3, 0));
    VectorField y([](const Eigen::VectorXd& p) {
      return Eigen::Vector3d(0.0, 1.0, p[0]).eval();
    });
    auto res = involutivity_check(Distribution::spanned(3, {x, y}), pts);
    CHECK_FALSE(res.involutive);
    CHECK(res.worst_residual >= 1.0 - 1e-9);  // distance 1 at the origin
  }
  SUBCASE("a single generator is involutive") {
    VectorField x([](const Eigen::VectorXd& p) {
      return Eigen::Vector3d(p[1], -p[0], p[2] * p[0]).eval();
    });
    CHECK(involutivity_check(Distribution::spanned(3, {x}), pts).involutive);
  }
  SUBCASE("empty distribution is rejected") {
    CHECK_THROWS_AS(involutivity_check(Distribution::zero(3), pts), Error);
  }
}

TEST_CASE("accessibility rank") {
  SUBCASE("oscillator drift with a vertical control spans the plane") {
    PoissonStructure b2 = PoissonStructure::canonical(2);
    VectorField drift = hamiltonian_field(
        b2, ScalarField::quadratic_form(Eigen::MatrixXd::Identity(2, 2)));
    std::vector<VectorField> controls = {
        VectorField::constant(Eigen::Vector2d(0.0, 1.0))};
    CHECK(accessibility_rank(drift, controls, Eigen::Vector2d(0.0, 0.0), 2) == 2);
    CHECK(accessibility_rank(drift, controls, Eigen::Vector2d(0.4, -0.9), 2) == 2);
  }
  SUBCASE("zero data has rank zero") {
    CHECK(accessibility_rank(VectorField::zero(3), {}, Eigen::Vector3d::Zero(),
                             1) == 0);
  }
  SUBCASE("bracket generation fills R3 at depth 2") {
    VectorField x = VectorField::constant(unit(3, 0));
    VectorField y([](const Eigen::VectorXd& p) {
      return Eigen::Vector3d(0.0, 1.0, p[0]).eval();
    });
    Eigen::Vector3d z(0.0, 0.0, 0.0);
    CHECK(accessibility_rank(VectorField::zero(3), {x, y}, z, 1) == 2);
    CHECK(accessibility_rank(VectorField::zero(3), {x, y}, z, 2) == 3);
  }
  SUBCASE("depth must be positive") {
    CHECK_THROWS_AS(
        accessibility_rank(VectorField::zero(2), {}, Eigen::Vector2d::Zero(), 0),
        Error);
  }
}
