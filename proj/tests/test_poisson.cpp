#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chred/poisson.hpp"
#include "chred/rng.hpp"
#include "oracles.hpp"

using namespace chred;

namespace {

std::vector<Eigen::VectorXd> sample_points(int n, int dim, double hw,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < n; ++i) pts.push_back(rng.box_point(dim, hw));
  return pts;
}

// The deliberately non-Poisson tensor: B12 = 1, B13 = x1^2, B23 = 0.
// Its coordinate Jacobiator is 2 x1.
PoissonStructure tampered_r3() {
  return PoissonStructure::custom_structure(3, [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 1) = 1.0;
    m(1, 0) = -1.0;
    m(0, 2) = x[0] * x[0];
    m(2, 0) = -x[0] * x[0];
    return m;
  });
}

ScalarField random_quadratic(Rng& rng, int dim) {
  Eigen::MatrixXd a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
  return ScalarField::quadratic_form(a);
}

}  // namespace

TEST_CASE("canonical bracket values") {
  PoissonStructure b2 = PoissonStructure::canonical(2);
  ScalarField q = ScalarField::coordinate(0, 2);
  ScalarField p = ScalarField::coordinate(1, 2);
  for (const auto& x : sample_points(10, 2, 2.0, 1)) {
    CHECK(bracket_at(b2, q, p, x) == doctest::Approx(1.0));
    CHECK(bracket_at(b2, p, q, x) == doctest::Approx(-1.0));
  }
  PoissonStructure b4 = PoissonStructure::canonical(4);
  ScalarField q1 = ScalarField::coordinate(0, 4);
  ScalarField q2 = ScalarField::coordinate(1, 4);
  CHECK(bracket_at(b4, q1, q2, Eigen::VectorXd::Zero(4)) == doctest::Approx(0.0));
}

TEST_CASE("minus Lie-Poisson bracket on so(3)*") {
  PoissonStructure b = PoissonStructure::lie_poisson_so3();
  ScalarField mu1 = ScalarField::coordinate(0, 3);
  ScalarField mu2 = ScalarField::coordinate(1, 3);
  for (const auto& mu : sample_points(10, 3, 2.0, 2)) {
    // Triple-product oracle: {f,g}(mu) = -mu . (grad f x grad g).
    const Eigen::Vector3d gf = Eigen::Vector3d::UnitX();
    const Eigen::Vector3d gg = Eigen::Vector3d::UnitY();
    const double expected = -Eigen::Vector3d(mu).dot(gf.cross(gg));
    CHECK(bracket_at(b, mu1, mu2, mu) == doctest::Approx(expected));
    CHECK(bracket_at(b, mu1, mu2, mu) == doctest::Approx(-mu[2]));
  }
}

TEST_CASE("hamiltonian field against closed forms") {
  SUBCASE("oscillator") {
    PoissonStructure b = PoissonStructure::canonical(2);
    ScalarField h = ScalarField::quadratic_form(Eigen::MatrixXd::Identity(2, 2));
    VectorField xh = hamiltonian_field(b, h);
    for (const auto& x : sample_points(10, 2, 2.0, 3)) {
      Eigen::VectorXd v = xh.value(x);
      CHECK(v[0] == doctest::Approx(x[1]));
      CHECK(v[1] == doctest::Approx(-x[0]));
    }
  }
  SUBCASE("constant hamiltonian gives the zero field") {
    PoissonStructure b = PoissonStructure::canonical(4);
    VectorField xh = hamiltonian_field(b, ScalarField::constant(3.5));
    CHECK(xh.value(Eigen::VectorXd::Ones(4)).norm() == doctest::Approx(0.0));
  }
  SUBCASE("rigid body follows the Euler equations") {
    PoissonStructure b = PoissonStructure::lie_poisson_so3();
    Eigen::Vector3d inertia(1.0, 2.0, 3.0);
    ScalarField h = ScalarField::quadratic_form(
        inertia.cwiseInverse().asDiagonal().toDenseMatrix());
    VectorField xh = hamiltonian_field(b, h);
    for (const auto& mu : sample_points(10, 3, 1.5, 4)) {
      Eigen::Vector3d expected = oracle::euler_rhs(mu, inertia);
      CHECK((xh.value(mu) - expected).norm() < 1e-12);
    }
  }
}

TEST_CASE("bracket/field compatibility df.X_H = {f,H}") {
  PoissonStructure b = PoissonStructure::canonical(4);
  Rng rng(5);
  ScalarField h = random_quadratic(rng, 4);
  VectorField xh = hamiltonian_field(b, h);
  for (int trial = 0; trial < 10; ++trial) {
    ScalarField f = random_quadratic(rng, 4);
    Eigen::VectorXd x = rng.box_point(4, 1.5);
    CHECK(f.grad(x).dot(xh.value(x)) ==
          doctest::Approx(bracket_at(b, f, h, x)).epsilon(1e-10));
  }
}

TEST_CASE("bracket antisymmetry and Leibniz at random points") {
  PoissonStructure b = PoissonStructure::lie_poisson_so3();
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    ScalarField f = random_quadratic(rng, 3);
    ScalarField g = random_quadratic(rng, 3);
    ScalarField h = random_quadratic(rng, 3);
    Eigen::VectorXd x = rng.box_point(3, 1.5);
    CHECK(bracket_at(b, f, g, x) + bracket_at(b, g, f, x) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // Leibniz in the first argument: {fg, h} = f {g,h} + g {f,h}.
    ScalarField fg([f, g](const Eigen::VectorXd& y) {
      return f.value(y) * g.value(y);
    });
    const double lhs = bracket_at(b, fg, h, x);
    const double rhs = f.value(x) * bracket_at(b, g, h, x) +
                       g.value(x) * bracket_at(b, f, h, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
  }
}

TEST_CASE("jacobi residual separates Poisson from tampered tensors") {
  auto pts3 = sample_points(100, 3, 1.0, 7);
  SUBCASE("canonical R4 with random quadratics") {
    PoissonStructure b = PoissonStructure::canonical(4);
    Rng rng(8);
    ScalarField f = random_quadratic(rng, 4);
    ScalarField g = random_quadratic(rng, 4);
    ScalarField h = random_quadratic(rng, 4);
    CHECK(jacobi_residual(b, f, g, h, sample_points(50, 4, 1.0, 9)) < 1e-6);
  }
  SUBCASE("so(3)* coordinates") {
    PoissonStructure b = PoissonStructure::lie_poisson_so3();
    CHECK(jacobi_residual_coordinates(b, pts3) < 1e-6);
  }
  SUBCASE("tampered tensor fails at x1 = 1") {
    PoissonStructure b = tampered_r3();
    std::vector<Eigen::VectorXd> pts = {Eigen::Vector3d(1.0, 1.0, 1.0)};
    // Nested-bracket oracle: the coordinate Jacobiator equals 2 x1 = 2.
    const double res = jacobi_residual_coordinates(b, pts);
    CHECK(res > 0.1);
    CHECK(res == doctest::Approx(2.0).epsilon(1e-3));
  }
  SUBCASE("empty point list is rejected") {
    PoissonStructure b = PoissonStructure::canonical(2);
    CHECK_THROWS_AS(jacobi_residual(b, ScalarField::coordinate(0, 2),
                                    ScalarField::coordinate(1, 2),
                                    ScalarField::constant(1.0), {}),
                    Error);
  }
}

TEST_CASE("casimir residuals on so(3)*") {
  PoissonStructure b = PoissonStructure::lie_poisson_so3();
  auto pts = sample_points(50, 3, 1.5, 10);
  SUBCASE("|mu|^2 is a Casimir") {
    CHECK(casimir_residual(b, b.declared_casimirs[0], pts) < 1e-8);
  }
  SUBCASE("constants are Casimirs") {
    CHECK(casimir_residual(b, ScalarField::constant(2.0), pts) == 0.0);
  }
  SUBCASE("mu1 is not a Casimir at e3") {
    std::vector<Eigen::VectorXd> at = {Eigen::Vector3d(0.0, 0.0, 1.0)};
    CHECK(casimir_residual(b, ScalarField::coordinate(0, 3), at) >= 1.0);
  }
}

TEST_CASE("analytic gradients agree with finite differences at order 2") {
  Rng rng(11);
  ScalarField cubic(
      [](const Eigen::VectorXd& x) {
        return x[0] * x[0] * x[1] + 0.5 * x[2] * x[2] * x[2] - x[1] * x[2];
      },
      [](const Eigen::VectorXd& x) {
        Eigen::VectorXd g(3);
        g << 2.0 * x[0] * x[1], x[0] * x[0] - x[2], 1.5 * x[2] * x[2] - x[1];
        return g;
      });
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd x = rng.box_point(3, 1.0);
    Eigen::VectorXd exact = cubic.grad(x);
    const double err_h = (central_gradient(cubic.value_fn, x, 1e-3) - exact).norm();
    const double err_h2 =
        (central_gradient(cubic.value_fn, x, 5e-4) - exact).norm();
    CHECK(err_h2 < err_h / 3.5);  // order >= 2 under step halving
  }
}

TEST_CASE("lie bracket of vector fields") {
  SUBCASE("constant fields commute") {
    VectorField x = VectorField::constant(Eigen::Vector3d(1, 0, 0));
    VectorField y = VectorField::constant(Eigen::Vector3d(0, 1, 0));
    CHECK(lie_bracket(x, y).value(Eigen::Vector3d(0.3, -0.2, 0.5)).norm() <
          1e-12);
  }
  SUBCASE("[d/dx, d/dy + x d/dz] = d/dz") {
    VectorField x = VectorField::constant(Eigen::Vector3d(1, 0, 0));
    VectorField y([](const Eigen::VectorXd& p) {
      return Eigen::Vector3d(0.0, 1.0, p[0]).eval();
    });
    Eigen::VectorXd at = Eigen::Vector3d(0.7, -0.4, 0.2);
    CHECK((lie_bracket(x, y).value(at) - Eigen::Vector3d(0, 0, 1)).norm() <
          1e-9);
  }
  SUBCASE("[X, X] = 0") {
    VectorField x([](const Eigen::VectorXd& p) {
      return Eigen::Vector3d(p[1] * p[2], -p[0], p[0] * p[0]).eval();
    });
    CHECK(lie_bracket(x, x).value(Eigen::Vector3d(0.4, 0.1, -0.8)).norm() <
          1e-9);
  }
}
