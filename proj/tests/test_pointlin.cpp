#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chred/poisson.hpp"
#include "chred/rng.hpp"
#include "chred/subspace.hpp"
#include "oracles.hpp"

using namespace chred;

namespace {

Eigen::MatrixXd cols(std::initializer_list<Eigen::VectorXd> vs) {
  Eigen::MatrixXd m(vs.begin()->size(), static_cast<Eigen::Index>(vs.size()));
  Eigen::Index c = 0;
  for (const auto& v : vs) m.col(c++) = v;
  return m;
}

Eigen::VectorXd unit(int n, int i) { return Eigen::VectorXd::Unit(n, i); }

Subspace random_subspace(Rng& rng, int n, int dim, bool dual = false) {
  Eigen::MatrixXd m(n, dim);
  for (int c = 0; c < dim; ++c) m.col(c) = rng.box_point(n, 1.0);
  return Subspace::span(m, dual);
}

}  // namespace

TEST_CASE("annihilator of coordinate spans") {
  SUBCASE("full space annihilates to zero") {
    CHECK(annihilator(Subspace::full(3)).dim() == 0);
  }
  SUBCASE("zero subspace annihilates to the full dual") {
    Subspace ann = annihilator(Subspace::zero(3));
    CHECK(ann.dim() == 3);
    CHECK(ann.dual());
  }
  SUBCASE("span{e1} in R3") {
    Subspace v = Subspace::span(unit(3, 0));
    Subspace ann = annihilator(v);
    CHECK(ann.dim() == 2);
    // Oracle: kernel of basis^T via LU.
    Eigen::MatrixXd expected = oracle::lu_nullspace(v.basis().transpose());
    CHECK(oracle::span_gap(ann.basis(), expected) < 1e-12);
    CHECK(oracle::span_gap(ann.basis(), cols({unit(3, 1), unit(3, 2)})) < 1e-12);
  }
  SUBCASE("dimension mismatch in construction") {
    Eigen::MatrixXd empty_rows(0, 0);
    CHECK_THROWS_AS(Subspace::span(empty_rows), Error);
  }
}

TEST_CASE("annihilator dimension formula and involution") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const int d = static_cast<int>(rng.next_u64() % (n + 1));
    Subspace v = random_subspace(rng, n, d);
    Subspace ann = annihilator(v);
    CHECK(v.dim() + ann.dim() == n);
    CHECK(subspace_gap(annihilator(ann), v) < 1e-10);
  }
}

TEST_CASE("sharp_image on the canonical tensor") {
  PoissonStructure b = PoissonStructure::canonical(4);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  SUBCASE("dq1 maps to the p1 direction") {
    Subspace w = Subspace::span(unit(4, 0), /*dual=*/true);
    Subspace image = sharp_image(b.at(x), w);
    // Oracle: direct matrix-vector product.
    Eigen::VectorXd expected = b.at(x) * unit(4, 0);
    CHECK(image.dim() == 1);
    CHECK(oracle::span_gap(image.basis(), expected) < 1e-14);
    CHECK(oracle::span_gap(image.basis(), unit(4, 2)) < 1e-14);
  }
  SUBCASE("zero covector space maps to zero") {
    CHECK(sharp_image(b.at(x), Subspace::zero(4, true)).dim() == 0);
  }
  SUBCASE("non-antisymmetric matrix is rejected with the diagnostic norm") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
    CHECK_THROWS_WITH_AS(sharp_image(bad, Subspace::zero(4, true)),
                         doctest::Contains("||B+B^T||"), Error);
  }
  SUBCASE("tangent-flagged argument is rejected") {
    CHECK_THROWS_AS(sharp_image(b.at(x), Subspace::zero(4, false)), Error);
  }
}

TEST_CASE("sharp_image on the so(3)* tensor at mu = e3") {
  PoissonStructure b = PoissonStructure::lie_poisson_so3();
  Eigen::VectorXd mu = unit(3, 2);
  Subspace w = Subspace::span(unit(3, 1), /*dual=*/true);
  Subspace image = sharp_image(b.at(mu), w);
  // Explicit 3x3 product: B(e3) dmu2 = (1, 0, 0) direction.
  CHECK(image.dim() == 1);
  CHECK(oracle::span_gap(image.basis(), unit(3, 0)) < 1e-14);
}

TEST_CASE("sharp pairing antisymmetry") {
  PoissonStructure b = PoissonStructure::lie_poisson_so3();
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd mu = rng.box_point(3, 2.0);
    Eigen::VectorXd alpha = rng.box_point(3, 1.0);
    Eigen::VectorXd beta = rng.box_point(3, 1.0);
    const double lhs = alpha.dot(b.at(mu) * beta);
    const double rhs = -beta.dot(b.at(mu) * alpha);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("sum, intersection, inclusion") {
  SUBCASE("disjoint coordinate spans add up") {
    Subspace s = subspace_sum(Subspace::span(unit(3, 0)),
                              Subspace::span(unit(3, 1)));
    CHECK(s.dim() == 2);
    CHECK(oracle::span_gap(s.basis(), cols({unit(3, 0), unit(3, 1)})) < 1e-14);
  }
  SUBCASE("intersection via the double annihilator") {
    Subspace u = Subspace::span(cols({unit(3, 0), unit(3, 1)}));
    Subspace v = Subspace::span(cols({unit(3, 1), unit(3, 2)}));
    Subspace meet = subspace_intersect(u, v);
    CHECK(meet.dim() == 1);
    CHECK(oracle::span_gap(meet.basis(), unit(3, 1)) < 1e-12);
  }
  SUBCASE("inclusion holds for a combined vector") {
    Eigen::VectorXd diag = unit(3, 0) + unit(3, 1);
    CHECK(is_subspace_of(Subspace::span(diag),
                         Subspace::span(cols({unit(3, 0), unit(3, 1)}))));
    CHECK(inclusion_residual(Subspace::span(diag),
                             Subspace::span(cols({unit(3, 0), unit(3, 1)}))) <
          1e-14);
  }
  SUBCASE("inclusion fails off the span") {
    CHECK_FALSE(is_subspace_of(Subspace::span(unit(3, 2)),
                               Subspace::span(unit(3, 0))));
  }
  SUBCASE("flag mismatch throws") {
    CHECK_THROWS_AS(subspace_sum(Subspace::zero(3, true), Subspace::zero(3, false)),
                    Error);
  }
}

TEST_CASE("random intersections match the LU oracle") {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_u64() % 3);
    Subspace u = random_subspace(rng, n, 1 + static_cast<int>(rng.next_u64() % n));
    Subspace v = random_subspace(rng, n, 1 + static_cast<int>(rng.next_u64() % n));
    Subspace meet = subspace_intersect(u, v);
    // Oracle: x in U ^ V iff x = U a = V b; kernel of [U -V] gives (a, b).
    Eigen::MatrixXd stacked(n, u.dim() + v.dim());
    stacked << u.basis(), -v.basis();
    Eigen::MatrixXd kernel = oracle::lu_nullspace(stacked);
    Eigen::MatrixXd meet_oracle(n, kernel.cols());
    for (Eigen::Index c = 0; c < kernel.cols(); ++c)
      meet_oracle.col(c) = u.basis() * kernel.col(c).head(u.dim());
    CHECK(oracle::span_gap(meet.basis(), meet_oracle) < 1e-9);
  }
}

TEST_CASE("characteristic identity on symplectic R4") {
  PoissonStructure b = PoissonStructure::canonical(4);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  Subspace leaf = Subspace::full(4);
  SUBCASE("single flow direction") {
    const double res =
        verify_characteristic_identity(b.at(x), Subspace::span(unit(4, 0)), leaf);
    CHECK(res < 1e-12);
  }
  SUBCASE("full space maps to itself") {
    CHECK(verify_characteristic_identity(b.at(x), Subspace::full(4), leaf) <
          1e-12);
  }
}

TEST_CASE("characteristic identity on so(3)* with the leaf tangent") {
  PoissonStructure b = PoissonStructure::lie_poisson_so3();
  Eigen::VectorXd mu = unit(3, 2);
  Subspace leaf = Subspace::span(cols({unit(3, 0), unit(3, 1)}));
  // Brute-force both sides for V = span{d/dmu1}.
  Subspace v = Subspace::span(unit(3, 0));
  CHECK(verify_characteristic_identity(b.at(mu), v, leaf) < 1e-12);
}

TEST_CASE("characteristic identity on random subspaces") {
  Rng rng(2024);
  PoissonStructure b4 = PoissonStructure::canonical(4);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x = rng.box_point(4, 1.0);
    const int d = static_cast<int>(rng.next_u64() % 5);
    Subspace v = random_subspace(rng, 4, d);
    CHECK(verify_characteristic_identity(b4.at(x), v, Subspace::full(4)) < 1e-8);
  }
  PoissonStructure so3 = PoissonStructure::lie_poisson_so3();
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd mu = rng.box_point(3, 1.0);
    if (mu.norm() < 0.2) mu = unit(3, 2);
    // Leaf tangent: orthogonal complement of mu.
    Subspace leaf = annihilator(Subspace::span(mu, true));
    Subspace leaf_tangent = Subspace::span(leaf.basis());
    const int d = static_cast<int>(rng.next_u64() % 4);
    Subspace v = random_subspace(rng, 3, d);
    CHECK(verify_characteristic_identity(so3.at(mu), v, leaf_tangent) < 1e-8);
  }
}

TEST_CASE("sharp images stay inside the characteristic image") {
  PoissonStructure so3 = PoissonStructure::lie_poisson_so3();
  Rng rng(314);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd mu = rng.box_point(3, 1.5);
    Subspace characteristic = sharp_image(so3.at(mu), Subspace::full(3, true));
    const int d = static_cast<int>(rng.next_u64() % 4);
    Subspace w = random_subspace(rng, 3, d, /*dual=*/true);
    CHECK(is_subspace_of(sharp_image(so3.at(mu), w), characteristic, 1e-9));
  }
}

TEST_CASE("degenerate tensor directions collapse to zero instead of noise") {
  PoissonStructure so3 = PoissonStructure::lie_poisson_so3();
  Eigen::VectorXd mu(3);
  mu << 0.3, -0.7, 1.1;
  // mu spans the kernel of B(mu); its image must be the zero subspace.
  Subspace kernel_dir = Subspace::span(mu, /*dual=*/true);
  CHECK(sharp_image(so3.at(mu), kernel_dir).dim() == 0);
}

TEST_CASE("orthonormal storage keeps gap comparisons conditioned") {
  // Nearly dependent generating vectors collapse to the right rank.
  Eigen::MatrixXd m(3, 2);
  m.col(0) = unit(3, 0);
  m.col(1) = unit(3, 0) + 1e-13 * unit(3, 1);
  Subspace v = Subspace::span(m);
  CHECK(v.dim() == 1);
  CHECK((v.basis().transpose() * v.basis() -
         Eigen::MatrixXd::Identity(v.dim(), v.dim()))
            .norm() < 1e-13);
}
