// Acceptance suite: every criterion below runs at its pinned tolerance and
// prints one [PASS]/[FAIL] line; the exit code is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "chred/catalog.hpp"
#include "chred/report.hpp"
#include "chred/runner.hpp"
#include "chred/symmetry.hpp"
#include "oracles.hpp"

using namespace chred;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& label, bool pass,
               const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number,
              label.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

std::vector<Eigen::VectorXd> seeded_points(int n, int dim, std::uint64_t seed,
                                           double hw = 1.0) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < n; ++i) pts.push_back(rng.box_point(dim, hw));
  return pts;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

PoissonStructure tampered_structure() {
  return PoissonStructure::custom_structure(3, [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 1) = 1.0;
    m(1, 0) = -1.0;
    m(0, 2) = x[0] * x[0];
    m(2, 0) = -x[0] * x[0];
    return m;
  });
}

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

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const auto pts2 = seeded_points(100, 2, 101);
  const auto pts4 = seeded_points(100, 4, 102);
  const auto pts3 = seeded_points(100, 3, 103);
  PoissonStructure b2 = PoissonStructure::canonical(2);
  PoissonStructure b4 = PoissonStructure::canonical(4);
  PoissonStructure so3 = PoissonStructure::lie_poisson_so3();

  const double anti = std::max({antisymmetry_residual(b2, pts2),
                                antisymmetry_residual(b4, pts4),
                                antisymmetry_residual(so3, pts3)});
  const double jacobi = std::max({jacobi_residual_coordinates(b4, pts4),
                                  jacobi_residual_coordinates(so3, pts3)});
  const double tampered =
      jacobi_residual_coordinates(tampered_structure(), pts3);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  criterion(1, "Poisson structure suite",
            anti < 1e-12 && jacobi < 1e-5 && tampered > 1e-2 && seconds < 5.0,
            "antisymmetry=" + fmt(anti) + " jacobi=" + fmt(jacobi) +
                " tampered=" + fmt(tampered) + " time=" + fmt(seconds) + "s");
}

void criterion_2() {
  Rng rng(202);
  PoissonStructure b4 = PoissonStructure::canonical(4);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd x = rng.box_point(4, 1.0);
    const int d = static_cast<int>(rng.next_u64() % 5);
    Eigen::MatrixXd basis(4, d);
    for (int c = 0; c < d; ++c) basis.col(c) = rng.box_point(4, 1.0);
    worst = std::max(worst,
                     verify_characteristic_identity(b4.at(x), Subspace::span(basis),
                                                    Subspace::full(4)));
  }
  PoissonStructure so3 = PoissonStructure::lie_poisson_so3();
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd mu = rng.box_point(3, 1.0);
    if (mu.norm() < 0.2) mu = Eigen::Vector3d(0, 0, 1);
    Subspace leaf =
        Subspace::span(annihilator(Subspace::span(mu, true)).basis());
    const int d = static_cast<int>(rng.next_u64() % 4);
    Eigen::MatrixXd basis(3, d);
    for (int c = 0; c < d; ++c) basis.col(c) = rng.box_point(3, 1.0);
    worst = std::max(worst, verify_characteristic_identity(
                                so3.at(mu), Subspace::span(basis), leaf));
  }
  criterion(2, "pointwise characteristic identity", worst < 1e-8,
            "max gap=" + fmt(worst) + " over 70 subspaces");
}

void criterion_3() {
  Rng rng(303);
  PoissonStructure b4 = PoissonStructure::canonical(4);
  Submanifold w_cois = coordinate_zero(4, {3});
  Submanifold w_cosym = coordinate_zero(4, {1, 3});
  auto pts_cois = w_cois.sample(rng, 100, Eigen::VectorXd::Zero(4), 1.5);
  auto pts_cosym = w_cosym.sample(rng, 100, Eigen::VectorXd::Zero(4), 1.5);
  auto cois = reducibility_check(b4, w_cois,
                                 characteristic_distribution(b4, w_cois),
                                 pts_cois);
  auto cosym = reducibility_check(b4, w_cosym,
                                  characteristic_distribution(b4, w_cosym),
                                  pts_cosym);
  PoissonStructure b2 = PoissonStructure::canonical(2);
  Submanifold line = coordinate_zero(2, {0});
  auto counter = reducibility_check(
      b2, line, Distribution::zero(2),
      line.sample(rng, 100, Eigen::VectorXd::Zero(2), 1.5));
  criterion(3, "reducibility criterion on the canonical catalog",
            cois.reducible && cois.points_tested == 100 && cosym.reducible &&
                cosym.points_tested == 100 && !counter.reducible,
            "coisotropic=" + fmt(cois.max_residual) +
                " cosymplectic=" + fmt(cosym.max_residual) +
                " counterexample=" + fmt(counter.max_residual));
}

void criterion_4() {
  Rng rng(404);
  PoissonStructure b4 = PoissonStructure::canonical(4);
  Submanifold w = coordinate_zero(4, {3});
  Distribution d = characteristic_distribution(b4, w);
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
  double worst = 0.0;
  int pairs = 0;
  for (const auto& m : w.sample(rng, 20, Eigen::VectorXd::Zero(4), 1.5)) {
    Eigen::VectorXd m2 = m;
    m2[1] += rng.uniform(0.3, 1.2);  // same leaf of D_W
    auto sample = reduced_bracket_sample(b4, w, d, f, g, m, m2);
    worst = std::max(worst, sample.independence_residual);
    ++pairs;
  }
  criterion(4, "reduced-bracket representative independence",
            pairs == 20 && worst < 1e-7,
            "max residual=" + fmt(worst) + " over " + std::to_string(pairs) +
                " leaf pairs");
}

void criterion_5() {
  CHSystem sys1;
  sys1.base_dim = 1;
  sys1.phase = PoissonStructure::canonical(2);
  sys1.hamiltonian = ScalarField::quadratic_form(
      (Eigen::Matrix2d() << 5.0, 0.0, 0.0, 0.25).finished());
  CHSystem sys2 = sys1;
  sys2.hamiltonian =
      ScalarField::quadratic_form(Eigen::Matrix2d::Identity());
  CotangentLift lift = cotangent_lift(DiffeoMap::scaling(1, 2.0));
  VectorField u1_term([&](const Eigen::VectorXd& x) {
    return solve_control_law(lift, sys1, sys2, std::nullopt, x);
  });
  auto solved =
      verify_closed_loop_conjugacy(lift, sys1, u1_term, sys2, std::nullopt,
                               Eigen::Vector2d(1.0, 0.0), 10.0, 1e-3);
  auto zeroed =
      verify_closed_loop_conjugacy(lift, sys1, VectorField::zero(2), sys2,
                               std::nullopt, Eigen::Vector2d(1.0, 0.0), 10.0,
                               1e-3);
  criterion(5, "solved control law reproduces conjugate closed loops",
            solved.max_trajectory_residual < 1e-6 &&
                zeroed.max_trajectory_residual > 1e-1,
            "solved=" + fmt(solved.max_trajectory_residual) +
                " zeroed=" + fmt(zeroed.max_trajectory_residual));
}

void criterion_6() {
  const double bracket_res =
      lie_poisson_check_coordinates(seeded_points(100, 6, 606));
  CHSystem rb;
  rb.base_dim = 0;
  rb.phase = PoissonStructure::lie_poisson_so3();
  rb.hamiltonian = ScalarField::quadratic_form(
      Eigen::Vector3d(1.0, 0.5, 1.0 / 3.0).asDiagonal().toDenseMatrix());
  Trajectory traj = integrate(hamiltonian_field(rb.phase, rb.hamiltonian),
                              Eigen::Vector3d(1.0, 0.01, 0.0), 100.0, 1e-3);
  const double drift = diagnostics(traj, rb).casimir_drift_max;
  criterion(6, "reduced bracket relation and rigid-body Casimir",
            bracket_res < 1e-6 && drift < 1e-8,
            "bracket=" + fmt(bracket_res) + " casimir drift=" + fmt(drift));
}

void criterion_7() {
  Rng rng(707);
  PoissonStructure b6 = PoissonStructure::canonical(6);
  GroupAction so3 = GroupAction::so3_on_r3();
  auto probe =
      momentum_fiber_coisotropy(so3, b6, Eigen::Vector3d(0, 0, 1), {});
  auto pts = probe.fiber.sample(rng, 100, Eigen::VectorXd::Zero(6), 1.5);
  auto regular =
      momentum_fiber_coisotropy(so3, b6, Eigen::Vector3d(0, 0, 1), pts);
  int neither = 0;
  for (auto cls : regular.classification.per_point)
    if (cls == SubmanifoldClass::neither) ++neither;

  std::vector<Eigen::VectorXd> degenerate;
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd z(6);
    Eigen::Vector3d q = rng.box_point(3, 1.0);
    z.head<3>() = q;
    z.tail<3>() = rng.uniform(-1.0, 1.0) * q;
    degenerate.push_back(z);
  }
  auto singular =
      momentum_fiber_coisotropy(so3, b6, Eigen::Vector3d::Zero(), degenerate);
  criterion(7, "coadjoint-orbit preimage is coisotropic at regular points",
            regular.regular_points == 100 && neither == 0 &&
                regular.classification.aggregate ==
                    SubmanifoldClass::coisotropic &&
                !regular.classification.mixed &&
                singular.regular_points == 0 &&
                singular.singular_points_flagged == 50,
            "regular=" + std::to_string(regular.regular_points) +
                " neither=" + std::to_string(neither) + " flagged=" +
                std::to_string(singular.singular_points_flagged));
}

void criterion_8() {
  Rng rng_a(808);
  CrosscheckResult s1 = reduction_crosscheck(s1_crosscheck_scenario(rng_a, 60));
  Rng rng_b(809);
  CrosscheckResult rb =
      reduction_crosscheck(rigid_body_crosscheck_scenario(rng_b, 60));
  const int agreements = (s1.agree ? 1 : 0) + (rb.agree ? 1 : 0);
  criterion(8, "reducibility agreement across the reduction",
            agreements == 2 && s1.up_reducible && s1.down_reducible &&
                rb.up_reducible && rb.down_reducible && s1.invariance_ok,
            std::to_string(agreements) + "/2 agreements");
}

void criterion_9() {
  // Momentum conservation for the lifted S1 action.
  GroupAction s1 = GroupAction::s1_on_r2();
  PoissonStructure b4 = PoissonStructure::canonical(4);
  ScalarField h = ScalarField::quadratic_form(Eigen::MatrixXd::Identity(4, 4));
  MomentumMap j = momentum_map(s1);
  Eigen::VectorXd x0(4);
  x0 << 1.0, 0.0, 0.0, 1.0;
  Trajectory traj = integrate(hamiltonian_field(b4, h), x0, 10.0, 1e-3);
  double drift = 0.0;
  for (const auto& x : traj.states)
    drift = std::max(drift,
                     (j.value(x) - j.value(x0)).lpNorm<Eigen::Infinity>());

  // Equivariance of sharp under the isotropy group of the origin.
  Rng rng(909);
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(4);
  Eigen::MatrixXd b_at = b4.at(origin);
  double equiv = 0.0;
  for (int k = 0; k < 20; ++k) {
    Eigen::MatrixXd m = s1.phase_matrix(s1.random_params(rng));
    Eigen::MatrixXd cov = m.inverse().transpose();
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd alpha = rng.box_point(4, 1.0);
      equiv = std::max(equiv, (m * (b_at * alpha) - b_at * (cov * alpha)).norm());
    }
  }
  criterion(9, "momentum conservation and fixed-point equivariance",
            drift < 1e-7 && equiv < 1e-8,
            "noether drift=" + fmt(drift) + " equivariance=" + fmt(equiv));
}

void criterion_10() {
  Scenario scenario = catalog_get("coisotropic_r4");
  const std::string run1 = report_json(run_scenario(scenario));
  const std::string run2 = report_json(run_scenario(scenario));
  criterion(10, "byte-identical reports for identical scenario and seed",
            !run1.empty() && run1 == run2,
            run1 == run2 ? "identical" : "mismatch");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
