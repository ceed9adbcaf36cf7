#include <benchmark/benchmark.h>

#include "chred/catalog.hpp"
#include "chred/runner.hpp"
#include "chred/symmetry.hpp"

namespace {

void ReducibilityPoint(benchmark::State& state) {
  auto b = chred::PoissonStructure::canonical(4);
  auto w = chred::Submanifold::from_constraint(
      4, 1,
      [](const Eigen::VectorXd& z) {
        Eigen::VectorXd c(1);
        c[0] = z[3];
        return c;
      },
      [](const Eigen::VectorXd&) {
        Eigen::MatrixXd j(1, 4);
        j << 0, 0, 0, 1;
        return j;
      });
  auto d = chred::characteristic_distribution(b, w);
  chred::Rng rng(1);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 16; ++i) {
    Eigen::VectorXd z = rng.box_point(4, 1.0);
    z[3] = 0.0;
    pts.push_back(z);
  }
  for (auto _ : state) {
    auto result = chred::reducibility_check(b, w, d, pts);
    benchmark::DoNotOptimize(result.max_residual);
  }
  state.SetItemsProcessed(state.iterations() * pts.size());
}
BENCHMARK(ReducibilityPoint);

void BracketEval(benchmark::State& state) {
  auto b = chred::PoissonStructure::lie_poisson_so3();
  auto f = chred::ScalarField::coordinate(0, 3);
  auto g = chred::ScalarField::coordinate(1, 3);
  Eigen::VectorXd mu(3);
  mu << 0.3, -0.2, 0.9;
  for (auto _ : state)
    benchmark::DoNotOptimize(chred::bracket_at(b, f, g, mu));
}
BENCHMARK(BracketEval);

void RigidBodyStep(benchmark::State& state) {
  auto b = chred::PoissonStructure::lie_poisson_so3();
  Eigen::MatrixXd inv_inertia = Eigen::Vector3d(1.0, 0.5, 1.0 / 3.0).asDiagonal();
  auto h = chred::ScalarField::quadratic_form(inv_inertia);
  auto field = chred::hamiltonian_field(b, h);
  Eigen::VectorXd mu(3);
  mu << 1.0, 0.01, 0.0;
  const long steps = state.range(0);
  for (auto _ : state) {
    auto traj = chred::integrate(field, mu, steps * 1e-3, 1e-3);
    benchmark::DoNotOptimize(traj.states.back());
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(RigidBodyStep)->Arg(100)->Arg(1000);

void AnnihilatorR6(benchmark::State& state) {
  chred::Rng rng(2);
  Eigen::MatrixXd basis(6, 3);
  for (int c = 0; c < 3; ++c) basis.col(c) = rng.box_point(6, 1.0);
  auto v = chred::Subspace::span(basis);
  for (auto _ : state)
    benchmark::DoNotOptimize(chred::annihilator(v).dim());
}
BENCHMARK(AnnihilatorR6);

void ScenarioCoisotropic(benchmark::State& state) {
  auto scenario = chred::catalog_get("coisotropic_r4");
  for (auto _ : state) {
    auto report = chred::run_scenario(scenario);
    benchmark::DoNotOptimize(report.all_pass());
  }
}
BENCHMARK(ScenarioCoisotropic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
