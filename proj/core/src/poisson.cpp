#include "chred/poisson.hpp"

#include <cmath>

namespace chred {

Eigen::MatrixXd PoissonStructure::at(const Eigen::VectorXd& x) const {
  if (x.size() != dim) throw Error("poisson: point dimension mismatch");
  return tensor(x);
}

PoissonStructure PoissonStructure::canonical(int two_n) {
  if (two_n <= 0 || two_n % 2 != 0)
    throw Error("canonical structure needs even positive dimension");
  const int n = two_n / 2;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(two_n, two_n);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  PoissonStructure b;
  b.dim = two_n;
  b.tensor = [j](const Eigen::VectorXd&) { return j; };
  b.kind = PoissonKind::canonical_symplectic;
  return b;
}

PoissonStructure PoissonStructure::lie_poisson_so3() {
  PoissonStructure b;
  b.dim = 3;
  b.tensor = [](const Eigen::VectorXd& mu) {
    Eigen::MatrixXd m(3, 3);
    m << 0.0, -mu[2], mu[1],
         mu[2], 0.0, -mu[0],
         -mu[1], mu[0], 0.0;
    return m;
  };
  b.kind = PoissonKind::lie_poisson;
  b.declared_casimirs.push_back(ScalarField(
      [](const Eigen::VectorXd& mu) { return mu.squaredNorm(); },
      [](const Eigen::VectorXd& mu) { return (2.0 * mu).eval(); }));
  return b;
}

PoissonStructure PoissonStructure::custom_structure(int dim, MatrixFn tensor) {
  PoissonStructure b;
  b.dim = dim;
  b.tensor = std::move(tensor);
  b.kind = PoissonKind::custom;
  return b;
}

double bracket_at(const PoissonStructure& b, const ScalarField& f,
                  const ScalarField& g, const Eigen::VectorXd& x) {
  return f.grad(x).dot(b.at(x) * g.grad(x));
}

ScalarField bracket(const PoissonStructure& b, const ScalarField& f,
                    const ScalarField& g) {
  return ScalarField(
      [b, f, g](const Eigen::VectorXd& x) { return bracket_at(b, f, g, x); });
}

VectorField hamiltonian_field(const PoissonStructure& b, const ScalarField& h) {
  return VectorField([b, h](const Eigen::VectorXd& x) {
    return (b.at(x) * h.grad(x)).eval();
  });
}

double antisymmetry_residual(const PoissonStructure& b,
                             const std::vector<Eigen::VectorXd>& points) {
  double worst = 0.0;
  for (const auto& x : points) {
    Eigen::MatrixXd m = b.at(x);
    worst = std::max(worst, (m + m.transpose()).norm());
  }
  return worst;
}

double jacobi_residual(const PoissonStructure& b, const ScalarField& f,
                       const ScalarField& g, const ScalarField& h,
                       const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) throw Error("jacobi_residual: empty point list");
  ScalarField fg = bracket(b, f, g);
  ScalarField gh = bracket(b, g, h);
  ScalarField hf = bracket(b, h, f);
  double worst = 0.0;
  for (const auto& x : points) {
    const double cycle = bracket_at(b, f, gh, x) + bracket_at(b, g, hf, x) +
                         bracket_at(b, h, fg, x);
    worst = std::max(worst, std::abs(cycle));
  }
  return worst;
}

double jacobi_residual_coordinates(const PoissonStructure& b,
                                   const std::vector<Eigen::VectorXd>& points) {
  double worst = 0.0;
  for (int i = 0; i < b.dim; ++i)
    for (int j = i + 1; j < b.dim; ++j)
      for (int k = j + 1; k < b.dim; ++k)
        worst = std::max(
            worst, jacobi_residual(b, ScalarField::coordinate(i, b.dim),
                                   ScalarField::coordinate(j, b.dim),
                                   ScalarField::coordinate(k, b.dim), points));
  return worst;
}

double casimir_residual(const PoissonStructure& b, const ScalarField& c,
                        const std::vector<Eigen::VectorXd>& points) {
  double worst = 0.0;
  for (const auto& x : points)
    worst = std::max(worst, (b.at(x) * c.grad(x)).norm());
  return worst;
}

}  // namespace chred
