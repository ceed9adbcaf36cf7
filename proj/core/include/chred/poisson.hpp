#pragma once

#include <string>
#include <vector>

#include "chred/fields.hpp"

namespace chred {

enum class PoissonKind { canonical_symplectic, lie_poisson, custom };

/// Poisson tensor field on a coordinate domain: dimension plus an evaluator
/// producing the antisymmetric matrix B(x). The sharp convention is fixed so
/// that X_H = B dH yields qdot = dH/dp, pdot = -dH/dq on canonical charts.
struct PoissonStructure {
  int dim = 0;
  MatrixFn tensor;
  PoissonKind kind = PoissonKind::custom;
  std::vector<ScalarField> declared_casimirs;

  Eigen::MatrixXd at(const Eigen::VectorXd& x) const;

  /// Canonical structure on R^{2n}, coordinates (q_1..q_n, p_1..p_n).
  static PoissonStructure canonical(int two_n);

  /// Minus Lie-Poisson structure on the dual of so(3):
  /// {f,g}(mu) = -mu . (grad f x grad g);  B_ij = -eps_ijk mu_k.
  /// ||mu||^2 is declared as a Casimir.
  static PoissonStructure lie_poisson_so3();

  static PoissonStructure custom_structure(int dim, MatrixFn tensor);
};

/// {f,g}(x) = df(x)^T B(x) dg(x). The result's gradient falls back to
/// finite differences.
ScalarField bracket(const PoissonStructure& b, const ScalarField& f,
                    const ScalarField& g);

double bracket_at(const PoissonStructure& b, const ScalarField& f,
                  const ScalarField& g, const Eigen::VectorXd& x);

/// X_H = B dH.
VectorField hamiltonian_field(const PoissonStructure& b, const ScalarField& h);

/// max over points of ||B(x) + B(x)^T||.
double antisymmetry_residual(const PoissonStructure& b,
                             const std::vector<Eigen::VectorXd>& points);

/// max over points of |{f,{g,h}} + {g,{h,f}} + {h,{f,g}}|, nested through
/// bracket(); vanishes to finite-difference accuracy for Poisson tensors.
double jacobi_residual(const PoissonStructure& b, const ScalarField& f,
                       const ScalarField& g, const ScalarField& h,
                       const std::vector<Eigen::VectorXd>& points);

/// Jacobi residual over all coordinate-function triples.
double jacobi_residual_coordinates(const PoissonStructure& b,
                                   const std::vector<Eigen::VectorXd>& points);

/// max over points of ||B(x) dC(x)||; near zero iff C is a Casimir there.
double casimir_residual(const PoissonStructure& b, const ScalarField& c,
                        const std::vector<Eigen::VectorXd>& points);

}  // namespace chred
