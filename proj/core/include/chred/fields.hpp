#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>

#include "chred/subspace.hpp"

namespace chred {

/// Base step for central differences; the actual step at x is
/// fd_step * max(1, ||x||).
inline constexpr double kFdStep = 1e-5;

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;
using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using MatrixFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

Eigen::VectorXd central_gradient(const ScalarFn& f, const Eigen::VectorXd& x,
                                 double fd_step = kFdStep);
Eigen::MatrixXd central_jacobian(const VectorFn& f, const Eigen::VectorXd& x,
                                 double fd_step = kFdStep);

/// Scalar field on a coordinate domain: evaluation plus gradient (analytic
/// when supplied, central finite differences otherwise).
struct ScalarField {
  ScalarFn value_fn;
  VectorFn grad_fn;  // optional analytic gradient
  double fd_step = kFdStep;

  ScalarField() = default;
  ScalarField(ScalarFn value, VectorFn grad = nullptr, double step = kFdStep)
      : value_fn(std::move(value)), grad_fn(std::move(grad)), fd_step(step) {}

  double value(const Eigen::VectorXd& x) const { return value_fn(x); }
  Eigen::VectorXd grad(const Eigen::VectorXd& x) const {
    return grad_fn ? grad_fn(x) : central_gradient(value_fn, x, fd_step);
  }

  static ScalarField constant(double c);
  /// The i-th coordinate function on R^dim, with exact gradient.
  static ScalarField coordinate(int i, int dim);
  /// H(x) = x^T A x / 2, with exact gradient (A symmetrized).
  static ScalarField quadratic_form(const Eigen::MatrixXd& a);
};

/// Tangent vector field: evaluation plus Jacobian (analytic or FD).
struct VectorField {
  VectorFn value_fn;
  MatrixFn jac_fn;  // optional analytic Jacobian
  double fd_step = kFdStep;

  VectorField() = default;
  VectorField(VectorFn value, MatrixFn jac = nullptr, double step = kFdStep)
      : value_fn(std::move(value)), jac_fn(std::move(jac)), fd_step(step) {}

  Eigen::VectorXd value(const Eigen::VectorXd& x) const { return value_fn(x); }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    return jac_fn ? jac_fn(x) : central_jacobian(value_fn, x, fd_step);
  }

  static VectorField zero(int dim);
  static VectorField constant(const Eigen::VectorXd& v);
};

/// [X, Y](x) = JY(x) X(x) - JX(x) Y(x).
VectorField lie_bracket(const VectorField& x, const VectorField& y);

}  // namespace chred
