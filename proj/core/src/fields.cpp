#include "chred/fields.hpp"

#include <algorithm>
#include <cmath>

namespace chred {

namespace {
double step_at(const Eigen::VectorXd& x, double fd_step) {
  return fd_step * std::max(1.0, x.norm());
}
}  // namespace

Eigen::VectorXd central_gradient(const ScalarFn& f, const Eigen::VectorXd& x,
                                 double fd_step) {
  const double h = step_at(x, fd_step);
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

Eigen::MatrixXd central_jacobian(const VectorFn& f, const Eigen::VectorXd& x,
                                 double fd_step) {
  const double h = step_at(x, fd_step);
  Eigen::VectorXd xp = x, xm = x;
  Eigen::MatrixXd jac;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    Eigen::VectorXd col = (f(xp) - f(xm)) / (2.0 * h);
    if (jac.size() == 0) jac.resize(col.size(), x.size());
    jac.col(i) = col;
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return jac;
}

ScalarField ScalarField::constant(double c) {
  return ScalarField([c](const Eigen::VectorXd&) { return c; },
                     [](const Eigen::VectorXd& x) {
                       return Eigen::VectorXd::Zero(x.size()).eval();
                     });
}

ScalarField ScalarField::coordinate(int i, int dim) {
  if (i < 0 || i >= dim) throw Error("coordinate index out of range");
  return ScalarField(
      [i](const Eigen::VectorXd& x) { return x[i]; },
      [i, dim](const Eigen::VectorXd&) {
        return Eigen::VectorXd::Unit(dim, i).eval();
      });
}

ScalarField ScalarField::quadratic_form(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  return ScalarField(
      [sym](const Eigen::VectorXd& x) { return 0.5 * x.dot(sym * x); },
      [sym](const Eigen::VectorXd& x) { return (sym * x).eval(); });
}

VectorField VectorField::zero(int dim) {
  return VectorField(
      [dim](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(dim).eval(); },
      [dim](const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Zero(dim, dim).eval();
      });
}

VectorField VectorField::constant(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  return VectorField(
      [v](const Eigen::VectorXd&) { return v; },
      [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n, n).eval(); });
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  return VectorField([x, y](const Eigen::VectorXd& p) {
    return (y.jacobian(p) * x.value(p) - x.jacobian(p) * y.value(p)).eval();
  });
}

}  // namespace chred
