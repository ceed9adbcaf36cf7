#include "chred/so3.hpp"

#include <cmath>

#include "chred/subspace.hpp"

namespace chred {
namespace so3 {

Eigen::Matrix3d hat(const Eigen::Vector3d& a) {
  Eigen::Matrix3d m;
  m << 0.0, -a[2], a[1],
       a[2], 0.0, -a[0],
       -a[1], a[0], 0.0;
  return m;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
  return Eigen::Vector3d(m(2, 1), m(0, 2), m(1, 0));
}

Eigen::Matrix3d exp(const Eigen::Vector3d& theta) {
  const double t = theta.norm();
  const Eigen::Matrix3d k = hat(theta);
  if (t < 1e-8) {
    return Eigen::Matrix3d::Identity() + k + 0.5 * k * k;
  }
  return Eigen::Matrix3d::Identity() + (std::sin(t) / t) * k +
         ((1.0 - std::cos(t)) / (t * t)) * k * k;
}

Eigen::Matrix3d body_jacobian(const Eigen::Vector3d& theta) {
  const double t = theta.norm();
  const Eigen::Matrix3d k = hat(theta);
  double c1, c2;  // coefficients of k and k^2
  if (t < 1e-4) {
    const double t2 = t * t;
    c1 = 0.5 - t2 / 24.0;
    c2 = 1.0 / 6.0 - t2 / 120.0;
  } else {
    c1 = (1.0 - std::cos(t)) / (t * t);
    c2 = (t - std::sin(t)) / (t * t * t);
  }
  return Eigen::Matrix3d::Identity() - c1 * k + c2 * k * k;
}

Eigen::Vector3d body_momentum(const Eigen::VectorXd& chart_point) {
  if (chart_point.size() != 6)
    throw Error("body_momentum: expects a 6-dim chart point (theta, pi)");
  const Eigen::Vector3d theta = chart_point.head<3>();
  // The chart stays well inside the injectivity radius; the velocity
  // Jacobian degenerates at |theta| = 2 pi.
  if (theta.norm() >= 3.0)
    throw Error("body_momentum: chart point outside the validity region");
  const Eigen::Vector3d pi = chart_point.tail<3>();
  return body_jacobian(theta).transpose().partialPivLu().solve(pi);
}

}  // namespace so3
}  // namespace chred
