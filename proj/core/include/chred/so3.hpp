#pragma once

#include <Eigen/Dense>

namespace chred {
namespace so3 {

/// hat: R^3 -> 3x3 skew matrices, hat(a) b = a x b.
Eigen::Matrix3d hat(const Eigen::Vector3d& a);
Eigen::Vector3d vee(const Eigen::Matrix3d& m);

/// Rodrigues exponential exp(hat(theta)).
Eigen::Matrix3d exp(const Eigen::Vector3d& theta);

/// Body-velocity Jacobian J(theta) of the exponential chart:
///   exp(hat(theta))^{-1} d/dt exp(hat(theta(t))) = hat(J(theta) thetadot).
/// Series fallback near theta = 0.
Eigen::Matrix3d body_jacobian(const Eigen::Vector3d& theta);

/// Body momentum in the exponential cotangent chart (theta, pi) on R^6:
///   mu = J(theta)^{-T} pi.
/// Pairs so that <pi, thetadot> = <mu, omega_body>; the projection is a
/// Poisson map from the canonical chart onto the minus Lie-Poisson structure.
Eigen::Vector3d body_momentum(const Eigen::VectorXd& chart_point);

}  // namespace so3
}  // namespace chred
