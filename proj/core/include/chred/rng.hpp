#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace chred {

/// Deterministic 64-bit generator (splitmix64). Reports must be byte-stable
/// across platforms, so we avoid std::uniform_real_distribution, whose output
/// is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform point in the axis-aligned box center +- half_width.
  Eigen::VectorXd box_point(const Eigen::VectorXd& center, double half_width) {
    Eigen::VectorXd x(center.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x[i] = center[i] + uniform(-half_width, half_width);
    return x;
  }

  /// Uniform point in [-hw, hw]^dim.
  Eigen::VectorXd box_point(int dim, double half_width = 1.0) {
    return box_point(Eigen::VectorXd::Zero(dim), half_width);
  }

 private:
  std::uint64_t state_;
};

}  // namespace chred
