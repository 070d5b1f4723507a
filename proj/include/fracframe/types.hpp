#pragma once

#include <Eigen/Dense>
#include <string_view>

namespace fracframe {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Closed parameter interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

/// How derivative and integral values are normalised.
///
/// `Stieltjes` differentiates and integrates directly against the staircase.
/// `PaperT` reproduces the t-derivative bookkeeping of the worked examples:
/// derivatives carry an extra 1/Gamma(alpha+1) and integrals an extra Gamma(alpha+1),
/// so the arc length and both fundamental theorems are unchanged.
enum class Convention { Stieltjes, PaperT };

Convention parse_convention(std::string_view name);
std::string_view to_string(Convention c);

}  // namespace fracframe
