#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fracframe/types.hpp"

namespace fracframe {

/// Default cap on the number of points a single sampling call may produce.
inline constexpr std::size_t kDefaultPointBudget = std::size_t{1} << 24;

/// A continuous map from a parameter interval into R^d.
///
/// `depth` is a truncation hint for curves defined by a recursion; smooth curves ignore it.
/// `branching()` is the natural refinement factor used for delta and step schedules.
class ParametricCurve {
 public:
  virtual ~ParametricCurve() = default;

  virtual std::size_t dimension() const = 0;
  virtual VecX at(double t, int depth) const = 0;
  virtual int branching() const { return 2; }
  virtual Interval domain() const { return {0.0, 1.0}; }
};

/// Wraps an arbitrary callable as a curve.
class FunctionCurve final : public ParametricCurve {
 public:
  using Fn = std::function<VecX(double)>;

  FunctionCurve(std::size_t dim, Fn fn, Interval domain = {0.0, 1.0}, int branching = 2);

  std::size_t dimension() const override { return dim_; }
  VecX at(double t, int depth) const override;
  int branching() const override { return branching_; }
  Interval domain() const override { return domain_; }

  /// u(t) = start + t (end - start) on [0,1].
  static FunctionCurve segment(const VecX& start, const VecX& end);

 private:
  std::size_t dim_;
  Fn fn_;
  Interval domain_;
  int branching_;
};

/// Q = scale * R(angle): a rotation followed by a uniform contraction.
struct SimilarityMap {
  double scale = 0.5;
  double angle = 0.0;  // radians

  Mat2 matrix() const;
  Vec2 apply(const Vec2& r) const { return matrix() * r; }
};

struct ValidationReport {
  bool valid = false;
  /// max |(sum_i Q_i - I)_{rc}|
  double deviation = 0.0;
  std::vector<bool> scale_ok;
  std::size_t map_count = 0;

  /// Human-readable reason for invalidity, naming the first failing map.
  std::string message() const;
};

inline constexpr double kClosureTolerance = 1e-12;

ValidationReport validate_ifs(std::span<const SimilarityMap> maps);

struct Polyline {
  std::vector<Vec2> points;
  int level = 0;
};

/// Self-similar curve u:[0,1] -> R^2 generated by rotation-scaling maps whose matrix sum is the
/// identity. Joint j of the first generation sits at sum_{i<j} Q_i r0; u(0) = 0 and u(1) = r0.
class IFSCurve final : public ParametricCurve {
 public:
  /// Throws InvalidIfsError when validate_ifs rejects the maps.
  IFSCurve(std::vector<SimilarityMap> maps, Vec2 anchor);

  std::size_t dimension() const override { return 2; }
  VecX at(double t, int depth) const override;
  int branching() const override { return static_cast<int>(maps_.size()); }

  const std::vector<SimilarityMap>& maps() const { return maps_; }
  const Vec2& anchor() const { return anchor_; }
  std::size_t map_count() const { return maps_.size(); }
  double max_scale() const { return max_scale_; }

  /// Depth-truncated recursion value of u(t). Throws DomainError for t outside [0,1].
  Vec2 eval_point(double t, int depth) const;

  /// Exact joint u(index / m^level), 0 <= index <= m^level, computed from base-m digits.
  Vec2 eval_adic(std::uint64_t index, int level) const;

  /// u at all m-adic points j/m^level. Throws ResourceError if m^level + 1 > budget.
  Polyline sample_polyline(int level, std::size_t point_budget = kDefaultPointBudget) const;

  /// Bound C with |eval_point(t, d+1) - eval_point(t, d)| <= max_scale^d * C for every t.
  double increment_bound() const { return increment_bound_; }

  /// Bound on |eval_point(t, depth) - u(t)|.
  double truncation_error_bound(int depth) const;

  /// Root of sum_i s_i^alpha = 1.
  double similarity_dimension() const;

 private:
  std::vector<SimilarityMap> maps_;
  std::vector<Mat2> matrices_;
  std::vector<Vec2> joints_;  // joints_[j] = sum_{i<j} Q_i r0, j = 0..m
  Vec2 anchor_;
  double max_scale_ = 0.0;
  double increment_bound_ = 0.0;
};

/// The generator of the von Koch curve on the segment [0, r0].
IFSCurve koch_curve(Vec2 anchor = Vec2(1.0, 0.0));

}  // namespace fracframe
