#pragma once

#include <vector>

#include "fracframe/ifs_curve.hpp"
#include "fracframe/measure.hpp"

namespace fracframe {

/// Tabulated rise function S(t): the mass of the curve between the origin p0 and t, negative
/// for t < p0. Between knots the table is interpolated linearly, which keeps S monotone.
/// Immutable after construction.
class StaircaseFunction {
 public:
  /// `cumulative[i]` is the mass from knots.front() up to knots[i]. Throws DomainError when
  /// the knots are not increasing, the masses decrease, or the origin lies outside the knots.
  StaircaseFunction(double alpha, double origin, int level, int branching, std::vector<double> knots,
                    std::vector<double> cumulative);

  /// S(t) = t on [0,1]: the smooth alpha = 1 limit.
  static StaircaseFunction identity();

  double operator()(double t) const;

  double alpha() const { return alpha_; }
  double origin() const { return origin_; }
  int level() const { return level_; }
  int branching() const { return branching_; }
  Interval domain() const { return {knots_.front(), knots_.back()}; }
  double gamma_factor() const { return gamma_factor_; }
  const std::vector<double>& knots() const { return knots_; }
  /// S at each knot (cumulative mass shifted so that S(origin) = 0).
  std::vector<double> values() const;
  /// S(b) - S(a) without cancelling the two large values far from the origin.
  double increment(double a, double b) const;
  /// S(hi) - S(lo).
  double total() const { return cumulative_.back() - cumulative_.front(); }

 private:
  double cumulative_at(double t) const;

  double alpha_;
  double origin_;
  int level_;
  int branching_;
  double gamma_factor_;
  std::vector<double> knots_;
  std::vector<double> cumulative_;
  double origin_offset_ = 0.0;
};

struct StaircaseOptions {
  /// Finer levels used to estimate each prefix mass, i.e. mass_function levels per knot.
  int refine_levels = 3;
  int depth_margin = 4;
  double rtol = 1e-6;
  std::size_t point_budget = kDefaultPointBudget;
};

/// Tabulates S at every m-adic knot of depth `level`. Prefix masses at all knots share one
/// chord table per refinement level; each cell mass is extrapolated with the mass model.
/// Throws NonConvergenceError (naming the trend) when the total mass does not settle at alpha.
StaircaseFunction build_staircase(const ParametricCurve& curve, double alpha, double p0, int level,
                                  const StaircaseOptions& options = {});

/// Koch curve staircase at its similarity dimension with origin 0.
StaircaseFunction koch_staircase(int level = 6);

struct CurveInversion {
  double param = 0.0;
  double distance = 0.0;
};

/// Nearest parameter to `point` on the curve: nearest knot sample, then local bracket shrinking.
/// Throws NotOnCurveError if the best distance exceeds tol_geo.
CurveInversion invert_curve_point(const StaircaseFunction& staircase, const ParametricCurve& curve,
                                  const VecX& point, double tol_geo = 1e-9);

/// J(theta) = S(u^{-1}(theta)).
double staircase_at_point(const StaircaseFunction& staircase, const ParametricCurve& curve, const VecX& point,
                          double tol_geo = 1e-9);

}  // namespace fracframe
