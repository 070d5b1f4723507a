#include "fracframe/staircase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracframe/errors.hpp"

namespace fracframe {

StaircaseFunction::StaircaseFunction(double alpha, double origin, int level, int branching,
                                     std::vector<double> knots, std::vector<double> cumulative)
    : alpha_(alpha),
      origin_(origin),
      level_(level),
      branching_(branching),
      gamma_factor_(std::tgamma(alpha + 1.0)),
      knots_(std::move(knots)),
      cumulative_(std::move(cumulative)) {
  if (knots_.size() < 2 || knots_.size() != cumulative_.size()) {
    throw DomainError("staircase: need matching knot and mass tables with at least two entries");
  }
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    if (!(knots_[i + 1] > knots_[i])) throw DomainError("staircase: knots must be strictly increasing");
    if (cumulative_[i + 1] < cumulative_[i]) throw DomainError("staircase: masses must be nondecreasing");
  }
  if (!(alpha_ > 0.0)) throw DomainError("staircase: alpha must be positive");
  if (branching_ < 2) throw DomainError("staircase: branching factor must be at least 2");
  if (!domain().contains(origin_)) throw DomainError("staircase: origin outside the knot range");
  origin_offset_ = cumulative_at(origin_);
}

StaircaseFunction StaircaseFunction::identity() { return StaircaseFunction(1.0, 0.0, 0, 2, {0.0, 1.0}, {0.0, 1.0}); }

double StaircaseFunction::cumulative_at(double t) const {
  if (t <= knots_.front()) return cumulative_.front();
  if (t >= knots_.back()) return cumulative_.back();
  const auto upper = std::upper_bound(knots_.begin(), knots_.end(), t);
  const std::size_t i = static_cast<std::size_t>(upper - knots_.begin()) - 1;
  if (t == knots_[i]) return cumulative_[i];
  const double w = (t - knots_[i]) / (knots_[i + 1] - knots_[i]);
  return cumulative_[i] + w * (cumulative_[i + 1] - cumulative_[i]);
}

double StaircaseFunction::increment(double a, double b) const {
  if (!(a >= knots_.front() && a <= knots_.back() && b >= knots_.front() && b <= knots_.back())) {
    throw DomainError("staircase evaluated outside its domain");
  }
  if (a == b) return 0.0;
  if (b < a) return -increment(b, a);
  const auto cell = [&](double t) {
    const auto upper = std::upper_bound(knots_.begin(), knots_.end(), t);
    return std::min(static_cast<std::size_t>(upper - knots_.begin()) - 1, knots_.size() - 2);
  };
  const std::size_t i = cell(a);
  const std::size_t j = cell(b);
  const auto slope = [&](std::size_t c) {
    return (cumulative_[c + 1] - cumulative_[c]) / (knots_[c + 1] - knots_[c]);
  };
  if (i == j) return slope(i) * (b - a);
  // Partial cells at both ends plus the whole cells between; no large values are subtracted.
  return slope(i) * (knots_[i + 1] - a) + (cumulative_[j] - cumulative_[i + 1]) + slope(j) * (b - knots_[j]);
}

double StaircaseFunction::operator()(double t) const {
  if (!(t >= knots_.front() && t <= knots_.back())) throw DomainError("staircase evaluated outside its domain");
  return cumulative_at(t) - origin_offset_;
}

std::vector<double> StaircaseFunction::values() const {
  std::vector<double> out(cumulative_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cumulative_[i] - origin_offset_;
  return out;
}

StaircaseFunction build_staircase(const ParametricCurve& curve, double alpha, double p0, int level,
                                  const StaircaseOptions& options) {
  if (level < 1) throw DomainError("build_staircase: level must be at least 1");
  if (options.refine_levels < 3) throw DomainError("build_staircase: need at least 3 refinement levels");
  if (!(alpha > 0.0)) throw DomainError("build_staircase: alpha must be positive");
  const Interval dom = curve.domain();
  if (!dom.contains(p0)) throw DomainError("build_staircase: origin outside the curve domain");

  const auto m = static_cast<std::size_t>(curve.branching());
  std::size_t coarse = 1;
  for (int k = 0; k < level; ++k) coarse *= m;

  const double gamma = std::tgamma(alpha + 1.0);
  // masses[r][c]: mass of coarse cell c estimated from m^(r+1) sub-chords.
  std::vector<std::vector<double>> masses;
  std::vector<std::pair<double, double>> totals;
  std::size_t sub = 1;
  for (int r = 1; r <= options.refine_levels; ++r) {
    sub *= m;
    const std::size_t cells = coarse * sub;
    if (cells + 1 > options.point_budget || cells / sub != coarse) {
      throw ResourceError("build_staircase: " + std::to_string(cells + 1) + " samples exceed the point budget");
    }
    const std::vector<double> chords = uniform_chords(curve, dom.lo, dom.hi, cells, options.depth_margin);
    std::vector<double> cell_mass(coarse, 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < coarse; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < sub; ++j) s += std::pow(chords[c * sub + j], alpha);
      cell_mass[c] = s / gamma;
      total += cell_mass[c];
    }
    masses.push_back(std::move(cell_mass));
    totals.emplace_back(dom.width() / static_cast<double>(cells), total);
  }

  const MassEstimate whole = extrapolate_mass(alpha, totals, options.rtol);
  if (!whole.converged) {
    switch (whole.trend) {
      case MassTrend::Growing:
        throw NonConvergenceError("build_staircase: mass diverges at alpha=" + std::to_string(alpha) +
                                  " (alpha is below the curve dimension)");
      case MassTrend::Decaying:
        throw NonConvergenceError("build_staircase: mass vanishes at alpha=" + std::to_string(alpha) +
                                  " (alpha is above the curve dimension)");
      case MassTrend::Bounded:
        throw NonConvergenceError("build_staircase: mass did not settle at alpha=" + std::to_string(alpha));
    }
  }

  std::vector<double> knots(coarse + 1);
  std::vector<double> cumulative(coarse + 1, 0.0);
  for (std::size_t c = 0; c <= coarse; ++c) {
    knots[c] = (c == coarse) ? dom.hi : dom.lo + dom.width() * static_cast<double>(c) / static_cast<double>(coarse);
  }
  const auto finest = masses.size() - 1;
  for (std::size_t c = 0; c < coarse; ++c) {
    std::vector<std::pair<double, double>> trace;
    for (std::size_t r = 0; r < masses.size(); ++r) trace.emplace_back(totals[r].first, masses[r][c]);
    double value = extrapolate_mass(alpha, std::move(trace), options.rtol).extrapolated;
    if (!std::isfinite(value) || value < 0.0) value = masses[finest][c];
    cumulative[c + 1] = cumulative[c] + value;
  }
  return StaircaseFunction(alpha, p0, level, static_cast<int>(m), std::move(knots), std::move(cumulative));
}

StaircaseFunction koch_staircase(int level) {
  const IFSCurve koch = koch_curve();
  return build_staircase(koch, koch.similarity_dimension(), 0.0, level);
}

CurveInversion invert_curve_point(const StaircaseFunction& staircase, const ParametricCurve& curve,
                                  const VecX& point, double tol_geo) {
  const auto& knots = staircase.knots();
  const Interval dom = curve.domain();
  const double mesh = knots[1] - knots[0];
  const int depth = chord_evaluation_depth(curve, dom.width(), mesh, 8);

  auto distance = [&](double t) { return (curve.at(t, depth) - point).norm(); };

  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double d = distance(knots[i]);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }

  double best_t = knots[best];
  double lo = knots[best == 0 ? 0 : best - 1];
  double hi = knots[std::min(best + 1, knots.size() - 1)];
  constexpr int samples = 8;
  for (int iter = 0; iter < 60 && best_dist > 0.0 && hi - lo > 1e-15; ++iter) {
    const double step = (hi - lo) / samples;
    int pick = -1;
    for (int s = 0; s <= samples; ++s) {
      const double t = lo + step * s;
      const double d = distance(t);
      if (d < best_dist) {
        best_dist = d;
        best_t = t;
        pick = s;
      }
    }
    if (pick < 0) {
      // Minimum sits between samples adjacent to best_t.
      lo = std::max(lo, best_t - step);
      hi = std::min(hi, best_t + step);
      continue;
    }
    lo = std::max(dom.lo, best_t - step);
    hi = std::min(dom.hi, best_t + step);
  }

  if (best_dist > tol_geo) {
    throw NotOnCurveError("point lies " + std::to_string(best_dist) + " from the curve (tolerance " +
                          std::to_string(tol_geo) + ")");
  }
  return {best_t, best_dist};
}

double staircase_at_point(const StaircaseFunction& staircase, const ParametricCurve& curve, const VecX& point,
                          double tol_geo) {
  return staircase(invert_curve_point(staircase, curve, point, tol_geo).param);
}

}  // namespace fracframe
