#include "fracframe/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fracframe/errors.hpp"

namespace fracframe {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
}

// Number of cells of the coarsest uniform partition of a width with mesh <= delta.
std::size_t coarsest_cells(double width, double delta) {
  const double ratio = width / delta;
  const double cells = std::ceil(ratio * (1.0 - 1e-12));
  if (cells > 1e12) throw ResourceError("coarse_mass: delta too small for the interval");
  return std::max<std::size_t>(1, static_cast<std::size_t>(cells));
}

bool is_power_of(std::size_t value, std::size_t base, int& exponent) {
  exponent = 0;
  std::size_t p = 1;
  while (p < value) {
    p *= base;
    ++exponent;
  }
  return p == value;
}

double chord_power(const VecX& p, const VecX& q, double alpha) { return std::pow((q - p).norm(), alpha); }

struct DeltaFit {
  std::vector<std::vector<double>> chords;
  std::vector<double> deltas;
};

}  // namespace

Partition::Partition(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw DomainError("partition needs at least two knots");
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const double gap = knots_[i + 1] - knots_[i];
    if (!(gap > 0.0)) throw DomainError("partition knots must be strictly increasing");
    mesh_ = std::max(mesh_, gap);
  }
}

Partition Partition::uniform(double a, double b, std::size_t cells) {
  if (cells == 0) throw DomainError("uniform partition needs at least one cell");
  std::vector<double> knots(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    knots[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
  }
  knots.back() = b;
  return Partition(std::move(knots));
}

Partition Partition::with_knot(double t) const {
  auto pos = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (pos == knots_.begin() || pos == knots_.end() || *(pos - 1) == t) {
    throw DomainError("with_knot: knot must fall strictly inside a cell");
  }
  std::vector<double> knots = knots_;
  knots.insert(knots.begin() + (pos - knots_.begin()), t);
  return Partition(std::move(knots));
}

int chord_evaluation_depth(const ParametricCurve& curve, double width, double mesh, int margin) {
  const double m = curve.branching();
  const double level = std::ceil(std::log(width / mesh) / std::log(m) - 1e-9);
  return std::max(0, static_cast<int>(level)) + margin;
}

ChordSum chord_sum(const ParametricCurve& curve, const Partition& partition, double alpha) {
  const int depth = chord_evaluation_depth(curve, partition.back() - partition.front(), partition.mesh());
  return chord_sum(curve, partition, alpha, depth);
}

ChordSum chord_sum(const ParametricCurve& curve, const Partition& partition, double alpha, int depth) {
  require_alpha(alpha);
  const auto& knots = partition.knots();
  const Interval dom = curve.domain();
  if (knots.front() < dom.lo || knots.back() > dom.hi) throw DomainError("partition outside curve domain");

  ChordSum result;
  result.alpha = alpha;
  result.gamma_factor = std::tgamma(alpha + 1.0);
  VecX previous = curve.at(knots.front(), depth);
  double sum = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    VecX current = curve.at(knots[i], depth);
    sum += chord_power(previous, current, alpha);
    previous = std::move(current);
  }
  result.value = sum / result.gamma_factor;
  return result;
}

std::vector<double> uniform_chords(const ParametricCurve& curve, double a, double b, std::size_t cells,
                                   int depth_margin) {
  std::vector<double> chords(cells);
  const auto* ifs = dynamic_cast<const IFSCurve*>(&curve);
  int level = 0;
  if (ifs != nullptr && a == 0.0 && b == 1.0 && is_power_of(cells, ifs->map_count(), level)) {
    Vec2 previous = ifs->eval_adic(0, level);
    for (std::size_t i = 0; i < cells; ++i) {
      const Vec2 current = ifs->eval_adic(i + 1, level);
      chords[i] = (current - previous).norm();
      previous = current;
    }
    return chords;
  }

  const double width = b - a;
  const int depth = chord_evaluation_depth(curve, width, width / static_cast<double>(cells), depth_margin);
  VecX previous = curve.at(a, depth);
  for (std::size_t i = 0; i < cells; ++i) {
    const double t = (i + 1 == cells) ? b : a + width * static_cast<double>(i + 1) / static_cast<double>(cells);
    VecX current = curve.at(t, depth);
    chords[i] = (current - previous).norm();
    previous = std::move(current);
  }
  return chords;
}

double chord_power_sum(const std::vector<double>& chords, double alpha) {
  require_alpha(alpha);
  double sum = 0.0;
  for (double c : chords) sum += std::pow(c, alpha);
  return sum / std::tgamma(alpha + 1.0);
}

double coarse_mass(const ParametricCurve& curve, double a, double b, double alpha, double delta,
                   const CoarseMassOptions& options) {
  require_alpha(alpha);
  if (!(delta > 0.0)) throw DomainError("coarse_mass: delta must be positive");
  if (!(a < b)) throw DomainError("coarse_mass: need a < b");

  const std::size_t cells = coarsest_cells(b - a, delta);
  if (options.strategy == MassStrategy::Uniform) {
    return chord_power_sum(uniform_chords(curve, a, b, cells, options.depth_margin), alpha);
  }

  // Greedy descent from the uniform start. Every accepted move keeps all gaps <= delta.
  const int depth = chord_evaluation_depth(curve, b - a, std::min(delta, b - a), options.depth_margin);
  std::vector<double> knots = Partition::uniform(a, b, cells).knots();
  std::vector<VecX> points;
  points.reserve(knots.size());
  for (double t : knots) points.push_back(curve.at(t, depth));

  const double slack = delta * (1.0 + 1e-12);
  for (int pass = 0; pass < options.max_passes; ++pass) {
    bool improved = false;
    for (std::size_t i = 1; i + 1 < knots.size();) {
      const double left = knots[i - 1];
      const double right = knots[i + 1];
      const double current = chord_power(points[i - 1], points[i], alpha) + chord_power(points[i], points[i + 1], alpha);

      if (right - left <= slack) {
        const double merged = chord_power(points[i - 1], points[i + 1], alpha);
        if (merged - current < -options.improvement_tol) {
          knots.erase(knots.begin() + static_cast<std::ptrdiff_t>(i));
          points.erase(points.begin() + static_cast<std::ptrdiff_t>(i));
          improved = true;
          continue;
        }
      }

      const double lo = std::max(left, right - delta);
      const double hi = std::min(right, left + delta);
      if (hi - lo > 1e-15) {
        double best_change = 0.0;
        double best_t = knots[i];
        VecX best_point;
        for (int s = 0; s <= options.move_samples; ++s) {
          const double t = lo + (hi - lo) * s / options.move_samples;
          if (t <= left || t >= right || t == knots[i]) continue;
          VecX p = curve.at(t, depth);
          const double change = chord_power(points[i - 1], p, alpha) + chord_power(p, points[i + 1], alpha) - current;
          if (change < best_change) {
            best_change = change;
            best_t = t;
            best_point = std::move(p);
          }
        }
        if (best_change < -options.improvement_tol) {
          knots[i] = best_t;
          points[i] = std::move(best_point);
          improved = true;
        }
      }
      ++i;
    }
    if (!improved) break;
  }

  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) sum += chord_power(points[i], points[i + 1], alpha);
  return sum / std::tgamma(alpha + 1.0);
}

MassEstimate extrapolate_mass(double alpha, std::vector<std::pair<double, double>> coarse_values, double rtol) {
  MassEstimate est;
  est.alpha = alpha;
  est.levels = static_cast<int>(coarse_values.size());
  est.coarse_values = std::move(coarse_values);
  const auto& cv = est.coarse_values;
  const std::size_t n = cv.size();
  if (n < 3) throw DomainError("mass extrapolation needs at least three levels");

  const double v0 = cv[n - 3].second;
  const double v1 = cv[n - 2].second;
  const double v2 = cv[n - 1].second;
  const double d1 = v1 - v0;
  const double d2 = v2 - v1;
  const double scale = std::max({std::abs(v0), std::abs(v1), std::abs(v2)});
  constexpr double inf = std::numeric_limits<double>::infinity();

  est.converged = std::abs(d2) < rtol * std::abs(v2);
  if (std::abs(d1) <= 1e-15 * scale) {
    est.extrapolated = v2;
    est.residual = std::abs(d2);
  } else {
    const double rho = d2 / d1;
    if (!est.converged && rho >= 1.0 && d2 > 0.0) {
      est.extrapolated = inf;
      est.residual = inf;
      est.trend = MassTrend::Growing;
      est.converged = false;
      return est;
    }
    if (std::abs(rho) < 1.0) {
      est.extrapolated = v2 + d2 * rho / (1.0 - rho);
    } else {
      est.extrapolated = v2;
    }
    est.residual = std::abs(est.extrapolated - v2);
  }
  if (!est.converged && d2 < 0.0 && est.extrapolated < 0.5 * v2) est.trend = MassTrend::Decaying;
  return est;
}

MassEstimate mass_function(const ParametricCurve& curve, double a, double b, double alpha, int levels,
                           const MassOptions& options) {
  if (levels < 3) throw DomainError("mass_function: levels must be at least 3");
  require_alpha(alpha);
  const double m = curve.branching();
  std::vector<std::pair<double, double>> values;
  for (int k = 1; k <= levels; ++k) {
    const double delta = (b - a) * std::pow(m, -k);
    values.emplace_back(delta, coarse_mass(curve, a, b, alpha, delta, options.coarse));
  }
  return extrapolate_mass(alpha, std::move(values), options.rtol);
}

double log_log_slope(const std::vector<std::vector<double>>& chords_per_level, const std::vector<double>& deltas,
                     double alpha) {
  const std::size_t n = deltas.size();
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (double c : chords_per_level[k]) sum += std::pow(c, alpha);
    xs[k] = std::log(deltas[k]);
    ys[k] = std::log(sum);  // the 1/Gamma factor is an offset and drops out of the slope
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

DimensionEstimate gamma_dimension(const ParametricCurve& curve, double a, double b, int levels,
                                  const DimensionOptions& options) {
  if (levels < 4) throw DomainError("gamma_dimension: levels must be at least 4");
  if (!(a < b)) throw DomainError("gamma_dimension: need a < b");

  const auto m = static_cast<std::size_t>(curve.branching());
  DeltaFit fit;
  std::size_t cells = 1;
  for (int k = 1; k <= levels; ++k) {
    cells *= m;
    fit.deltas.push_back((b - a) / static_cast<double>(cells));
    fit.chords.push_back(uniform_chords(curve, a, b, cells, options.depth_margin));
  }

  DimensionEstimate est;
  auto slope = [&](double alpha) {
    const double s = log_log_slope(fit.chords, fit.deltas, alpha);
    est.slope_trace.emplace_back(alpha, s);
    return s;
  };

  double lo = options.lower;
  double hi = static_cast<double>(curve.dimension());
  const double s_lo = slope(lo);
  const double s_hi = slope(hi);
  if (!(s_lo < 0.0 && s_hi > 0.0)) {
    throw NonConvergenceError("gamma_dimension: no slope sign change in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
  }
  while (hi - lo >= options.bracket_tol) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  est.alpha_hat = 0.5 * (lo + hi);
  est.confidence = 0.5 * (hi - lo);
  return est;
}

}  // namespace fracframe
