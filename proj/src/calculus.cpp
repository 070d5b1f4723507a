#include "fracframe/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracframe {

namespace {

double ipow(double base, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

std::size_t upow(std::size_t base, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

Interval window_of(const StaircaseFunction& staircase, const DerivativeOptions& options) {
  const Interval dom = staircase.domain();
  if (!options.window) return dom;
  const Interval w = *options.window;
  if (!(w.lo < w.hi) || w.lo < dom.lo || w.hi > dom.hi) throw DomainError("derivative window outside the staircase domain");
  return w;
}

struct Extremes {
  double max;
  double min;
};

double zoom(const std::function<double(double)>& g, double lo, double hi, double best_t, double best, int rounds,
            bool maximise) {
  constexpr int samples = 8;
  for (int r = 0; r < rounds; ++r) {
    const double step = (hi - lo) / samples;
    for (int s = 0; s <= samples; ++s) {
      const double t = lo + step * s;
      const double v = g(t);
      if (maximise ? v > best : v < best) {
        best = v;
        best_t = t;
      }
    }
    lo = std::max(lo, best_t - step);
    hi = std::min(hi, best_t + step);
  }
  return best;
}

Extremes cell_extremes(const FractalFunction& f, double lo, double hi, const SamplingOptions& sampling) {
  const double dense = std::ceil(sampling.samples_per_unit * (hi - lo)) + 1.0;
  const int n = std::max({sampling.cell_samples, 2, static_cast<int>(std::min(dense, 1e6))});
  std::vector<double> ts(static_cast<std::size_t>(n));
  std::vector<double> vs(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    ts[j] = (j == n - 1) ? hi : lo + (hi - lo) * j / (n - 1);
    vs[j] = f(ts[j]);
  }
  const auto imax = static_cast<int>(std::max_element(vs.begin(), vs.end()) - vs.begin());
  const auto imin = static_cast<int>(std::min_element(vs.begin(), vs.end()) - vs.begin());
  Extremes e{vs[imax], vs[imin]};
  if (sampling.refine_rounds > 0) {
    if (imax > 0 && imax < n - 1) e.max = zoom(f.eval, ts[imax - 1], ts[imax + 1], ts[imax], e.max, sampling.refine_rounds, true);
    if (imin > 0 && imin < n - 1) e.min = zoom(f.eval, ts[imin - 1], ts[imin + 1], ts[imin], e.min, sampling.refine_rounds, false);
  }
  return e;
}

SumPair sums_on_grid(const FractalFunction& f, const StaircaseFunction& staircase, double a, double b,
                     std::size_t cells, const SamplingOptions& sampling, std::vector<double>* cell_mid = nullptr) {
  SumPair out;
  double s_prev = staircase(a);
  double t_prev = a;
  if (cell_mid) cell_mid->assign(cells, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    const double t_next = (c + 1 == cells) ? b : a + (b - a) * static_cast<double>(c + 1) / static_cast<double>(cells);
    const double s_next = staircase(t_next);
    const double ds = s_next - s_prev;
    if (ds > 0.0) {
      const Extremes e = cell_extremes(f, t_prev, t_next, sampling);
      out.upper += e.max * ds;
      out.lower += e.min * ds;
      if (cell_mid) (*cell_mid)[c] = 0.5 * (e.max + e.min) * ds;
    }
    t_prev = t_next;
    s_prev = s_next;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------------------------

ContinuityReport f_continuity_check(const FractalFunction& f, double t, const StaircaseFunction& staircase,
                                    std::vector<double> schedule, double tol) {
  const Interval dom = staircase.domain();
  if (!dom.contains(t)) throw DomainError("continuity check outside the staircase domain");
  if (schedule.empty()) {
    for (int k = 1; k <= 12; ++k) schedule.push_back(dom.width() * ipow(1.0 / staircase.branching(), k));
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1]))) {
      throw DomainError("continuity schedule must be positive and strictly decreasing");
    }
  }
  ContinuityReport report;
  const double f0 = f(t);
  for (double h : schedule) {
    double dev = -1.0;
    if (t + h <= dom.hi) dev = std::max(dev, std::abs(f(t + h) - f0));
    if (t - h >= dom.lo) dev = std::max(dev, std::abs(f(t - h) - f0));
    if (dev >= 0.0) report.deviations.emplace_back(h, dev);
  }
  report.continuous = !report.deviations.empty() && report.deviations.back().second < tol * (1.0 + std::abs(f0));
  return report;
}

// ---------------------------------------------------------------------------------------------

namespace detail {

std::vector<StepPlan> plan_steps(const StaircaseFunction& staircase, double t, int count,
                                 const DerivativeOptions& options) {
  const Interval w = window_of(staircase, options);
  if (!w.contains(t)) throw DomainError("derivative requested outside the domain");
  if (count < 2) throw DomainError("derivative needs at least two steps");
  const int m = staircase.branching();
  const double inv = 1.0 / m;
  const double width = w.width();
  const double slack = 1e-12 * width;

  int k0 = 1;
  while (ipow(inv, k0) > options.max_step_fraction) ++k0;
  if (options.finest_level) k0 = std::max(1, std::min(k0, *options.finest_level - count + 1));
  const int k_last = options.finest_level ? std::max(k0, *options.finest_level - count + 1) : k0 + 8;

  auto fits = [&](int k, int direction) {
    const double h = width * ipow(inv, k);
    const bool fwd = t + h <= w.hi + slack;
    const bool bwd = t - h >= w.lo - slack;
    return direction == 0 ? (fwd && bwd) : (direction > 0 ? fwd : bwd);
  };
  auto build = [&](int start, int direction) {
    StepPlan plan;
    plan.direction = direction;
    for (int k = start; k < start + count; ++k) {
      double h = width * ipow(inv, k);
      if (direction >= 0) h = std::min(h, w.hi - t);
      if (direction <= 0) h = std::min(h, t - w.lo);
      plan.steps.push_back(h);
    }
    return plan;
  };

  std::vector<StepPlan> plans;
  int central = -1;
  for (int k = k0; k <= k_last; ++k) {
    if (fits(k, 0)) {
      central = k;
      break;
    }
  }
  if (central >= 0) plans.push_back(build(central, 0));
  if (central != k0) {
    const int direction = (t - w.lo <= w.hi - t) ? 1 : -1;
    int start = k0;
    while (!fits(start, direction)) ++start;
    plans.push_back(build(start, direction));
  }
  return plans;
}

}  // namespace detail

double falpha_derivative(const FractalFunction& f, const StaircaseFunction& staircase, double t, Convention convention,
                         const DerivativeOptions& options) {
  const double d = stieltjes_derivative<double>(f.eval, staircase, t, options);
  return convention == Convention::PaperT ? d / staircase.gamma_factor() : d;
}

VecX falpha_derivative(const VectorFunction& f, const StaircaseFunction& staircase, double t, Convention convention,
                       const DerivativeOptions& options) {
  const VecX d = stieltjes_derivative<VecX>(f, staircase, t, options);
  return convention == Convention::PaperT ? VecX(d / staircase.gamma_factor()) : d;
}

FractalFunction derivative_function(FractalFunction f, std::shared_ptr<const StaircaseFunction> staircase,
                                    Convention convention, DerivativeOptions options) {
  if (!staircase) throw DomainError("derivative_function needs a staircase");
  FractalFunction out;
  out.hint = f.hint;
  out.eval = [f = std::move(f), staircase = std::move(staircase), convention, options](double t) {
    return falpha_derivative(f, *staircase, t, convention, options);
  };
  return out;
}

// ---------------------------------------------------------------------------------------------

SumPair upper_lower_sums(const FractalFunction& f, const StaircaseFunction& staircase, const Partition& partition,
                         const SamplingOptions& sampling) {
  const auto& knots = partition.knots();
  SumPair out;
  for (std::size_t c = 0; c + 1 < knots.size(); ++c) {
    const double ds = staircase.increment(knots[c], knots[c + 1]);
    if (ds <= 0.0) continue;
    const Extremes e = cell_extremes(f, knots[c], knots[c + 1], sampling);
    out.upper += e.max * ds;
    out.lower += e.min * ds;
  }
  const double cells = static_cast<double>(partition.cells());
  out.partition_level = static_cast<int>(std::ceil(std::log(cells) / std::log(static_cast<double>(staircase.branching())) - 1e-9));
  return out;
}

IntegralResult falpha_integral(const FractalFunction& f, const StaircaseFunction& staircase, double a, double b,
                               double tol, const IntegralOptions& options) {
  const Interval dom = staircase.domain();
  if (!(a <= b) || !dom.contains(a) || !dom.contains(b)) throw DomainError("integral bounds outside the domain");
  if (!(tol > 0.0)) throw DomainError("integral tolerance must be positive");
  const double scale = options.convention == Convention::PaperT ? staircase.gamma_factor() : 1.0;
  IntegralResult result;
  if (a == b) return result;

  const auto m = static_cast<std::size_t>(staircase.branching());
  SumPair last;
  for (int k = 1;; ++k) {
    const std::size_t cells = upow(m, k);
    if (cells > options.max_cells) {
      last.upper *= scale;
      last.lower *= scale;
      throw BracketError("integral bracket " + std::to_string(last.width()) + " still above tolerance " +
                             std::to_string(tol) + " at " + std::to_string(cells / m) + " cells",
                         last);
    }
    last = sums_on_grid(f, staircase, a, b, cells, options.sampling);
    last.partition_level = k;
    if (last.width() < tol) {
      result.bracket = {last.upper * scale, last.lower * scale, k};
      result.value = result.bracket.midpoint();
      result.cells = cells;
      return result;
    }
  }
}

VecX falpha_integral(const VectorFunction& f, std::size_t dim, const StaircaseFunction& staircase, double a, double b,
                     double tol, const IntegralOptions& options) {
  VecX out(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    FractalFunction component{[&f, i](double t) { return f(t)(static_cast<Eigen::Index>(i)); }};
    out(static_cast<Eigen::Index>(i)) = falpha_integral(component, staircase, a, b, tol, options).value;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------

CumulativeIntegral::CumulativeIntegral(std::shared_ptr<const StaircaseFunction> staircase, std::vector<double> knots,
                                       std::vector<double> values, int level)
    : staircase_(std::move(staircase)), knots_(std::move(knots)), values_(std::move(values)), level_(level) {
  if (!staircase_ || knots_.size() < 2 || knots_.size() != values_.size()) {
    throw DomainError("cumulative integral needs a staircase and matching tables");
  }
  s_at_knots_.reserve(knots_.size());
  for (double t : knots_) s_at_knots_.push_back((*staircase_)(t));
}

double CumulativeIntegral::operator()(double t) const {
  if (!(t >= knots_.front() && t <= knots_.back())) throw DomainError("cumulative integral outside its grid");
  if (t == knots_.back()) return values_.back();
  const auto upper = std::upper_bound(knots_.begin(), knots_.end(), t);
  const std::size_t i = static_cast<std::size_t>(upper - knots_.begin()) - 1;
  if (t == knots_[i]) return values_[i];
  const double span = s_at_knots_[i + 1] - s_at_knots_[i];
  if (span <= 0.0) return values_[i];
  const double w = ((*staircase_)(t)-s_at_knots_[i]) / span;
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

CumulativeIntegral cumulative_integral(const FractalFunction& f, std::shared_ptr<const StaircaseFunction> staircase,
                                       double a, double b, double tol, std::size_t min_cells,
                                       const IntegralOptions& options) {
  if (!staircase) throw DomainError("cumulative integral needs a staircase");
  const Interval dom = staircase->domain();
  if (!(a < b) || !dom.contains(a) || !dom.contains(b)) throw DomainError("cumulative integral bounds outside the domain");
  const auto m = static_cast<std::size_t>(staircase->branching());
  int k = 0;
  while (upow(m, k) < min_cells) ++k;
  for (;; ++k) {
    const std::size_t cells = upow(m, k);
    if (cells > options.max_cells) {
      throw NonConvergenceError("cumulative integral did not reach tolerance within the cell budget");
    }
    std::vector<double> mids;
    const SumPair sums = sums_on_grid(f, *staircase, a, b, cells, options.sampling, &mids);
    if (sums.width() >= tol) continue;
    std::vector<double> knots(cells + 1);
    std::vector<double> values(cells + 1, 0.0);
    for (std::size_t c = 0; c <= cells; ++c) {
      knots[c] = (c == cells) ? b : a + (b - a) * static_cast<double>(c) / static_cast<double>(cells);
      if (c > 0) values[c] = values[c - 1] + mids[c - 1];
    }
    return CumulativeIntegral(staircase, std::move(knots), std::move(values), k);
  }
}

FtcResiduals ftc_residuals(const FractalFunction& f, std::shared_ptr<const StaircaseFunction> staircase, double a,
                           double b, const FtcOptions& options) {
  if (!staircase) throw DomainError("ftc residuals need a staircase");
  IntegralOptions iopts;
  iopts.sampling = options.sampling;
  const CumulativeIntegral g = cumulative_integral(f, staircase, a, b, options.integral_tol, options.min_cells, iopts);

  const auto m = static_cast<std::size_t>(staircase->branching());
  int p = 1;
  while (upow(m, p) - 1 < static_cast<std::size_t>(std::max(options.probes, 1))) ++p;
  const std::size_t denom = upow(m, p);

  DerivativeOptions dopts;
  dopts.window = Interval{a, b};
  dopts.finest_level = g.level();

  FtcResiduals out;
  FractalFunction gf{[&g](double t) { return g(t); }};
  for (std::size_t j = 1; j < denom; ++j) {
    const double t = a + (b - a) * static_cast<double>(j) / static_cast<double>(denom);
    out.probe_points.push_back(t);
    const double dg = falpha_derivative(gf, *staircase, t, Convention::Stieltjes, dopts);
    out.r1 = std::max(out.r1, std::abs(dg - f(t)));
  }

  const FractalFunction df = derivative_function(f, staircase);
  const double integral = falpha_integral(df, *staircase, a, b, options.integral_tol, iopts).value;
  out.r2 = std::abs(integral - (f(b) - f(a)));
  return out;
}

// ---------------------------------------------------------------------------------------------

NamedFunction named_function(std::string_view name, std::shared_ptr<const StaircaseFunction> staircase, double constant) {
  if (!staircase) throw DomainError("named function needs a staircase");
  NamedFunction nf;
  nf.name = std::string(name);
  if (name == "const") {
    nf.outer = [constant](double) { return constant; };
    nf.outer_derivative = [](double) { return 0.0; };
    nf.outer_primitive = [constant](double s) { return constant * s; };
  } else if (name == "S") {
    nf.outer = [](double s) { return s; };
    nf.outer_derivative = [](double) { return 1.0; };
    nf.outer_primitive = [](double s) { return 0.5 * s * s; };
  } else if (name == "S2") {
    nf.outer = [](double s) { return s * s; };
    nf.outer_derivative = [](double s) { return 2.0 * s; };
    nf.outer_primitive = [](double s) { return s * s * s / 3.0; };
  } else if (name == "sinS") {
    nf.outer = [](double s) { return std::sin(s); };
    nf.outer_derivative = [](double s) { return std::cos(s); };
    nf.outer_primitive = [](double s) { return -std::cos(s); };
  } else if (name == "cosS") {
    nf.outer = [](double s) { return std::cos(s); };
    nf.outer_derivative = [](double s) { return -std::sin(s); };
    nf.outer_primitive = [](double s) { return std::sin(s); };
  } else {
    throw DomainError("unknown function '" + std::string(name) + "'");
  }
  nf.f.hint = Smoothness::StaircaseComposed;
  nf.f.eval = [outer = nf.outer, staircase = std::move(staircase)](double t) { return outer((*staircase)(t)); };
  return nf;
}

const std::vector<std::string>& named_function_names() {
  static const std::vector<std::string> names{"const", "S", "S2", "sinS", "cosS"};
  return names;
}

}  // namespace fracframe
