#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracframe/errors.hpp"
#include "fracframe/measure.hpp"
#include "fracframe/staircase.hpp"
#include "fracframe/types.hpp"

namespace fracframe {

enum class Smoothness { StaircaseComposed, Raw };

/// Bounded real function on the curve, addressed by its parameter t (theta = u(t)).
struct FractalFunction {
  std::function<double(double)> eval;
  Smoothness hint = Smoothness::Raw;

  double operator()(double t) const { return eval(t); }
};

using VectorFunction = std::function<VecX(double)>;

// ---------------------------------------------------------------------------------------------
// Continuity
// ---------------------------------------------------------------------------------------------

struct ContinuityReport {
  std::vector<std::pair<double, double>> deviations;  // (h, max |f(t +- h) - f(t)|)
  bool continuous = false;
};

/// Empty `schedule` means h_k = width * m^-k, k = 1..12. Verdict: the last deviation is below
/// tol * (1 + |f(t)|). Throws DomainError for a schedule that is not strictly decreasing.
ContinuityReport f_continuity_check(const FractalFunction& f, double t, const StaircaseFunction& staircase,
                                    std::vector<double> schedule = {}, double tol = 1e-5);

// ---------------------------------------------------------------------------------------------
// Derivative
// ---------------------------------------------------------------------------------------------

struct DerivativeOptions {
  /// Steps used when the stencil is symmetric in S (error series even in the S increment).
  int levels = 3;
  /// Steps used otherwise (one-sided stencils, asymmetric staircases).
  int asymmetric_levels = 5;
  /// Largest step as a fraction of the window width; steps are width * m^-k.
  double max_step_fraction = 1.0 / 16.0;
  /// Finest admissible level k, e.g. the resolution of a tabulated integrand.
  std::optional<int> finest_level;
  /// Parameter window stencils must stay inside; defaults to the staircase domain.
  std::optional<Interval> window;
  double flat_tol = 1e-14;
};

namespace detail {

struct StepPlan {
  std::vector<double> steps;  // decreasing
  int direction = 0;          // 0 central, +1 forward, -1 backward
};

/// Candidate stencils at t: central from the coarsest level that fits, and, when the window
/// edge forces that level finer than the default, a one-sided stencil from the default level.
std::vector<StepPlan> plan_steps(const StaircaseFunction& staircase, double t, int count,
                                 const DerivativeOptions& options);

inline double magnitude(double v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.norm();
}

template <class V>
struct Extrapolated {
  V value;
  double error = 0.0;  // distance to the previous-order estimate
};

/// Neville extrapolation of (x_i, y_i) to x = 0.
template <class V>
Extrapolated<V> extrapolate_to_zero(const std::vector<double>& x, std::vector<V> y) {
  const std::size_t n = y.size();
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = n - 1; i >= j; --i) {
      const double xa = x[i - j];
      const double xb = x[i];
      y[i] = (xa * y[i] - xb * y[i - 1]) / (xa - xb);
      if (i == j) break;
    }
  }
  const double err = n > 1 ? magnitude(V(y[n - 1] - y[n - 2])) : 0.0;
  return {y[n - 1], err};
}

template <class V, class F>
Extrapolated<V> run_plan(const F& f, const StaircaseFunction& staircase, double t, const V& f0, const StepPlan& plan,
                         const DerivativeOptions& options) {
  const auto flat = [&](double ds) {
    if (std::abs(ds) < options.flat_tol) throw NonDifferentiableError("staircase is flat near t=" + std::to_string(t));
  };
  if (plan.direction != 0) {
    std::vector<double> x;
    std::vector<V> q;
    for (std::size_t k = 0; k < plan.steps.size() && static_cast<int>(k) < options.asymmetric_levels; ++k) {
      const double ts = t + plan.direction * plan.steps[k];
      const double ds = staircase.increment(t, ts);
      flat(ds);
      q.push_back(V((V(f(ts)) - f0) / ds));
      x.push_back(ds);
    }
    return extrapolate_to_zero(x, std::move(q));
  }

  const int max_levels = std::max(options.levels, options.asymmetric_levels);
  std::vector<double> even_x, sided_x;
  std::vector<V> even_q, sided_q;
  bool symmetric = true;
  for (std::size_t k = 0; k < plan.steps.size() && static_cast<int>(k) < max_levels; ++k) {
    if (symmetric && static_cast<int>(k) == options.levels) break;
    const double h = plan.steps[k];
    const double dp = staircase.increment(t, t + h);
    const double dm = staircase.increment(t, t - h);
    const double ds = dp - dm;
    flat(dp);
    flat(dm);
    if (std::abs(dp + dm) > 1e-12 * ds) symmetric = false;
    const V fp = V(f(t + h));
    const V fm = V(f(t - h));
    even_q.push_back(V((fp - fm) / ds));
    even_x.push_back(ds * ds);
    sided_q.push_back(V((fp - f0) / dp));
    sided_x.push_back(dp);
    sided_q.push_back(V((fm - f0) / dm));
    sided_x.push_back(dm);
  }
  if (symmetric) return extrapolate_to_zero(even_x, std::move(even_q));
  const std::size_t keep = 2 * static_cast<std::size_t>(options.asymmetric_levels);
  if (sided_x.size() > keep) {
    sided_x.resize(keep);
    sided_q.resize(keep);
  }
  return extrapolate_to_zero(sided_x, std::move(sided_q));
}

}  // namespace detail

/// Richardson-extrapolated difference quotient (f(t+h) - f(t-h)) / (S(t+h) - S(t-h)) over the
/// geometric schedule h_k = width * m^-k, against the staircase (Stieltjes normalisation).
/// When S is not symmetric about t the one-sided divided differences are extrapolated jointly
/// in the signed S offset. Near the window edge a one-sided stencil competes with the finer
/// central one and the smaller extrapolation error wins.
/// `F` maps t to double or an Eigen vector. Throws NonDifferentiableError where the staircase is flat.
template <class V, class F>
V stieltjes_derivative(const F& f, const StaircaseFunction& staircase, double t, const DerivativeOptions& options = {}) {
  const int count = std::max(options.levels, options.asymmetric_levels);
  const std::vector<detail::StepPlan> plans = detail::plan_steps(staircase, t, count, options);
  const V f0 = V(f(t));
  detail::Extrapolated<V> best = detail::run_plan<V>(f, staircase, t, f0, plans.front(), options);
  for (std::size_t i = 1; i < plans.size(); ++i) {
    detail::Extrapolated<V> other = detail::run_plan<V>(f, staircase, t, f0, plans[i], options);
    if (other.error < best.error) best = std::move(other);
  }
  return best.value;
}

/// F^alpha-derivative of f at t. Under PaperT the Stieltjes value is divided by Gamma(alpha+1).
double falpha_derivative(const FractalFunction& f, const StaircaseFunction& staircase, double t,
                         Convention convention = Convention::Stieltjes, const DerivativeOptions& options = {});
VecX falpha_derivative(const VectorFunction& f, const StaircaseFunction& staircase, double t,
                       Convention convention = Convention::Stieltjes, const DerivativeOptions& options = {});

/// x -> D f(x) as a function, for feeding derivatives back into integrals.
FractalFunction derivative_function(FractalFunction f, std::shared_ptr<const StaircaseFunction> staircase,
                                    Convention convention = Convention::Stieltjes, DerivativeOptions options = {});

// ---------------------------------------------------------------------------------------------
// Sums and integrals
// ---------------------------------------------------------------------------------------------

struct SumPair {
  double upper = 0.0;
  double lower = 0.0;
  int partition_level = 0;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (upper + lower); }
};

struct SamplingOptions {
  /// Equispaced samples per cell, endpoints included.
  int cell_samples = 16;
  /// Floor on samples per unit of parameter length, so wide cells are not undersampled.
  double samples_per_unit = 512.0;
  /// Local zoom rounds around an extremum attained strictly inside a cell.
  int refine_rounds = 3;
};

/// Upper and lower F^alpha-sums; cell sup/inf come from dense sampling (exact for f monotone per cell).
SumPair upper_lower_sums(const FractalFunction& f, const StaircaseFunction& staircase, const Partition& partition,
                         const SamplingOptions& sampling = {});

class BracketError : public NonConvergenceError {
 public:
  BracketError(const std::string& what, SumPair last) : NonConvergenceError(what), last_(last) {}
  const SumPair& last() const { return last_; }

 private:
  SumPair last_;
};

struct IntegralOptions {
  SamplingOptions sampling;
  std::size_t max_cells = std::size_t{1} << 20;
  Convention convention = Convention::Stieltjes;
};

struct IntegralResult {
  double value = 0.0;
  SumPair bracket;
  std::size_t cells = 0;
};

/// Refines uniform partitions of [a,b] by the branching factor until upper - lower < tol and
/// returns the bracket midpoint. Under PaperT the value and bracket are scaled by Gamma(alpha+1).
/// Throws BracketError past max_cells.
IntegralResult falpha_integral(const FractalFunction& f, const StaircaseFunction& staircase, double a, double b,
                               double tol, const IntegralOptions& options = {});

/// Component-wise integral of a vector-valued function with `dim` components.
VecX falpha_integral(const VectorFunction& f, std::size_t dim, const StaircaseFunction& staircase, double a, double b,
                     double tol, const IntegralOptions& options = {});

/// G(t) = integral of f over C(a,t), tabulated on a uniform grid of [a,b] and interpolated
/// linearly in S between grid knots.
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::shared_ptr<const StaircaseFunction> staircase, std::vector<double> knots,
                     std::vector<double> values, int level);

  double operator()(double t) const;
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  int level() const { return level_; }

 private:
  std::shared_ptr<const StaircaseFunction> staircase_;
  std::vector<double> knots_;
  std::vector<double> s_at_knots_;
  std::vector<double> values_;
  int level_;
};

/// Grid of at least `min_cells` m-adic cells, refined until total upper - lower < tol.
CumulativeIntegral cumulative_integral(const FractalFunction& f, std::shared_ptr<const StaircaseFunction> staircase,
                                       double a, double b, double tol, std::size_t min_cells = 4096,
                                       const IntegralOptions& options = {});

struct FtcOptions {
  double integral_tol = 1e-4;
  std::size_t min_cells = 4096;
  /// Lower bound on probe count; probes are the interior m-adic points of the smallest level that has enough.
  int probes = 8;
  SamplingOptions sampling;
};

struct FtcResiduals {
  double r1 = 0.0;  // max |D(int_a^t f) - f(t)| over probes
  double r2 = 0.0;  // |int_a^b D f - (f(b) - f(a))|
  std::vector<double> probe_points;
};

FtcResiduals ftc_residuals(const FractalFunction& f, std::shared_ptr<const StaircaseFunction> staircase, double a,
                           double b, const FtcOptions& options = {});

// ---------------------------------------------------------------------------------------------
// Named test functions
// ---------------------------------------------------------------------------------------------

/// Fixed registry used by the CLI: const, S, S2, sinS, cosS. Each is h(S(t)) for a smooth h with
/// known derivative and antiderivative in the S variable.
struct NamedFunction {
  std::string name;
  FractalFunction f;
  std::function<double(double)> outer;             // h
  std::function<double(double)> outer_derivative;  // h'
  std::function<double(double)> outer_primitive;   // H with H' = h
};

NamedFunction named_function(std::string_view name, std::shared_ptr<const StaircaseFunction> staircase,
                             double constant = 1.0);
const std::vector<std::string>& named_function_names();

}  // namespace fracframe
