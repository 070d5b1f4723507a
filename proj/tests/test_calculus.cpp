#include <doctest.h>

#include <cmath>
#include <memory>

#include "fracframe/calculus.hpp"
#include "fracframe/errors.hpp"
#include "fracframe/staircase.hpp"
#include "oracles.hpp"

using namespace fracframe;

namespace {

std::shared_ptr<const StaircaseFunction> koch_s() {
  static const auto s = std::make_shared<const StaircaseFunction>(koch_staircase(6));
  return s;
}

/// Segment split 0.6 / 0.4: a lopsided staircase at alpha = 1 whose stencils are not symmetric.
std::shared_ptr<const StaircaseFunction> lopsided_s() {
  static const auto s = [] {
    const IFSCurve c({{0.6, 0.0}, {0.4, 0.0}}, Vec2(1, 0));
    return std::make_shared<const StaircaseFunction>(build_staircase(c, 1.0, 0.0, 10));
  }();
  return s;
}

FractalFunction of_s(std::shared_ptr<const StaircaseFunction> s, double (*h)(double)) {
  return {[s, h](double t) { return h((*s)(t)); }, Smoothness::StaircaseComposed};
}

FractalFunction constant(double c) {
  return {[c](double) { return c; }, Smoothness::StaircaseComposed};
}

double square(double x) { return x * x; }
double ident(double x) { return x; }
double sine(double x) { return std::sin(x); }

}  // namespace

TEST_CASE("continuity check") {
  const auto s = koch_s();
  SUBCASE("constant") {
    const ContinuityReport r = f_continuity_check(constant(2.5), 0.3, *s);
    CHECK(r.continuous);
    for (auto [h, dev] : r.deviations) CHECK(dev == 0.0);
  }
  SUBCASE("sin of S decays") {
    const ContinuityReport r = f_continuity_check(of_s(s, sine), 0.4, *s);
    CHECK(r.continuous);
    REQUIRE(r.deviations.size() == 12);
    CHECK(r.deviations.back().second < r.deviations.front().second);
  }
  SUBCASE("jump") {
    const FractalFunction sign{[](double t) { return t < 0.5 ? -1.0 : (t > 0.5 ? 1.0 : 0.0); }};
    CHECK_FALSE(f_continuity_check(sign, 0.5, *s).continuous);
  }
  CHECK_THROWS_AS(f_continuity_check(constant(1), 0.5, *s, {0.1, 0.2}), DomainError);
  CHECK_THROWS_AS(f_continuity_check(constant(1), 1.5, *s), DomainError);
}

TEST_CASE("derivative examples") {
  const auto s = koch_s();
  for (double t : {0.1, 0.25, 0.5, 0.77}) {
    CHECK(falpha_derivative(of_s(s, ident), *s, t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(falpha_derivative(of_s(s, sine), *s, t) - std::cos((*s)(t))) < 1e-8);
    CHECK(falpha_derivative(constant(4.0), *s, t) == 0.0);
  }
}

TEST_CASE("derivative at the window ends is one-sided") {
  const auto s = koch_s();
  for (double t : {0.0, 1.0}) {
    CHECK(std::abs(falpha_derivative(of_s(s, sine), *s, t) - std::cos((*s)(t))) < 1e-7);
    CHECK(std::abs(falpha_derivative(of_s(s, square), *s, t) - 2 * (*s)(t)) < 1e-8);
  }
  const auto at_start = detail::plan_steps(*s, 0.0, 5, {});
  REQUIRE(at_start.size() == 1);
  CHECK(at_start.front().direction == 1);
  const auto inside = detail::plan_steps(*s, 0.5, 5, {});
  REQUIRE(inside.size() == 1);
  CHECK(inside.front().direction == 0);
  const auto near_end = detail::plan_steps(*s, 0.999, 5, {});
  REQUIRE(near_end.size() == 2);
  CHECK(near_end[0].direction == 0);
  CHECK(near_end[1].direction == -1);
  CHECK(near_end[1].steps.front() > near_end[0].steps.front());
}

TEST_CASE("derivative against a lopsided staircase") {
  const auto s = lopsided_s();
  CHECK((*s)(0.5) == doctest::Approx(0.6).epsilon(1e-9));
  for (double t : {0.13, 0.5, 0.6875, 0.9}) {
    CHECK(std::abs(falpha_derivative(of_s(s, sine), *s, t) - std::cos((*s)(t))) < 1e-6);
    CHECK(std::abs(falpha_derivative(of_s(s, square), *s, t) - 2 * (*s)(t)) < 1e-6);
  }
}

TEST_CASE("flat staircase is not differentiable") {
  const StaircaseFunction flat(1.0, 0.0, 1, 2, {0.0, 0.5, 1.0}, {0.0, 0.0, 1.0});
  const FractalFunction f{[](double t) { return t; }};
  CHECK_THROWS_AS(falpha_derivative(f, flat, 0.25), NonDifferentiableError);
  CHECK(falpha_derivative(f, flat, 0.75) == doctest::Approx(0.5));
}

TEST_CASE("derivative is linear") {
  const auto s = koch_s();
  const FractalFunction f = of_s(s, sine);
  const FractalFunction g = of_s(s, square);
  const FractalFunction mix{[&](double t) { return 2.0 * f(t) - 3.0 * g(t); }};
  for (double t : {0.2, 0.61}) {
    const double lhs = falpha_derivative(mix, *s, t);
    const double rhs = 2.0 * falpha_derivative(f, *s, t) - 3.0 * falpha_derivative(g, *s, t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("paper-t divides the derivative by Gamma") {
  const auto s = koch_s();
  const FractalFunction f = of_s(s, sine);
  for (double t : {0.2, 0.5, 1.0}) {
    const double st = falpha_derivative(f, *s, t, Convention::Stieltjes);
    CHECK(falpha_derivative(f, *s, t, Convention::PaperT) == st / s->gamma_factor());
  }
  CHECK(s->gamma_factor() == doctest::Approx(oracle::lanczos_gamma(s->alpha() + 1)).epsilon(1e-13));
}

TEST_CASE("vector derivative matches component derivatives") {
  const auto s = koch_s();
  const VectorFunction v = [s](double t) {
    VecX out(2);
    out << std::cos((*s)(t)), std::sin((*s)(t));
    return out;
  };
  const VecX d = falpha_derivative(v, *s, 0.3);
  const double s0 = (*s)(0.3);
  CHECK(std::abs(d[0] + std::sin(s0)) < 1e-8);
  CHECK(std::abs(d[1] - std::cos(s0)) < 1e-8);
}

TEST_CASE("derivative_function wraps the pointwise derivative") {
  const auto s = koch_s();
  const FractalFunction df = derivative_function(of_s(s, square), s);
  CHECK(df(0.4) == doctest::Approx(2 * (*s)(0.4)).epsilon(1e-9));
  CHECK_THROWS_AS(derivative_function(of_s(s, square), nullptr), DomainError);
}

TEST_CASE("upper and lower sums") {
  const auto s = koch_s();
  SUBCASE("constant") {
    const SumPair p = upper_lower_sums(constant(3.0), *s, Partition::uniform(0.2, 0.9, 7));
    const double expect = 3.0 * ((*s)(0.9) - (*s)(0.2));
    CHECK(p.upper == doctest::Approx(expect).epsilon(1e-14));
    CHECK(p.lower == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("refinement shrinks the gap for f = S") {
    double prev = INFINITY;
    for (std::size_t cells : {1u, 4u, 16u, 64u, 256u}) {
      const SumPair p = upper_lower_sums(of_s(s, ident), *s, Partition::uniform(0, 1, cells));
      CHECK(p.upper >= p.lower);
      CHECK(p.width() < prev);
      prev = p.width();
    }
  }
  SUBCASE("a wide cell of a fast oscillation still finds both extremes") {
    const FractalFunction f{[s](double t) { return std::sin(11.0 * (*s)(t) + 4.5); }, Smoothness::StaircaseComposed};
    const SumPair p = upper_lower_sums(f, *s, Partition({0.0, 0.95}));
    const double ds = s->increment(0.0, 0.95);
    CHECK(p.upper >= ds * (1.0 - 1e-6));
    CHECK(p.lower <= -ds * (1.0 - 1e-6));
  }
  SUBCASE("single cell of sin S brackets the dense extremes") {
    const FractalFunction f = of_s(s, sine);
    const SumPair p = upper_lower_sums(f, *s, Partition({0.0, 1.0}));
    double hi = -INFINITY, lo = INFINITY;
    for (int i = 0; i <= 20000; ++i) {
      const double v = f(i / 20000.0);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    const double mass = s->total();
    CHECK(p.upper == doctest::Approx(hi * mass).epsilon(1e-9));
    CHECK(p.lower == doctest::Approx(lo * mass).epsilon(1e-9));
    const double exact = 1.0 - std::cos(mass);
    CHECK(p.lower <= exact);
    CHECK(exact <= p.upper);
  }
}

TEST_CASE("integral examples") {
  const auto s = koch_s();
  const double a = 0.1, b = 0.85;
  const double sa = (*s)(a), sb = (*s)(b);
  CHECK(falpha_integral(constant(2.0), *s, a, b, 1e-9).value == doctest::Approx(2.0 * (sb - sa)).epsilon(1e-14));
  const IntegralResult r = falpha_integral(of_s(s, ident), *s, a, b, 1e-4);
  CHECK(std::abs(r.value - (sb * sb - sa * sa) / 2) < 1e-4);
  CHECK(r.bracket.width() < 1e-4);
  CHECK(r.bracket.lower <= r.value);
  CHECK(falpha_integral(of_s(s, sine), *s, 0.4, 0.4, 1e-6).value == 0.0);
  CHECK_THROWS_AS(falpha_integral(constant(1), *s, 0.5, 0.2, 1e-6), DomainError);
}

TEST_CASE("integral reports the last bracket when the budget runs out") {
  const auto s = koch_s();
  IntegralOptions opts;
  opts.max_cells = 64;
  try {
    falpha_integral(of_s(s, sine), *s, 0.0, 1.0, 1e-10, opts);
    FAIL("expected a bracket error");
  } catch (const BracketError& e) {
    CHECK(e.last().width() > 1e-10);
    CHECK(e.last().upper >= e.last().lower);
    CHECK(e.last().partition_level == 3);
  }
}

TEST_CASE("paper-t multiplies the integral by Gamma") {
  const auto s = koch_s();
  IntegralOptions opts;
  const double st = falpha_integral(of_s(s, sine), *s, 0.0, 1.0, 1e-3, opts).value;
  opts.convention = Convention::PaperT;
  CHECK(falpha_integral(of_s(s, sine), *s, 0.0, 1.0, 1e-3, opts).value == st * s->gamma_factor());
}

TEST_CASE("vector integral") {
  const auto s = koch_s();
  const VectorFunction v = [s](double t) {
    VecX out(2);
    out << 1.0, (*s)(t);
    return out;
  };
  const VecX r = falpha_integral(v, 2, *s, 0.0, 1.0, 1e-4);
  CHECK(r[0] == doctest::Approx(s->total()).epsilon(1e-12));
  CHECK(std::abs(r[1] - s->total() * s->total() / 2) < 1e-4);
}

TEST_CASE("cumulative integral") {
  const auto s = koch_s();
  const CumulativeIntegral g = cumulative_integral(of_s(s, sine), s, 0.0, 1.0, 1e-6);
  CHECK(g(0.0) == 0.0);
  CHECK(g.knots().size() == g.values().size());
  for (double t : {0.25, 0.3, 0.8125, 1.0}) CHECK(std::abs(g(t) - (1 - std::cos((*s)(t)))) < 1e-6);
  CHECK_THROWS_AS(g(1.5), DomainError);
}

TEST_CASE("fundamental theorem residuals") {
  const auto s = koch_s();
  SUBCASE("constant") {
    const FtcResiduals r = ftc_residuals(constant(1.7), s, 0.0, 1.0);
    CHECK(r.r1 <= 1e-10);
    CHECK(r.r2 <= 1e-10);
    CHECK(r.probe_points.size() == 15);
  }
  SUBCASE("sin of S") {
    const FtcResiduals r = ftc_residuals(of_s(s, sine), s, 0.0, 1.0);
    CHECK(r.r1 < 1e-6);
    CHECK(r.r2 < 1e-6);
  }
  SUBCASE("S squared") {
    CHECK(ftc_residuals(of_s(s, square), s, 0.0, 1.0).r2 < 1e-6);
  }
}

TEST_CASE("named functions") {
  const auto s = koch_s();
  for (const auto& name : named_function_names()) {
    const NamedFunction nf = named_function(name, s, 2.0);
    for (double t : {0.0, 0.35, 1.0}) {
      const double x = (*s)(t);
      CHECK(nf.f(t) == doctest::Approx(nf.outer(x)));
      CHECK(std::abs(falpha_derivative(nf.f, *s, t) - nf.outer_derivative(x)) < 1e-7);
    }
    const double h = 1e-5;
    CHECK((nf.outer_primitive(0.3 + h) - nf.outer_primitive(0.3 - h)) / (2 * h) ==
          doctest::Approx(nf.outer(0.3)).epsilon(1e-8));
  }
  CHECK(named_function("const", s, 2.0).f(0.5) == 2.0);
  CHECK_THROWS_AS(named_function("tanS", s), DomainError);
}
