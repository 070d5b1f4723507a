#include <doctest.h>

#include <cmath>
#include <memory>

#include "fracframe/errors.hpp"
#include "fracframe/frenet.hpp"
#include "fracframe/presets.hpp"
#include "oracles.hpp"

using namespace fracframe;

namespace {

std::shared_ptr<const StaircaseFunction> koch_s() {
  static const auto s = std::make_shared<const StaircaseFunction>(koch_staircase(6));
  return s;
}

std::shared_ptr<const StaircaseFunction> identity_s() {
  static const auto s = std::make_shared<const StaircaseFunction>(StaircaseFunction::identity());
  return s;
}

FrameCurve composed(const std::string& name, double a, double b, std::shared_ptr<const StaircaseFunction> s) {
  PresetParams p;
  p.a = a;
  p.b = b;
  p.staircase = std::move(s);
  return frame_curve(std::get<StaircaseComposedCurve>(make_preset(name, p)));
}

FrameCurve helix(std::shared_ptr<const StaircaseFunction> s = koch_s()) { return composed("helix", 3, 4, s); }

FrameCurve line() {
  FrameCurve c;
  c.dim = 3;
  c.position = [](double t) { return Vec3(1 + t, 2 * t, -t); };
  c.staircase = identity_s();
  return c;
}

const double kParams[] = {0.0, 0.13, 0.25, 0.5, 0.61, 0.9, 1.0};

}  // namespace

TEST_CASE("arc length") {
  const FrameCurve h = helix();
  const auto& s = *h.staircase;
  CHECK(arc_length(h, 0.3, 0.3) == 0.0);
  for (double t : {0.25, 0.7, 1.0}) {
    CHECK(std::abs(arc_length(h, 0.0, t) - 5.0 * s(t)) < 1e-6);
    CHECK(arc_length(h, 0.0, t, Convention::PaperT) == doctest::Approx(arc_length(h, 0.0, t)).epsilon(1e-12));
  }
  const FrameCurve snow = composed("snowflake", 2.0, 0.0, koch_s());
  CHECK(std::abs(arc_length(snow, 0.0, 0.6) - 2.0 * s(0.6)) < 1e-6);
}

TEST_CASE("arc length table") {
  const FrameCurve h = helix();
  const ArcLengthTable table = arc_length_table(h, 0.0, 1.0);
  CHECK(table.at(0.0) == 0.0);
  for (std::size_t i = 1; i < table.lengths().size(); ++i) CHECK(table.lengths()[i] >= table.lengths()[i - 1]);
  for (double t : {0.2, 0.5, 0.875}) CHECK(std::abs(table.at(t) - arc_length(h, 0.0, t)) < 1e-6);
  CHECK(std::abs(table.at(1.0) - 5.0 * h.staircase->total()) < 1e-9);
}

TEST_CASE("tangent") {
  const FrameCurve h = helix();
  for (double t : kParams) {
    const oracle::HelixFrame o = oracle::helix_frame(3, 4, (*h.staircase)(t));
    const Vec3 tv = tangent(h, t);
    CHECK((tv - o.t).norm() < 1e-8);
    CHECK(tv.norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
  const FrameCurve cubic = composed("cubic", 1, 1, koch_s());
  for (double t : {0.1, 0.5, 1.0}) {
    const double x = (*cubic.staircase)(t);
    const Vec3 expect = Vec3(1, x * x, 0) / std::sqrt(1 + x * x * x * x);
    CHECK((tangent(cubic, t) - expect).norm() < 1e-8);
  }
  FrameCurve still = line();
  still.position = [](double) { return Vec3(1, 1, 1); };
  CHECK_THROWS_AS(tangent(still, 0.5), FrameUndefinedError);
}

TEST_CASE("curvature") {
  const FrameCurve snow = composed("snowflake", 2.0, 0.0, koch_s());
  for (double t : kParams) {
    const double x = (*snow.staircase)(t);
    const Curvature c = curvature(snow, t);
    CHECK((c.k_vec - Vec3(-std::cos(x), -std::sin(x), 0) / 2.0).norm() < 1e-8);
    CHECK(c.kappa == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(c.rho * c.kappa == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(curvature(helix(), 0.4).kappa == doctest::Approx(0.12).epsilon(1e-8));
  const Curvature flat = curvature(line(), 0.5);
  CHECK(flat.kappa < 1e-9);
}

TEST_CASE("helix frame against the closed form") {
  const FrameCurve h = helix();
  for (double t : kParams) {
    const FrenetFrame f = frame(h, t);
    const oracle::HelixFrame o = oracle::helix_frame(3, 4, (*h.staircase)(t));
    CHECK((f.t_vec - o.t).norm() < 1e-8);
    CHECK((f.n_vec - o.n).norm() < 1e-8);
    CHECK((f.b_vec - o.b).norm() < 1e-8);
    CHECK(std::abs(f.kappa - 0.12) < 1e-8);
    CHECK(std::abs(f.tau - 0.16) < 1e-5);
    CHECK(f.speed == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(f.s_value == (*h.staircase)(t));
  }
}

TEST_CASE("paper-t frame scales torsion only") {
  const FrameCurve h = helix();
  FrameOptions opts;
  opts.convention = Convention::PaperT;
  const double g = oracle::lanczos_gamma(h.staircase->alpha() + 1);
  for (double t : {0.2, 0.75}) {
    const FrenetFrame f = frame(h, t, opts);
    CHECK(std::abs(f.tau - 0.16 / g) < 1e-6);
    CHECK(std::abs(f.kappa - 0.12) < 1e-8);
    CHECK(f.convention == Convention::PaperT);
  }
}

TEST_CASE("frame invariants") {
  for (const FrameCurve& c : {helix(), composed("snowflake", 1.5, 0, koch_s()), composed("cubic", 1, 1, koch_s()),
                              composed("logspiral", 0.7, 0, koch_s())}) {
    for (double t : {0.05, 0.5, 0.95}) {
      const FrenetFrame f = frame(c, t);
      CHECK(std::abs(f.t_vec.norm() - 1) < 1e-9);
      CHECK(std::abs(f.n_vec.norm() - 1) < 1e-9);
      CHECK(std::abs(f.b_vec.norm() - 1) < 1e-9);
      CHECK(std::abs(f.t_vec.dot(f.n_vec)) < 1e-9);
      CHECK(std::abs(f.t_vec.dot(f.b_vec)) < 1e-9);
      CHECK(std::abs(f.n_vec.dot(f.b_vec)) < 1e-9);
      CHECK((f.t_vec.cross(f.n_vec) - f.b_vec).norm() < 1e-9);
      CHECK(f.rho * f.kappa == doctest::Approx(1.0));
      if (c.dim == 2) CHECK(f.tau == 0.0);
    }
  }
}

TEST_CASE("planar frames") {
  const FrameCurve snow = composed("snowflake", 2.0, 0.0, koch_s());
  const FrenetFrame f = frame(snow, 0.3);
  CHECK(f.tau == 0.0);
  CHECK((f.b_vec - Vec3::UnitZ()).norm() < 1e-12);
}

TEST_CASE("straight line has no frame") {
  CHECK_THROWS_AS(frame(line(), 0.5), FrameUndefinedError);
  CHECK_THROWS_AS(binormal_line(line(), 0.5), FrameUndefinedError);
  CHECK_THROWS_AS(frenet_residuals(line(), 0.5), FrameUndefinedError);
}

TEST_CASE("jets route agrees with the numeric route") {
  const FrameCurve h = helix();
  REQUIRE(h.has_jets());
  for (double t : {0.1, 0.6}) {
    const FrenetFrame a = frame(h, t);
    const FrenetFrame b = frame_from_jets(h, t);
    CHECK((a.t_vec - b.t_vec).norm() < 1e-8);
    CHECK((a.n_vec - b.n_vec).norm() < 1e-8);
    CHECK(std::abs(a.tau - b.tau) < 1e-6);
    const DerivativeTriple num = derivative_triple(h, t, false);
    const DerivativeTriple ana = derivative_triple(h, t, true);
    CHECK((num.d1 - ana.d1).norm() < 1e-8);
    CHECK((num.d2 - ana.d2).norm() < 1e-6);
  }
  CHECK_THROWS_AS(frame_from_jets(line(), 0.5), DomainError);
}

TEST_CASE("torsion determinant") {
  CHECK(torsion_determinant(Vec3(1, 0, 0), Vec3(0, 2, 0), Vec3(3, -1, 0)) == 0.0);
  const DerivativeTriple d = derivative_triple(helix(identity_s()), 0.37, true);
  CHECK(torsion_determinant(d.d1, d.d2, d.d3) == doctest::Approx(0.16).epsilon(1e-13));
  CHECK(torsion_determinant(d.d1, d.d2, d.d3) == doctest::Approx(frame(helix(identity_s()), 0.37).tau).epsilon(1e-6));
  for (double lambda : {0.5, 2.0, 7.0}) {
    // A dilation of space divides torsion by lambda; a reparametrisation leaves it alone.
    CHECK(torsion_determinant(lambda * d.d1, lambda * d.d2, lambda * d.d3) ==
          doctest::Approx(0.16 / lambda).epsilon(1e-12));
    CHECK(torsion_determinant(lambda * d.d1, lambda * lambda * d.d2, lambda * lambda * lambda * d.d3) ==
          doctest::Approx(0.16).epsilon(1e-12));
  }
  CHECK_THROWS_AS(torsion_determinant(Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(0, 0, 1)), FrameUndefinedError);
}

TEST_CASE("Serret-Frenet residuals") {
  const FrameCurve h = helix();
  for (double t : {0.0, 0.3, 0.5, 1.0}) CHECK(frenet_residuals(h, t).max() < 1e-5);
  const FrameCurve snow = composed("snowflake", 2.0, 0.0, koch_s());
  for (double t : {0.2, 0.8}) {
    CHECK(frenet_residuals(snow, t).r_b <= 1e-9);
    CHECK(frenet_residuals(snow, t).max() < 1e-5);
  }
  const Mat3 m = frenet_matrix(0.12, 0.16);
  CHECK((m + m.transpose()).norm() == 0.0);
  CHECK(m(0, 1) == 0.12);
  CHECK(m(1, 2) == 0.16);
}

TEST_CASE("binormal line") {
  const FrameCurve h = helix();
  const double t0 = 0.55;
  const BinormalLine l = binormal_line(h, t0);
  CHECK((l.point(0) - h.position(t0)).norm() == 0.0);
  CHECK(l.direction.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const double s0 = (*h.staircase)(t0);
  for (double k : {-1.0, 0.4, 1.0}) CHECK(std::abs(l.point(k).z() - (4 * s0 + 3 * k / 5.0)) < 1e-8);
}

TEST_CASE("spherical indicatrix samples") {
  const FrameCurve h = helix();
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) grid.push_back(i / 16.0);
  for (IndicatrixKind k : {IndicatrixKind::Tangent, IndicatrixKind::Normal, IndicatrixKind::Binormal}) {
    const IndicatrixCurve ic = spherical_indicatrix(h, k, grid);
    REQUIRE(ic.samples.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(ic.defined[i]);
      CHECK(std::abs(ic.samples[i].norm() - 1.0) < 1e-9);
    }
    CHECK(parse_indicatrix_kind(to_string(k)) == k);
  }
  const IndicatrixCurve flat = spherical_indicatrix(line(), IndicatrixKind::Normal, grid);
  for (bool d : flat.defined) CHECK_FALSE(d);
  CHECK_THROWS_AS(parse_indicatrix_kind("osculating"), DomainError);
}

TEST_CASE("helix indicatrix radii are the sphere circles") {
  // Unit tangents of the helix sweep the circle at height b/c, radius a/c; binormals the circle
  // at height a/c, radius b/c; normals a great circle.
  const FrameCurve h = helix();
  const double kappa = 0.12, tau = 0.16;
  const double w = std::hypot(kappa, tau);
  for (double t : {0.0, 0.3, 0.7, 1.0}) {
    CHECK(indicatrix_radius(h, IndicatrixKind::Tangent, t) == doctest::Approx(kappa / w).epsilon(1e-6));
    CHECK(indicatrix_radius(h, IndicatrixKind::Normal, t) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(indicatrix_radius(h, IndicatrixKind::Binormal, t) == doctest::Approx(tau / w).epsilon(1e-6));
  }
  const oracle::HelixFrame o = oracle::helix_frame(3, 4, 0.0);
  CHECK(std::hypot(o.t.x(), o.t.y()) == doctest::Approx(kappa / w));
}

TEST_CASE("circle tangent indicatrix is a great circle") {
  const FrameCurve circle = composed("snowflake", 1.0, 0.0, koch_s());
  for (double t : {0.2, 0.5}) CHECK(indicatrix_radius(circle, IndicatrixKind::Tangent, t) == doctest::Approx(1.0).epsilon(1e-6));
  const FrameCurve tan_curve = indicatrix_curve(circle, IndicatrixKind::Tangent);
  CHECK(std::abs(tan_curve.position(0.4).norm() - 1.0) < 1e-9);
}
