#pragma once

// Randomised property suites shared by the unit tests and the acceptance runner. Each suite
// returns how many cases it ran, how many failed, and the worst violation seen.

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "fracframe/calculus.hpp"
#include "fracframe/frenet.hpp"
#include "fracframe/ifs_curve.hpp"
#include "fracframe/measure.hpp"
#include "fracframe/presets.hpp"
#include "fracframe/staircase.hpp"
#include "oracles.hpp"

namespace props {

using namespace fracframe;

struct Outcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;

  void record(double violation) {
    ++cases;
    worst = std::max(worst, violation);
    if (violation > 0.0) ++failures;
  }
};

inline std::shared_ptr<const StaircaseFunction> koch_s() {
  static const auto s = std::make_shared<const StaircaseFunction>(koch_staircase(6));
  return s;
}

inline std::shared_ptr<const StaircaseFunction> lopsided_s() {
  static const auto s = [] {
    const IFSCurve c({{0.6, 0.0}, {0.4, 0.0}}, Vec2(1, 0));
    return std::make_shared<const StaircaseFunction>(build_staircase(c, 1.0, 0.0, 10));
  }();
  return s;
}

/// Random closed rotation-scaling system: m - 1 free maps, the last one fixed by sum Q_i = I.
inline std::vector<SimilarityMap> random_ifs(oracle::Gen& gen) {
  for (;;) {
    const int m = gen.integer(2, 5);
    std::vector<std::complex<double>> z;
    std::complex<double> total = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
      z.push_back(std::polar(gen.uniform(0.15, 0.6), gen.uniform(-1.2, 1.2)));
      total += z.back();
    }
    const std::complex<double> last = 1.0 - total;
    if (std::abs(last) < 0.1 || std::abs(last) > 0.9) continue;
    z.push_back(last);
    std::vector<SimilarityMap> maps;
    for (const auto& q : z) maps.push_back({std::abs(q), std::arg(q)});
    return maps;
  }
}

/// h(S(t)) for a random smooth h, or a raw function of t.
inline FractalFunction random_function(oracle::Gen& gen, std::shared_ptr<const StaircaseFunction> s) {
  const double w = gen.uniform(0.5, 12.0);
  const double phase = gen.uniform(0, 6.3);
  const double c2 = gen.uniform(-3, 3);
  switch (gen.integer(0, 2)) {
    case 0:
      return {[s, w, phase](double t) { return std::sin(w * (*s)(t) + phase); }, Smoothness::StaircaseComposed};
    case 1:
      return {[s, c2, w](double t) {
                const double x = (*s)(t);
                return c2 * x * x - w * x;
              },
              Smoothness::StaircaseComposed};
    default:
      return {[w, phase](double t) { return std::cos(w * t + phase) * t; }, Smoothness::Raw};
  }
}

inline Partition random_partition(oracle::Gen& gen, double a, double b, int max_inner) {
  return Partition(gen.knots(a, b, gen.integer(0, max_inner)));
}

/// Upper sum never below the lower sum.
inline Outcome upper_above_lower(int n, std::uint64_t seed) {
  Outcome out{"upper >= lower"};
  oracle::Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const auto s = gen.integer(0, 1) ? koch_s() : lopsided_s();
    const SumPair p = upper_lower_sums(random_function(gen, s), *s, random_partition(gen, 0, 1, 30));
    out.record(std::max(0.0, p.lower - p.upper));
  }
  return out;
}

/// Inserting knots lowers the upper sum and raises the lower sum. Cell extrema are sampled,
/// so a relative slack of 1e-9 absorbs the sampling error.
inline Outcome refinement_monotone(int n, std::uint64_t seed) {
  Outcome out{"refinement monotonicity of sums"};
  oracle::Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const auto s = gen.integer(0, 1) ? koch_s() : lopsided_s();
    const FractalFunction f = random_function(gen, s);
    Partition p = random_partition(gen, 0, 1, 12);
    const SumPair coarse = upper_lower_sums(f, *s, p);
    const int extra = gen.integer(1, 4);
    for (int k = 0; k < extra; ++k) {
      const auto& kn = p.knots();
      const std::size_t cell = static_cast<std::size_t>(gen.integer(0, static_cast<int>(kn.size()) - 2));
      p = p.with_knot(kn[cell] + (kn[cell + 1] - kn[cell]) * gen.uniform(0.1, 0.9));
    }
    const SumPair fine = upper_lower_sums(f, *s, p);
    const double slack = 1e-9 * (1.0 + std::abs(coarse.upper) + std::abs(coarse.lower));
    out.record(std::max({0.0, fine.upper - coarse.upper - slack, coarse.lower - fine.lower - slack}));
  }
  return out;
}

/// sigma^alpha never drops when a knot is inserted, for alpha <= 1 on random closed systems.
inline Outcome knot_insertion_monotone(int n, std::uint64_t seed) {
  Outcome out{"chord-sum knot insertion (alpha <= 1)"};
  oracle::Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const IFSCurve curve(random_ifs(gen), Vec2(1, 0));
    const double alpha = gen.uniform(0.3, 1.0);
    const Partition p = random_partition(gen, 0, 1, 10);
    const auto& kn = p.knots();
    const std::size_t cell = static_cast<std::size_t>(gen.integer(0, static_cast<int>(kn.size()) - 2));
    const Partition q = p.with_knot(kn[cell] + (kn[cell + 1] - kn[cell]) * gen.uniform(0.05, 0.95));
    const int depth = 14;
    const double before = chord_sum(curve, p, alpha, depth).value;
    const double after = chord_sum(curve, q, alpha, depth).value;
    out.record(std::max(0.0, before - after - 1e-13 * before));
  }
  return out;
}

/// Closure: every random closed system validates and its attractor runs from 0 to the anchor.
inline Outcome closure_invariance(int n, std::uint64_t seed) {
  Outcome out{"closure and endpoint invariance"};
  oracle::Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const auto maps = random_ifs(gen);
    const Vec2 anchor(gen.uniform(-2, 2), gen.uniform(0.5, 2));
    const ValidationReport r = validate_ifs(maps);
    const IFSCurve curve(maps, anchor);
    const auto pts = curve.sample_polyline(2).points;
    const double end_err = std::max(pts.front().norm(), (pts.back() - anchor).norm());
    out.record((r.valid ? 0.0 : 1.0) + std::max(0.0, end_err - 1e-12));
  }
  return out;
}

/// Random staircase-composed curve (3-D helix, tilted planar circle, or a plane preset).
struct RandomCurve {
  FrameCurve curve;
  bool planar = false;
  bool exact_plane = false;  // stored as a 2-D curve
};

inline RandomCurve random_curve(oracle::Gen& gen) {
  PresetParams p;
  p.staircase = gen.integer(0, 1) ? koch_s() : lopsided_s();
  switch (gen.integer(0, 4)) {
    case 0:
      p.a = gen.uniform(0.3, 4);
      p.b = gen.uniform(0.3, 4) * (gen.integer(0, 1) ? 1 : -1);
      return {frame_curve(std::get<StaircaseComposedCurve>(make_preset("helix", p))), false, false};
    case 1:
      p.a = gen.uniform(0.3, 4);
      return {frame_curve(std::get<StaircaseComposedCurve>(make_preset("snowflake", p))), true, true};
    case 2:
      return {frame_curve(std::get<StaircaseComposedCurve>(make_preset("cubic", p))), true, true};
    case 3:
      p.offset = gen.uniform(0.2, 2.0);
      return {frame_curve(std::get<StaircaseComposedCurve>(make_preset("logspiral", p))), true, true};
    default: {
      const double r = gen.uniform(0.5, 3);
      const Mat3 rot = (Eigen::AngleAxisd(gen.uniform(0, 3), Vec3(gen.uniform(-1, 1), gen.uniform(-1, 1), 1).normalized()))
                           .toRotationMatrix();
      const auto s = p.staircase;
      FrameCurve c;
      c.dim = 3;
      c.staircase = s;
      c.position = [rot, r, s](double t) {
        const double x = 2.0 * (*s)(t);
        return Vec3(rot * Vec3(r * std::cos(x), r * std::sin(x), 0.0));
      };
      return {c, true, false};
    }
  }
}

struct FrameOutcomes {
  Outcome orthonormal{"frame orthonormality"};
  Outcome tangent_perp{"tangent perpendicular to curvature vector"};
  Outcome planar_tau{"planar curves have zero torsion"};
};

inline FrameOutcomes frame_properties(int n, std::uint64_t seed) {
  FrameOutcomes out;
  oracle::Gen gen(seed);
  for (int i = 0; i < n; ++i) {
    const RandomCurve rc = random_curve(gen);
    const double t = gen.uniform(0, 1);
    const FrenetFrame f = frame(rc.curve, t);
    Mat3 m;
    m.col(0) = f.t_vec;
    m.col(1) = f.n_vec;
    m.col(2) = f.b_vec;
    const double defect = std::max((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff(),
                                   (f.t_vec.cross(f.n_vec) - f.b_vec).norm());
    out.orthonormal.record(std::max(0.0, defect - 1e-9));
    out.tangent_perp.record(std::max(0.0, std::abs(f.t_vec.dot(f.k_vec)) - 1e-7));
    if (rc.planar) out.planar_tau.record(rc.exact_plane ? std::abs(f.tau) : std::max(0.0, std::abs(f.tau) - 1e-6));
  }
  return out;
}

inline std::vector<Outcome> all(int scale = 1) {
  std::vector<Outcome> out;
  out.push_back(upper_above_lower(200 * scale, 11));
  out.push_back(refinement_monotone(200 * scale, 12));
  out.push_back(knot_insertion_monotone(250 * scale, 13));
  out.push_back(closure_invariance(150 * scale, 14));
  const FrameOutcomes f = frame_properties(250 * scale, 15);
  out.push_back(f.orthonormal);
  out.push_back(f.tangent_perp);
  out.push_back(f.planar_tau);
  return out;
}

}  // namespace props
