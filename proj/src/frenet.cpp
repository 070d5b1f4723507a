#include "fracframe/frenet.hpp"

#include <cmath>
#include <limits>

namespace fracframe {

namespace {

using Field = std::function<Vec3(double)>;

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 derivative_of(const Field& f, const FrameCurve& curve, double t, const FrameOptions& options) {
  return stieltjes_derivative<Vec3>(f, *curve.staircase, t, options.derivative);
}

/// Velocity, tangent, normal and binormal as nestable fields.
struct Fields {
  Field velocity;
  Field tangent;
  Field normal;
  Field binormal;
};

Fields make_fields(const FrameCurve& curve, const FrameOptions& options, double kappa_floor) {
  Fields f;
  f.velocity = [curve, options](double t) { return derivative_of(curve.position, curve, t, options); };
  f.tangent = [v = f.velocity](double t) -> Vec3 {
    const Vec3 d = v(t);
    const double n = d.norm();
    if (!(n > 0.0)) throw FrameUndefinedError("velocity vanishes at t=" + std::to_string(t));
    return d / n;
  };
  f.normal = [curve, options, kappa_floor, v = f.velocity, tg = f.tangent](double t) -> Vec3 {
    const Vec3 tv = tg(t);
    const Vec3 k = derivative_of(tg, curve, t, options) / v(t).norm();
    if (!(k.norm() > kappa_floor)) throw FrameUndefinedError("curvature vanishes at t=" + std::to_string(t));
    const Vec3 perp = k - k.dot(tv) * tv;
    return perp.normalized();
  };
  f.binormal = [tg = f.tangent, nm = f.normal](double t) -> Vec3 { return tg(t).cross(nm(t)); };
  return f;
}

double kappa_floor(const FrameCurve& curve, const FrameOptions& options) {
  const double diameter = options.diameter ? *options.diameter : curve_diameter(curve);
  return diameter > 0.0 ? options.tol_k / diameter : options.tol_k;
}

void require_curve(const FrameCurve& curve) {
  if (!curve.position || !curve.staircase) throw DomainError("frame curve needs a position and a staircase");
}

}  // namespace

FrameCurve frame_curve(const StaircaseComposedCurve& curve) {
  FrameCurve fc;
  fc.dim = curve.dimension();
  fc.staircase = curve.staircase_handle();
  const Profile profile = curve.profile();
  const auto staircase = fc.staircase;
  fc.position = [profile, staircase](double t) { return profile.value((*staircase)(t)); };
  if (profile.has_jets()) {
    fc.jets = [profile, staircase](double t) {
      const double s = (*staircase)(t);
      return CurveJets{profile.d1(s), profile.d2(s), profile.d3(s)};
    };
  }
  return fc;
}

double curve_diameter(const FrameCurve& curve) {
  require_curve(curve);
  const Interval dom = curve.domain();
  constexpr int samples = 256;
  Vec3 lo = Vec3::Constant(kInf);
  Vec3 hi = Vec3::Constant(-kInf);
  for (int i = 0; i <= samples; ++i) {
    const double t = (i == samples) ? dom.hi : dom.lo + dom.width() * i / samples;
    const Vec3 p = curve.position(t);
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

Vec3 fractal_velocity(const FrameCurve& curve, double t, const FrameOptions& options) {
  require_curve(curve);
  return derivative_of(curve.position, curve, t, options);
}

double arc_length(const FrameCurve& curve, double t0, double t, Convention convention, double tol) {
  require_curve(curve);
  if (!(t >= t0)) throw DomainError("arc length needs t >= t0");
  const double gamma = curve.staircase->gamma_factor();
  const double scale = convention == Convention::PaperT ? 1.0 / gamma : 1.0;
  FractalFunction speed{[curve, scale](double x) { return scale * fractal_velocity(curve, x).norm(); }};
  IntegralOptions opts;
  opts.convention = convention;
  return falpha_integral(speed, *curve.staircase, t0, t, tol, opts).value;
}

ArcLengthTable arc_length_table(const FrameCurve& curve, double t0, double t1, double tol, std::size_t min_cells) {
  require_curve(curve);
  FractalFunction speed{[curve](double x) { return fractal_velocity(curve, x).norm(); }};
  ArcLengthTable table;
  table.alpha = curve.staircase->alpha();
  table.table = std::make_shared<const CumulativeIntegral>(
      cumulative_integral(speed, curve.staircase, t0, t1, tol, min_cells));
  return table;
}

Vec3 tangent(const FrameCurve& curve, double t, const FrameOptions& options) {
  require_curve(curve);
  return make_fields(curve, options, 0.0).tangent(t);
}

Curvature curvature(const FrameCurve& curve, double t, const FrameOptions& options) {
  require_curve(curve);
  const Fields f = make_fields(curve, options, 0.0);
  Curvature c;
  c.k_vec = derivative_of(f.tangent, curve, t, options) / f.velocity(t).norm();
  c.kappa = c.k_vec.norm();
  c.rho = c.kappa > 0.0 ? 1.0 / c.kappa : kInf;
  return c;
}

FrenetFrame frame(const FrameCurve& curve, double t, const FrameOptions& options) {
  require_curve(curve);
  const double floor = kappa_floor(curve, options);
  const Fields f = make_fields(curve, options, floor);

  FrenetFrame fr;
  fr.param = t;
  fr.s_value = (*curve.staircase)(t);
  fr.convention = options.convention;
  const Vec3 v = f.velocity(t);
  fr.speed = v.norm();
  if (!(fr.speed > 0.0)) throw FrameUndefinedError("velocity vanishes at t=" + std::to_string(t));
  fr.t_vec = v / fr.speed;
  fr.k_vec = derivative_of(f.tangent, curve, t, options) / fr.speed;
  fr.kappa = fr.k_vec.norm();
  if (!(fr.kappa > floor)) throw FrameUndefinedError("curvature vanishes at t=" + std::to_string(t));
  fr.rho = 1.0 / fr.kappa;
  fr.n_vec = (fr.k_vec - fr.k_vec.dot(fr.t_vec) * fr.t_vec).normalized();
  fr.b_vec = fr.t_vec.cross(fr.n_vec);
  if (curve.dim == 3) {
    fr.tau = -derivative_of(f.binormal, curve, t, options).dot(fr.n_vec) / fr.speed;
    if (options.convention == Convention::PaperT) fr.tau /= curve.staircase->gamma_factor();
  }
  return fr;
}

FrenetFrame frame_from_jets(const FrameCurve& curve, double t, const FrameOptions& options) {
  require_curve(curve);
  if (!curve.has_jets()) throw DomainError("curve has no analytic derivatives");
  const CurveJets j = curve.jets(t);
  FrenetFrame fr;
  fr.param = t;
  fr.s_value = (*curve.staircase)(t);
  fr.convention = options.convention;
  fr.speed = j.d1.norm();
  if (!(fr.speed > 0.0)) throw FrameUndefinedError("velocity vanishes at t=" + std::to_string(t));
  fr.t_vec = j.d1 / fr.speed;
  fr.k_vec = (j.d2 - j.d2.dot(fr.t_vec) * fr.t_vec) / (fr.speed * fr.speed);
  fr.kappa = fr.k_vec.norm();
  if (!(fr.kappa > kappa_floor(curve, options))) {
    throw FrameUndefinedError("curvature vanishes at t=" + std::to_string(t));
  }
  fr.rho = 1.0 / fr.kappa;
  fr.n_vec = fr.k_vec / fr.kappa;
  fr.b_vec = fr.t_vec.cross(fr.n_vec);
  if (curve.dim == 3) {
    fr.tau = torsion_determinant(j.d1, j.d2, j.d3);
    if (options.convention == Convention::PaperT) fr.tau /= curve.staircase->gamma_factor();
  }
  return fr;
}

double torsion_determinant(const Vec3& u1, const Vec3& u2, const Vec3& u3, double tol) {
  const Vec3 c = u1.cross(u2);
  const double n = c.norm();
  if (!(n > tol)) throw FrameUndefinedError("torsion undefined: u' x u'' vanishes");
  return c.dot(u3) / (n * n);
}

DerivativeTriple derivative_triple(const FrameCurve& curve, double t, bool use_jets, const FrameOptions& options) {
  require_curve(curve);
  if (use_jets && curve.has_jets()) {
    const CurveJets j = curve.jets(t);
    return {j.d1, j.d2, j.d3};
  }
  const Field v = [curve, options](double x) { return derivative_of(curve.position, curve, x, options); };
  const Field a = [curve, options, v](double x) { return derivative_of(v, curve, x, options); };
  return {v(t), a(t), derivative_of(a, curve, t, options)};
}

FrenetResiduals frenet_residuals(const FrameCurve& curve, double t, const FrameOptions& options) {
  FrameOptions stieltjes = options;
  stieltjes.convention = Convention::Stieltjes;
  const FrenetFrame fr = frame(curve, t, stieltjes);
  const Fields f = make_fields(curve, stieltjes, kappa_floor(curve, stieltjes));
  const Vec3 dt = derivative_of(f.tangent, curve, t, stieltjes) / fr.speed;
  const Vec3 dn = derivative_of(f.normal, curve, t, stieltjes) / fr.speed;
  const Vec3 db = curve.dim == 3 ? Vec3(derivative_of(f.binormal, curve, t, stieltjes) / fr.speed) : Vec3::Zero();
  FrenetResiduals r;
  r.r_t = (dt - fr.kappa * fr.n_vec).norm();
  r.r_n = (dn + fr.kappa * fr.t_vec - fr.tau * fr.b_vec).norm();
  r.r_b = (db + fr.tau * fr.n_vec).norm();
  return r;
}

Mat3 frenet_matrix(double kappa, double tau) {
  Mat3 m;
  m << 0.0, kappa, 0.0, -kappa, 0.0, tau, 0.0, -tau, 0.0;
  return m;
}

BinormalLine binormal_line(const FrameCurve& curve, double t0, const FrameOptions& options) {
  const FrenetFrame fr = frame(curve, t0, options);
  BinormalLine line;
  line.base = curve.position(t0);
  line.direction = fr.b_vec;
  return line;
}

IndicatrixKind parse_indicatrix_kind(std::string_view name) {
  if (name == "tangent") return IndicatrixKind::Tangent;
  if (name == "normal") return IndicatrixKind::Normal;
  if (name == "binormal") return IndicatrixKind::Binormal;
  throw DomainError("unknown indicatrix '" + std::string(name) + "' (expected tangent, normal or binormal)");
}

std::string_view to_string(IndicatrixKind kind) {
  switch (kind) {
    case IndicatrixKind::Tangent:
      return "tangent";
    case IndicatrixKind::Normal:
      return "normal";
    case IndicatrixKind::Binormal:
      return "binormal";
  }
  return "tangent";
}

FrameCurve indicatrix_curve(const FrameCurve& curve, IndicatrixKind which, const FrameOptions& options) {
  require_curve(curve);
  const Fields f = make_fields(curve, options, kappa_floor(curve, options));
  FrameCurve w;
  w.dim = curve.dim == 2 && which == IndicatrixKind::Binormal ? 3 : curve.dim;
  w.staircase = curve.staircase;
  if (curve.has_jets()) {
    w.position = [curve, options, which](double t) -> Vec3 {
      const FrenetFrame fr = frame_from_jets(curve, t, options);
      return which == IndicatrixKind::Tangent ? fr.t_vec : which == IndicatrixKind::Normal ? fr.n_vec : fr.b_vec;
    };
    return w;
  }
  switch (which) {
    case IndicatrixKind::Tangent:
      w.position = f.tangent;
      break;
    case IndicatrixKind::Normal:
      w.position = f.normal;
      break;
    case IndicatrixKind::Binormal:
      w.position = f.binormal;
      break;
  }
  return w;
}

IndicatrixCurve spherical_indicatrix(const FrameCurve& curve, IndicatrixKind which, const std::vector<double>& grid,
                                     const FrameOptions& options) {
  const FrameCurve w = indicatrix_curve(curve, which, options);
  IndicatrixCurve out;
  out.which = which;
  for (double t : grid) {
    out.params.push_back(t);
    try {
      out.samples.push_back(w.position(t));
      out.defined.push_back(true);
    } catch (const FrameUndefinedError&) {
      out.samples.push_back(Vec3::Zero());
      out.defined.push_back(false);
    }
  }
  return out;
}

double indicatrix_radius(const FrameCurve& curve, IndicatrixKind which, double t, const FrameOptions& options) {
  FrameOptions on_sphere = options;
  on_sphere.convention = Convention::Stieltjes;
  const FrameCurve w = indicatrix_curve(curve, which, on_sphere);
  on_sphere.diameter = 2.0;
  const Curvature c = curvature(w, t, on_sphere);
  if (!(c.kappa > on_sphere.tol_k / 2.0)) throw FrameUndefinedError("indicatrix curvature vanishes");
  return c.rho;
}

}  // namespace fracframe
