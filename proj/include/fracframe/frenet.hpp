#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "fracframe/calculus.hpp"
#include "fracframe/presets.hpp"
#include "fracframe/staircase.hpp"
#include "fracframe/types.hpp"

namespace fracframe {

/// Curve as seen by the frame routines: position in R^3 (planar curves keep z = 0), the staircase
/// it is differentiated against, and optional analytic J-derivatives.
struct FrameCurve {
  std::size_t dim = 3;
  std::function<Vec3(double)> position;
  std::shared_ptr<const StaircaseFunction> staircase;
  std::function<CurveJets(double)> jets;

  Interval domain() const { return staircase->domain(); }
  bool has_jets() const { return static_cast<bool>(jets); }
};

FrameCurve frame_curve(const StaircaseComposedCurve& curve);

struct FrameOptions {
  Convention convention = Convention::Stieltjes;
  DerivativeOptions derivative;
  /// Curvature below tol_k / diameter counts as zero; the diameter is sampled when not given.
  double tol_k = 1e-10;
  std::optional<double> diameter;
};

/// Bounding-box diagonal of the curve sampled at 257 parameters.
double curve_diameter(const FrameCurve& curve);

/// D u against J.
Vec3 fractal_velocity(const FrameCurve& curve, double t, const FrameOptions& options = {});

/// s(t0, t) = integral over C(t0, t) of |D u|. The value is the same under both conventions.
double arc_length(const FrameCurve& curve, double t0, double t, Convention convention = Convention::Stieltjes,
                  double tol = 1e-6);

/// Cumulative arc length on a uniform grid, interpolated linearly in S between knots.
struct ArcLengthTable {
  std::shared_ptr<const CumulativeIntegral> table;
  double alpha = 1.0;

  const std::vector<double>& knots() const { return table->knots(); }
  const std::vector<double>& lengths() const { return table->values(); }
  double at(double t) const { return (*table)(t); }
};

ArcLengthTable arc_length_table(const FrameCurve& curve, double t0, double t1, double tol = 1e-6,
                                std::size_t min_cells = 64);

Vec3 tangent(const FrameCurve& curve, double t, const FrameOptions& options = {});

struct Curvature {
  Vec3 k_vec = Vec3::Zero();
  double kappa = 0.0;
  double rho = 0.0;  // infinity when kappa = 0
};

/// k = (D t_F) / |D u|: the tangent's rate against arc length.
Curvature curvature(const FrameCurve& curve, double t, const FrameOptions& options = {});

struct FrenetFrame {
  Vec3 t_vec = Vec3::UnitX();
  Vec3 n_vec = Vec3::UnitY();
  Vec3 b_vec = Vec3::UnitZ();
  Vec3 k_vec = Vec3::Zero();
  double kappa = 0.0;
  double rho = 0.0;
  double tau = 0.0;
  double speed = 0.0;  // |D u| against J
  double param = 0.0;
  double s_value = 0.0;
  Convention convention = Convention::Stieltjes;
};

/// Numeric frame from nested F^alpha-derivatives. tau = -(D b . n) / |D u|, divided by
/// Gamma(alpha+1) under PaperT. Throws FrameUndefinedError when the curvature vanishes.
FrenetFrame frame(const FrameCurve& curve, double t, const FrameOptions& options = {});

/// Same frame from the analytic jets. Throws DomainError when the curve has none.
FrenetFrame frame_from_jets(const FrameCurve& curve, double t, const FrameOptions& options = {});

/// (u1 x u2) . u3 / |u1 x u2|^2. Throws FrameUndefinedError when |u1 x u2| <= tol.
double torsion_determinant(const Vec3& u1, const Vec3& u2, const Vec3& u3, double tol = 1e-12);

struct DerivativeTriple {
  Vec3 d1;
  Vec3 d2;
  Vec3 d3;
};

/// First three J-derivatives of u: analytic when `use_jets` and jets exist, nested numeric otherwise.
DerivativeTriple derivative_triple(const FrameCurve& curve, double t, bool use_jets, const FrameOptions& options = {});

struct FrenetResiduals {
  double r_t = 0.0;
  double r_n = 0.0;
  double r_b = 0.0;

  double max() const { return std::max({r_t, r_n, r_b}); }
};

/// Serret-Frenet residuals with all derivatives against arc length (J-derivative over |D u|).
FrenetResiduals frenet_residuals(const FrameCurve& curve, double t, const FrameOptions& options = {});

/// [[0, k, 0], [-k, 0, tau], [0, -tau, 0]]: d/ds (t, n, b)^T = M (t, n, b)^T.
Mat3 frenet_matrix(double kappa, double tau);

struct BinormalLine {
  Vec3 base;
  Vec3 direction;
  double k_min = -1.0;
  double k_max = 1.0;

  Vec3 point(double k) const { return base + k * direction; }
};

BinormalLine binormal_line(const FrameCurve& curve, double t0, const FrameOptions& options = {});

enum class IndicatrixKind { Tangent, Normal, Binormal };

IndicatrixKind parse_indicatrix_kind(std::string_view name);
std::string_view to_string(IndicatrixKind kind);

struct IndicatrixCurve {
  IndicatrixKind which = IndicatrixKind::Tangent;
  std::vector<double> params;
  std::vector<Vec3> samples;
  std::vector<bool> defined;
};

/// The chosen frame field sampled on `grid`; points where the frame is undefined are flagged.
IndicatrixCurve spherical_indicatrix(const FrameCurve& curve, IndicatrixKind which, const std::vector<double>& grid,
                                     const FrameOptions& options = {});

/// The frame field w(t) = t_F, n_F or b_F, itself a curve on the unit sphere. Taken from the
/// analytic jets when the curve has them, from nested derivatives otherwise.
FrameCurve indicatrix_curve(const FrameCurve& curve, IndicatrixKind which, const FrameOptions& options = {});

/// 1 / curvature of the indicatrix curve at t, via the same frame machinery.
double indicatrix_radius(const FrameCurve& curve, IndicatrixKind which, double t, const FrameOptions& options = {});

}  // namespace fracframe
