#include "fracframe/intrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "fracframe/errors.hpp"

namespace fracframe {

namespace {

struct Deriv {
  Vec3 u, t, n, b;
};

Deriv rhs(const FrameState& s, double k, double w) {
  return {s.t_vec, k * s.n_vec, -k * s.t_vec + w * s.b_vec, -w * s.n_vec};
}

FrameState advance(const FrameState& s, const Deriv& d, double h) {
  return {s.position + h * d.u, s.t_vec + h * d.t, s.n_vec + h * d.n, s.b_vec + h * d.b};
}

double orthonormality_defect(const FrameState& s) {
  const double d = std::max({std::abs(s.t_vec.norm() - 1.0), std::abs(s.n_vec.norm() - 1.0),
                             std::abs(s.b_vec.norm() - 1.0), std::abs(s.t_vec.dot(s.n_vec)),
                             std::abs(s.t_vec.dot(s.b_vec)), std::abs(s.n_vec.dot(s.b_vec))});
  return d;
}

void reorthonormalise(FrameState& s) {
  s.t_vec.normalize();
  s.n_vec = (s.n_vec - s.n_vec.dot(s.t_vec) * s.t_vec).normalized();
  const Vec3 b = s.t_vec.cross(s.n_vec);
  // Keep the handedness of the integrated binormal.
  s.b_vec = b.dot(s.b_vec) >= 0.0 ? b : Vec3(-b);
}

}  // namespace

std::vector<IntrinsicSample> intrinsic_reconstruct(const std::function<double(double)>& kappa,
                                                   const std::function<double(double)>& tau, const FrameState& initial,
                                                   double j0, double j1, const IntrinsicOptions& options) {
  if (!(j1 > j0)) throw DomainError("reconstruction range must satisfy j1 > j0");
  if (!(options.step > 0.0)) throw DomainError("reconstruction step must be positive");
  if (orthonormality_defect(initial) > 1e-9) throw DomainError("initial frame is not orthonormal");

  auto coefficients = [&](double j) {
    const double k = kappa(j);
    const double w = tau(j);
    if (!std::isfinite(k) || !std::isfinite(w)) {
      throw DomainError("curvature or torsion not finite at J=" + std::to_string(j));
    }
    return std::pair{k, w};
  };

  std::vector<IntrinsicSample> out;
  const auto steps = static_cast<std::size_t>(std::ceil((j1 - j0) / options.step - 1e-9));
  out.reserve(steps + 1);
  FrameState s = initial;
  out.push_back({j0, s});
  for (std::size_t i = 0; i < steps; ++i) {
    const double ja = j0 + static_cast<double>(i) * options.step;
    const double jb = (i + 1 == steps) ? j1 : j0 + static_cast<double>(i + 1) * options.step;
    const double h = jb - ja;
    const auto [ka, wa] = coefficients(ja);
    const auto [km, wm] = coefficients(ja + 0.5 * h);
    const auto [kb, wb] = coefficients(jb);
    const Deriv d1 = rhs(s, ka, wa);
    const Deriv d2 = rhs(advance(s, d1, 0.5 * h), km, wm);
    const Deriv d3 = rhs(advance(s, d2, 0.5 * h), km, wm);
    const Deriv d4 = rhs(advance(s, d3, h), kb, wb);
    FrameState next;
    next.position = s.position + h / 6.0 * (d1.u + 2.0 * d2.u + 2.0 * d3.u + d4.u);
    next.t_vec = s.t_vec + h / 6.0 * (d1.t + 2.0 * d2.t + 2.0 * d3.t + d4.t);
    next.n_vec = s.n_vec + h / 6.0 * (d1.n + 2.0 * d2.n + 2.0 * d3.n + d4.n);
    next.b_vec = s.b_vec + h / 6.0 * (d1.b + 2.0 * d2.b + 2.0 * d3.b + d4.b);
    const double defect = orthonormality_defect(next);
    if (defect > options.drift_tol) {
      throw NonConvergenceError("frame drifted by " + std::to_string(defect) + " at J=" + std::to_string(jb) +
                                "; reduce the step");
    }
    reorthonormalise(next);
    s = next;
    out.push_back({jb, s});
  }
  return out;
}

FrameState spiral_initial_state(double j0) {
  if (!(j0 > 0.0)) throw DomainError("spiral needs J > 0");
  const double phi = std::log(j0) + std::numbers::pi / 4.0;
  FrameState s;
  s.position = spiral_point(j0);
  s.t_vec = Vec3(std::cos(phi), std::sin(phi), 0.0);
  s.n_vec = Vec3(-std::sin(phi), std::cos(phi), 0.0);
  s.b_vec = Vec3::UnitZ();
  return s;
}

Vec3 spiral_point(double j) {
  const double psi = std::log(j);
  return Vec3(j * std::cos(psi), j * std::sin(psi), 0.0) / std::numbers::sqrt2;
}

FrameCurve reconstructed_curve(const std::vector<IntrinsicSample>& samples, std::size_t dim) {
  if (samples.size() < 2) throw DomainError("reconstructed curve needs at least two samples");
  std::vector<double> js;
  js.reserve(samples.size());
  for (const auto& s : samples) js.push_back(s.j);
  auto staircase = std::make_shared<const StaircaseFunction>(1.0, js.front(), 0, 2, js, js);
  auto data = std::make_shared<const std::vector<IntrinsicSample>>(samples);

  FrameCurve curve;
  curve.dim = dim;
  curve.staircase = staircase;
  curve.position = [data](double j) -> Vec3 {
    const auto& d = *data;
    if (!(j >= d.front().j && j <= d.back().j)) throw DomainError("reconstructed curve evaluated outside its range");
    auto it = std::upper_bound(d.begin(), d.end(), j, [](double x, const IntrinsicSample& s) { return x < s.j; });
    std::size_t i = static_cast<std::size_t>(it - d.begin());
    i = i == 0 ? 0 : std::min(i - 1, d.size() - 2);
    const auto& a = d[i].state;
    const auto& b = d[i + 1].state;
    const double h = d[i + 1].j - d[i].j;
    const double x = (j - d[i].j) / h;
    const double x2 = x * x;
    const double x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * a.position + (x3 - 2 * x2 + x) * h * a.t_vec + (-2 * x3 + 3 * x2) * b.position +
           (x3 - x2) * h * b.t_vec;
  };
  return curve;
}

}  // namespace fracframe
