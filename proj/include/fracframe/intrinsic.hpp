#pragma once

#include <functional>
#include <vector>

#include "fracframe/frenet.hpp"
#include "fracframe/types.hpp"

namespace fracframe {

struct FrameState {
  Vec3 position = Vec3::Zero();
  Vec3 t_vec = Vec3::UnitX();
  Vec3 n_vec = Vec3::UnitY();
  Vec3 b_vec = Vec3::UnitZ();
};

struct IntrinsicSample {
  double j = 0.0;
  FrameState state;
};

struct IntrinsicOptions {
  double step = 1e-3;
  /// Largest orthonormality defect tolerated after a step, before re-orthonormalisation.
  double drift_tol = 1e-6;
};

/// Integrates u' = t, t' = kappa n, n' = -kappa t + tau b, b' = -tau n in J from j0 to j1 with
/// classical RK4 at a fixed step (the last step is shortened to land on j1). The frame is
/// re-orthonormalised after every step. Throws DomainError for a non-orthonormal initial frame
/// or non-finite coefficients, NonConvergenceError when a step drifts past drift_tol.
std::vector<IntrinsicSample> intrinsic_reconstruct(const std::function<double(double)>& kappa,
                                                   const std::function<double(double)>& tau, const FrameState& initial,
                                                   double j0, double j1, const IntrinsicOptions& options = {});

/// Initial state on u = (1/sqrt2) e^psi (cos psi, sin psi) at J = e^psi, the curve solving
/// kappa = 1/J, tau = 0 with tangent angle psi + pi/4.
FrameState spiral_initial_state(double j0);

/// Closed form of that spiral at J.
Vec3 spiral_point(double j);

/// Curve through the samples: cubic Hermite in J using the tangents, against the staircase
/// S(J) = J - j_first, so J-derivatives of the result are derivatives of the samples.
FrameCurve reconstructed_curve(const std::vector<IntrinsicSample>& samples, std::size_t dim);

}  // namespace fracframe
