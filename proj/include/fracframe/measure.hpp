#pragma once

#include <utility>
#include <vector>

#include "fracframe/ifs_curve.hpp"

namespace fracframe {

/// Subdivision a = t_0 < t_1 < ... < t_n = b.
class Partition {
 public:
  /// Throws DomainError for fewer than two knots or knots that are not strictly increasing.
  explicit Partition(std::vector<double> knots);

  static Partition uniform(double a, double b, std::size_t cells);

  const std::vector<double>& knots() const { return knots_; }
  std::size_t cells() const { return knots_.size() - 1; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  double mesh() const { return mesh_; }

  /// Copy with one extra knot; `t` must fall strictly inside a cell.
  Partition with_knot(double t) const;

 private:
  std::vector<double> knots_;
  double mesh_ = 0.0;
};

struct ChordSum {
  double value = 0.0;
  double alpha = 1.0;
  double gamma_factor = 1.0;  // Gamma(alpha + 1)
};

/// Evaluation depth used for chord computations on a partition of the given mesh:
/// the m-adic level of the mesh plus `margin`.
int chord_evaluation_depth(const ParametricCurve& curve, double width, double mesh, int margin = 4);

/// sum_i |u(t_{i+1}) - u(t_i)|^alpha / Gamma(alpha + 1).
ChordSum chord_sum(const ParametricCurve& curve, const Partition& partition, double alpha);
ChordSum chord_sum(const ParametricCurve& curve, const Partition& partition, double alpha, int depth);

/// Chord lengths of the uniform partition of [a,b] into `cells` pieces. For an IFS curve on
/// m-adic cells the joints are evaluated exactly.
std::vector<double> uniform_chords(const ParametricCurve& curve, double a, double b, std::size_t cells,
                                   int depth_margin = 4);

/// sum c^alpha / Gamma(alpha+1) over precomputed chord lengths.
double chord_power_sum(const std::vector<double>& chords, double alpha);

enum class MassStrategy { Uniform, Greedy };

struct CoarseMassOptions {
  MassStrategy strategy = MassStrategy::Uniform;
  int depth_margin = 4;
  int max_passes = 50;
  int move_samples = 8;
  double improvement_tol = 1e-12;
};

/// Upper bound on the coarse-grained mass: the infimum of chord sums over partitions with mesh
/// at most delta. Uniform takes the coarsest uniform partition; Greedy then runs knot-removal and
/// single-knot move passes that keep the mesh bound.
double coarse_mass(const ParametricCurve& curve, double a, double b, double alpha, double delta,
                   const CoarseMassOptions& options = {});

enum class MassTrend { Bounded, Growing, Decaying };

struct MassEstimate {
  double alpha = 1.0;
  int levels = 0;
  std::vector<std::pair<double, double>> coarse_values;  // (delta, value), delta decreasing
  double extrapolated = 0.0;
  bool converged = false;
  double residual = 0.0;
  MassTrend trend = MassTrend::Bounded;
};

struct MassOptions {
  CoarseMassOptions coarse;
  double rtol = 1e-6;
};

/// Extrapolates a delta-sorted sequence of coarse masses with value_k = gamma + C rho^k on the
/// last three levels. Shared by mass_function and the staircase builder.
MassEstimate extrapolate_mass(double alpha, std::vector<std::pair<double, double>> coarse_values,
                              double rtol);

/// Coarse masses at delta_k = (b-a) m^{-k}, k = 1..levels, and their extrapolated limit.
MassEstimate mass_function(const ParametricCurve& curve, double a, double b, double alpha, int levels,
                           const MassOptions& options = {});

struct DimensionEstimate {
  double alpha_hat = 0.0;
  std::vector<std::pair<double, double>> slope_trace;  // (trial alpha, log-log slope)
  double confidence = 0.0;                             // half-width of the final bracket
};

struct DimensionOptions {
  double lower = 0.5;
  double bracket_tol = 1e-3;
  int depth_margin = 4;
};

/// Critical order where the fitted slope of log sigma^alpha against log delta changes sign.
DimensionEstimate gamma_dimension(const ParametricCurve& curve, double a, double b, int levels,
                                  const DimensionOptions& options = {});

/// Log-log least squares slope of the uniform chord sums at trial order alpha, delta_k = (b-a) m^-k.
double log_log_slope(const std::vector<std::vector<double>>& chords_per_level,
                     const std::vector<double>& deltas, double alpha);

}  // namespace fracframe
