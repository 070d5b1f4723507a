#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fracframe/ifs_curve.hpp"
#include "fracframe/staircase.hpp"

namespace fracframe {

/// Smooth profile g: R -> R^d (d = 2 or 3, stored in the leading components of a Vec3) with
/// analytic derivatives. Planar profiles keep the third component at zero.
struct Profile {
  std::size_t dim = 3;
  std::function<Vec3(double)> value;
  std::function<Vec3(double)> d1;
  std::function<Vec3(double)> d2;
  std::function<Vec3(double)> d3;
  std::string label;

  bool has_jets() const { return d1 && d2 && d3; }
};

struct CurveJets {
  Vec3 d1;
  Vec3 d2;
  Vec3 d3;
};

/// u(t) = g(S(t)). Parameter domain and branching are those of the staircase.
class StaircaseComposedCurve final : public ParametricCurve {
 public:
  StaircaseComposedCurve(Profile profile, std::shared_ptr<const StaircaseFunction> staircase);

  std::size_t dimension() const override { return profile_.dim; }
  VecX at(double t, int depth) const override;
  int branching() const override { return staircase_->branching(); }
  Interval domain() const override { return staircase_->domain(); }

  Vec3 position(double t) const { return profile_.value((*staircase_)(t)); }

  /// g', g'', g''' at S(t): the derivatives of u against the staircase.
  CurveJets jets(double t) const;

  const Profile& profile() const { return profile_; }
  const StaircaseFunction& staircase() const { return *staircase_; }
  std::shared_ptr<const StaircaseFunction> staircase_handle() const { return staircase_; }
  const std::string& label() const { return profile_.label; }

 private:
  Profile profile_;
  std::shared_ptr<const StaircaseFunction> staircase_;
};

Profile helix_profile(double a, double b);
Profile snowflake_profile(double a);
Profile cubic_profile();
/// Unit-speed logarithmic spiral g(s) = (j/sqrt2)(cos ln j, sin ln j), j = offset + s; curvature 1/j.
Profile logspiral_profile(double offset);

struct PresetParams {
  double a = 1.0;
  double b = 1.0;
  double offset = 1.0;  // logspiral: staircase value 0 maps to this J
  Vec2 anchor{1.0, 0.0};
  std::shared_ptr<const StaircaseFunction> staircase;
};

using Preset = std::variant<IFSCurve, StaircaseComposedCurve>;

/// Named example curves: koch, helix, snowflake, cubic, logspiral.
/// Throws DomainError for unknown names, a = 0 or b = 0 on the helix, a <= 0 on the snowflake,
/// or a missing staircase for the composed presets.
Preset make_preset(std::string_view name, const PresetParams& params);

const std::vector<std::string>& preset_names();

}  // namespace fracframe
