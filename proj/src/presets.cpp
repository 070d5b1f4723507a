#include "fracframe/presets.hpp"

#include <cmath>
#include <numbers>

#include "fracframe/errors.hpp"

namespace fracframe {

StaircaseComposedCurve::StaircaseComposedCurve(Profile profile, std::shared_ptr<const StaircaseFunction> staircase)
    : profile_(std::move(profile)), staircase_(std::move(staircase)) {
  if (!staircase_) throw DomainError("staircase-composed curve needs a staircase");
  if (!profile_.value) throw DomainError("staircase-composed curve needs a profile");
  if (profile_.dim != 2 && profile_.dim != 3) throw DomainError("profile dimension must be 2 or 3");
}

VecX StaircaseComposedCurve::at(double t, int /*depth*/) const {
  return position(t).head(static_cast<Eigen::Index>(profile_.dim));
}

CurveJets StaircaseComposedCurve::jets(double t) const {
  if (!profile_.has_jets()) throw DomainError("profile '" + profile_.label + "' has no analytic derivatives");
  const double s = (*staircase_)(t);
  return {profile_.d1(s), profile_.d2(s), profile_.d3(s)};
}

Profile helix_profile(double a, double b) {
  if (a == 0.0 || b == 0.0) throw DomainError("helix requires a != 0 and b != 0");
  Profile p;
  p.dim = 3;
  p.label = "helix";
  p.value = [a, b](double s) { return Vec3(a * std::cos(s), a * std::sin(s), b * s); };
  p.d1 = [a, b](double s) { return Vec3(-a * std::sin(s), a * std::cos(s), b); };
  p.d2 = [a](double s) { return Vec3(-a * std::cos(s), -a * std::sin(s), 0.0); };
  p.d3 = [a](double s) { return Vec3(a * std::sin(s), -a * std::cos(s), 0.0); };
  return p;
}

Profile snowflake_profile(double a) {
  if (!(a > 0.0)) throw DomainError("snowflake requires a > 0");
  Profile p;
  p.dim = 2;
  p.label = "snowflake";
  p.value = [a](double s) { return Vec3(a * std::cos(s), a * std::sin(s), 0.0); };
  p.d1 = [a](double s) { return Vec3(-a * std::sin(s), a * std::cos(s), 0.0); };
  p.d2 = [a](double s) { return Vec3(-a * std::cos(s), -a * std::sin(s), 0.0); };
  p.d3 = [a](double s) { return Vec3(a * std::sin(s), -a * std::cos(s), 0.0); };
  return p;
}

Profile cubic_profile() {
  Profile p;
  p.dim = 2;
  p.label = "cubic";
  p.value = [](double s) { return Vec3(s, s * s * s / 3.0, 0.0); };
  p.d1 = [](double s) { return Vec3(1.0, s * s, 0.0); };
  p.d2 = [](double s) { return Vec3(0.0, 2.0 * s, 0.0); };
  p.d3 = [](double) { return Vec3(0.0, 2.0, 0.0); };
  return p;
}

Profile logspiral_profile(double offset) {
  if (!(offset > 0.0)) throw DomainError("logspiral requires a positive offset");
  constexpr double r2 = std::numbers::sqrt2;
  Profile p;
  p.dim = 2;
  p.label = "logspiral";
  p.value = [offset](double s) {
    const double j = offset + s;
    const double l = std::log(j);
    return Vec3(j / r2 * std::cos(l), j / r2 * std::sin(l), 0.0);
  };
  p.d1 = [offset](double s) {
    const double l = std::log(offset + s);
    return Vec3((std::cos(l) - std::sin(l)) / r2, (std::sin(l) + std::cos(l)) / r2, 0.0);
  };
  p.d2 = [offset](double s) {
    const double j = offset + s;
    const double l = std::log(j);
    return Vec3(-(std::sin(l) + std::cos(l)) / (r2 * j), (std::cos(l) - std::sin(l)) / (r2 * j), 0.0);
  };
  p.d3 = [offset](double s) {
    const double j = offset + s;
    const double l = std::log(j);
    return Vec3(r2 * std::sin(l) / (j * j), -r2 * std::cos(l) / (j * j), 0.0);
  };
  return p;
}

namespace {

std::shared_ptr<const StaircaseFunction> require_staircase(std::string_view name, const PresetParams& params) {
  if (!params.staircase) throw DomainError("preset '" + std::string(name) + "' needs a staircase");
  return params.staircase;
}

}  // namespace

Preset make_preset(std::string_view name, const PresetParams& params) {
  if (name == "koch") return koch_curve(params.anchor);
  if (name == "helix") return StaircaseComposedCurve(helix_profile(params.a, params.b), require_staircase(name, params));
  if (name == "snowflake") return StaircaseComposedCurve(snowflake_profile(params.a), require_staircase(name, params));
  if (name == "cubic") return StaircaseComposedCurve(cubic_profile(), require_staircase(name, params));
  if (name == "logspiral") {
    return StaircaseComposedCurve(logspiral_profile(params.offset), require_staircase(name, params));
  }
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"koch", "helix", "snowflake", "cubic", "logspiral"};
  return names;
}

}  // namespace fracframe
