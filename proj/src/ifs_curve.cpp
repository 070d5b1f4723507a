#include "fracframe/ifs_curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracframe/errors.hpp"

namespace fracframe {

namespace {

// m*t values this close to an integer are treated as lying on a joint, so m-adic
// parameters survive the floating-point multiply unchanged.
constexpr double kJointSnap = 1e-12;

std::uint64_t checked_power(std::uint64_t base, int exponent, std::uint64_t cap) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (result > cap / base) return cap + 1;
    result *= base;
  }
  return result;
}

}  // namespace

Convention parse_convention(std::string_view name) {
  if (name == "stieltjes") return Convention::Stieltjes;
  if (name == "paper-t") return Convention::PaperT;
  throw DomainError("unknown convention '" + std::string(name) + "' (expected stieltjes|paper-t)");
}

std::string_view to_string(Convention c) {
  return c == Convention::Stieltjes ? "stieltjes" : "paper-t";
}

FunctionCurve::FunctionCurve(std::size_t dim, Fn fn, Interval domain, int branching)
    : dim_(dim), fn_(std::move(fn)), domain_(domain), branching_(branching) {}

VecX FunctionCurve::at(double t, int /*depth*/) const {
  if (!domain_.contains(t)) throw DomainError("parameter outside curve domain");
  return fn_(t);
}

FunctionCurve FunctionCurve::segment(const VecX& start, const VecX& end) {
  return FunctionCurve(static_cast<std::size_t>(start.size()),
                       [start, end](double t) -> VecX { return start + t * (end - start); });
}

Mat2 SimilarityMap::matrix() const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2 m;
  m << c, -s, s, c;
  return scale * m;
}

std::string ValidationReport::message() const {
  std::ostringstream os;
  if (valid) {
    os << "valid (" << map_count << " maps, closure deviation " << deviation << ")";
    return os.str();
  }
  for (std::size_t i = 0; i < scale_ok.size(); ++i) {
    if (!scale_ok[i]) {
      os << "map " << i << ": scale must lie in (0,1)";
      return os.str();
    }
  }
  if (map_count < 2) {
    os << "need at least 2 maps, got " << map_count;
    return os.str();
  }
  os << "closure violated: sum of maps deviates from identity by " << deviation;
  return os.str();
}

ValidationReport validate_ifs(std::span<const SimilarityMap> maps) {
  ValidationReport report;
  report.map_count = maps.size();
  Mat2 sum = Mat2::Zero();
  bool scales = true;
  for (const auto& q : maps) {
    const bool ok = std::isfinite(q.scale) && std::isfinite(q.angle) && q.scale > 0.0 && q.scale < 1.0;
    report.scale_ok.push_back(ok);
    scales = scales && ok;
    sum += q.matrix();
  }
  report.deviation = (sum - Mat2::Identity()).cwiseAbs().maxCoeff();
  report.valid = scales && maps.size() >= 2 && report.deviation <= kClosureTolerance;
  return report;
}

IFSCurve::IFSCurve(std::vector<SimilarityMap> maps, Vec2 anchor)
    : maps_(std::move(maps)), anchor_(anchor) {
  const ValidationReport report = validate_ifs(maps_);
  if (!report.valid) throw InvalidIfsError(report.message());

  joints_.reserve(maps_.size() + 1);
  joints_.push_back(Vec2::Zero());
  for (const auto& q : maps_) {
    matrices_.push_back(q.matrix());
    max_scale_ = std::max(max_scale_, q.scale);
    joints_.push_back(joints_.back() + matrices_.back() * anchor_);
  }
  // The last joint equals r0 by closure; pin it so u(1) = r0 bit-exactly.
  joints_.back() = anchor_;

  increment_bound_ = 0.0;
  for (const auto& p : joints_) increment_bound_ = std::max(increment_bound_, p.norm());
}

Vec2 IFSCurve::eval_point(double t, int depth) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("eval_point: t must lie in [0,1]");
  if (depth < 0) throw DomainError("eval_point: depth must be nonnegative");
  if (t == 1.0) return anchor_;

  const int m = static_cast<int>(maps_.size());
  Vec2 offset = Vec2::Zero();
  Mat2 linear = Mat2::Identity();
  double tau = t;
  for (int level = 0; level < depth; ++level) {
    if (tau == 0.0) break;
    const double x = m * tau;
    double whole = std::floor(x);
    if (x - whole > 1.0 - kJointSnap) whole += 1.0;
    const int j = static_cast<int>(whole);
    if (j >= m) {
      // tau rounded onto the right endpoint of the current copy.
      return offset + linear * anchor_;
    }
    offset += linear * joints_[j];
    linear = linear * matrices_[j];
    tau = x - whole;
    if (std::abs(tau) < kJointSnap) tau = 0.0;
  }
  // Remaining tail is approximated by the fixed point u(0) = 0 of the copy.
  return offset;
}

VecX IFSCurve::at(double t, int depth) const { return eval_point(t, depth); }

Vec2 IFSCurve::eval_adic(std::uint64_t index, int level) const {
  const auto m = static_cast<std::uint64_t>(maps_.size());
  const std::uint64_t total = checked_power(m, level, std::uint64_t{1} << 62);
  if (index > total) throw DomainError("eval_adic: index exceeds m^level");
  if (index == total) return anchor_;

  // Most significant base-m digit selects the first-generation copy.
  Vec2 offset = Vec2::Zero();
  Mat2 linear = Mat2::Identity();
  std::uint64_t place = total / m;
  std::uint64_t rest = index;
  while (place > 0 && rest > 0) {
    const auto digit = static_cast<std::size_t>(rest / place);
    rest %= place;
    offset += linear * joints_[digit];
    linear = linear * matrices_[digit];
    place /= m;
  }
  return offset;
}

Polyline IFSCurve::sample_polyline(int level, std::size_t point_budget) const {
  if (level < 0) throw DomainError("sample_polyline: level must be nonnegative");
  const auto m = static_cast<std::uint64_t>(maps_.size());
  const std::uint64_t count = checked_power(m, level, point_budget) + 1;
  if (count > point_budget) {
    throw ResourceError("sample_polyline: " + std::to_string(m) + "^" + std::to_string(level) +
                        "+1 points exceed the point budget of " + std::to_string(point_budget));
  }

  // Level k is the union of the m images of level k-1, joined end to end.
  std::vector<Vec2> previous{Vec2::Zero(), anchor_};
  for (int k = 1; k <= level; ++k) {
    std::vector<Vec2> next;
    next.reserve((previous.size() - 1) * m + 1);
    next.push_back(Vec2::Zero());
    for (std::size_t i = 0; i < maps_.size(); ++i) {
      for (std::size_t p = 1; p < previous.size(); ++p) {
        next.push_back(joints_[i] + matrices_[i] * previous[p]);
      }
      next.back() = joints_[i + 1];
    }
    previous = std::move(next);
  }
  return Polyline{std::move(previous), level};
}

double IFSCurve::truncation_error_bound(int depth) const {
  return std::pow(max_scale_, depth) * increment_bound_ / (1.0 - max_scale_);
}

double IFSCurve::similarity_dimension() const {
  // sum s_i^alpha is strictly decreasing in alpha; it exceeds 1 at 0 (m >= 2 maps).
  auto moran = [this](double alpha) {
    double sum = 0.0;
    for (const auto& q : maps_) sum += std::pow(q.scale, alpha);
    return sum - 1.0;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (moran(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (moran(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

IFSCurve koch_curve(Vec2 anchor) {
  constexpr double third = 1.0 / 3.0;
  constexpr double sixty = std::numbers::pi / 3.0;
  return IFSCurve({{third, 0.0}, {third, sixty}, {third, -sixty}, {third, 0.0}}, anchor);
}

}  // namespace fracframe
