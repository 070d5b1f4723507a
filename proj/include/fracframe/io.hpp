#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fracframe/frenet.hpp"
#include "fracframe/ifs_curve.hpp"
#include "fracframe/intrinsic.hpp"
#include "fracframe/measure.hpp"
#include "fracframe/staircase.hpp"

namespace fracframe {

inline constexpr std::string_view kVersion = "0.1.0";

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double v);

struct IfsSpec {
  std::vector<SimilarityMap> maps;
  Vec2 anchor{1.0, 0.0};
};

/// Text form: `maps = [(s, angle_deg), ...]` (may span lines), optional `anchor = (x, y)`,
/// `#` comments. Numbers may be written as fractions like 1/3. Throws ParseError with the line.
IfsSpec parse_ifs_spec_text(std::string_view text);

/// Reads and parses the file, then validates it into a curve (InvalidIfsError on failure).
IFSCurve parse_ifs_spec(const std::filesystem::path& path);

std::string polyline_csv(const std::vector<Vec3>& points, std::size_t dim);
std::string staircase_csv(const StaircaseFunction& staircase);
std::string frame_csv(const std::vector<FrenetFrame>& frames);
std::string indicatrix_csv(const IndicatrixCurve& curve, const std::vector<double>& radii);
std::string reconstruction_csv(const std::vector<IntrinsicSample>& samples);

/// Single polyline of the (x, y) projection in a 1000 x 1000 viewBox with a 5% margin.
std::string polyline_svg(const std::vector<Vec3>& points);

nlohmann::json to_json(const MassEstimate& estimate);
nlohmann::json to_json(const DimensionEstimate& estimate);
nlohmann::json to_json(const StaircaseFunction& staircase);
nlohmann::json to_json(const FrenetFrame& frame);
nlohmann::json to_json(const Vec3& v, std::size_t dim = 3);

/// Pretty-printed with a trailing newline; non-finite numbers become null.
std::string dump_json(const nlohmann::json& j);

}  // namespace fracframe
