#include "fracframe/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracframe/errors.hpp"

namespace fracframe {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------------------------
// IFS spec parsing
// ---------------------------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Ident, Number, Punct, End } kind;
  std::string text;
  int line;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Token::Ident, std::string(text.substr(i, j - i)), line});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
      std::size_t j = i + 1;
      while (j < text.size()) {
        const char d = text[j];
        const bool exp_sign = (d == '-' || d == '+') && (text[j - 1] == 'e' || text[j - 1] == 'E');
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == 'e' || d == 'E' || exp_sign) {
          ++j;
        } else {
          break;
        }
      }
      out.push_back({Token::Number, std::string(text.substr(i, j - i)), line});
      i = j;
    } else if (std::string_view("()[],=/").find(c) != std::string_view::npos) {
      out.push_back({Token::Punct, std::string(1, c), line});
      ++i;
    } else {
      throw ParseError(line, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::End, "", line});
  return out;
}

class SpecParser {
 public:
  explicit SpecParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  IfsSpec parse() {
    IfsSpec spec;
    bool have_maps = false;
    bool have_anchor = false;
    while (peek().kind != Token::End) {
      const Token key = next();
      if (key.kind != Token::Ident) throw ParseError(key.line, "expected a key, found '" + key.text + "'");
      expect("=");
      if (key.text == "maps") {
        if (have_maps) throw ParseError(key.line, "duplicate key 'maps'");
        spec.maps = parse_maps();
        have_maps = true;
      } else if (key.text == "anchor") {
        if (have_anchor) throw ParseError(key.line, "duplicate key 'anchor'");
        const auto [x, y] = parse_pair();
        spec.anchor = Vec2(x, y);
        have_anchor = true;
      } else {
        throw ParseError(key.line, "unknown key '" + key.text + "'");
      }
    }
    if (!have_maps) throw ParseError(1, "missing 'maps' entry");
    return spec;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token next() {
    Token t = tokens_[pos_];
    if (t.kind != Token::End) ++pos_;
    return t;
  }
  void expect(std::string_view p) {
    const Token t = next();
    if (t.kind != Token::Punct || t.text != p) {
      throw ParseError(t.line, "expected '" + std::string(p) + "', found " + describe(t));
    }
  }
  static std::string describe(const Token& t) { return t.kind == Token::End ? "end of file" : "'" + t.text + "'"; }

  double parse_number() {
    const Token t = next();
    if (t.kind != Token::Number) throw ParseError(t.line, "expected a number, found " + describe(t));
    double v = to_double(t);
    if (peek().kind == Token::Punct && peek().text == "/") {
      next();
      const Token d = next();
      if (d.kind != Token::Number) throw ParseError(d.line, "expected a denominator, found " + describe(d));
      const double den = to_double(d);
      if (den == 0.0) throw ParseError(d.line, "division by zero");
      v /= den;
    }
    return v;
  }
  static double to_double(const Token& t) {
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (*first == '+') ++first;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) throw ParseError(t.line, "malformed number '" + t.text + "'");
    return v;
  }
  std::pair<double, double> parse_pair() {
    expect("(");
    const double a = parse_number();
    expect(",");
    const double b = parse_number();
    expect(")");
    return {a, b};
  }
  std::vector<SimilarityMap> parse_maps() {
    expect("[");
    std::vector<SimilarityMap> maps;
    while (!(peek().kind == Token::Punct && peek().text == "]")) {
      const auto [s, deg] = parse_pair();
      maps.push_back({s, deg * std::numbers::pi / 180.0});
      if (peek().kind == Token::Punct && peek().text == ",") {
        next();
      } else {
        break;
      }
    }
    expect("]");
    return maps;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

IfsSpec parse_ifs_spec_text(std::string_view text) { return SpecParser(tokenize(text)).parse(); }

IFSCurve parse_ifs_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read IFS spec '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  IfsSpec spec = parse_ifs_spec_text(buf.str());
  return IFSCurve(std::move(spec.maps), spec.anchor);
}

// ---------------------------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------------------------

namespace {

void put_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string polyline_csv(const std::vector<Vec3>& points, std::size_t dim) {
  std::string out = dim == 3 ? "x,y,z\n" : "x,y\n";
  for (const Vec3& p : points) {
    if (dim == 3) {
      put_row(out, {p.x(), p.y(), p.z()});
    } else {
      put_row(out, {p.x(), p.y()});
    }
  }
  return out;
}

std::string staircase_csv(const StaircaseFunction& staircase) {
  std::string out = "# alpha=" + format_number(staircase.alpha()) + " p0=" + format_number(staircase.origin()) +
                    " level=" + std::to_string(staircase.level()) + "\n";
  out += "t,S\n";
  const auto& knots = staircase.knots();
  const auto values = staircase.values();
  for (std::size_t i = 0; i < knots.size(); ++i) put_row(out, {knots[i], values[i]});
  return out;
}

std::string frame_csv(const std::vector<FrenetFrame>& frames) {
  std::string out = "t,S,tx,ty,tz,nx,ny,nz,bx,by,bz,kappa,tau\n";
  for (const auto& f : frames) {
    put_row(out, {f.param, f.s_value, f.t_vec.x(), f.t_vec.y(), f.t_vec.z(), f.n_vec.x(), f.n_vec.y(), f.n_vec.z(),
                  f.b_vec.x(), f.b_vec.y(), f.b_vec.z(), f.kappa, f.tau});
  }
  return out;
}

std::string indicatrix_csv(const IndicatrixCurve& curve, const std::vector<double>& radii) {
  std::string out = "t,x,y,z,defined,radius\n";
  for (std::size_t i = 0; i < curve.params.size(); ++i) {
    const Vec3& p = curve.samples[i];
    const double r = i < radii.size() ? radii[i] : std::numeric_limits<double>::quiet_NaN();
    put_row(out, {curve.params[i], p.x(), p.y(), p.z(), curve.defined[i] ? 1.0 : 0.0, r});
  }
  return out;
}

std::string reconstruction_csv(const std::vector<IntrinsicSample>& samples) {
  std::string out = "J,x,y,z,tx,ty,tz,nx,ny,nz,bx,by,bz\n";
  for (const auto& s : samples) {
    const FrameState& f = s.state;
    put_row(out, {s.j, f.position.x(), f.position.y(), f.position.z(), f.t_vec.x(), f.t_vec.y(), f.t_vec.z(),
                  f.n_vec.x(), f.n_vec.y(), f.n_vec.z(), f.b_vec.x(), f.b_vec.y(), f.b_vec.z()});
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------------------------

std::string polyline_svg(const std::vector<Vec3>& points) {
  constexpr double size = 1000.0;
  constexpr double margin = 0.05 * size;
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = xmin;
  double xmax = -xmin;
  double ymax = -xmin;
  for (const Vec3& p : points) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double scale = span > 0.0 ? (size - 2.0 * margin) / span : 1.0;
  // Centre the box inside the drawable square.
  const double ox = margin + 0.5 * ((size - 2.0 * margin) - scale * (xmax - xmin));
  const double oy = margin + 0.5 * ((size - 2.0 * margin) - scale * (ymax - ymin));

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!-- fracframe " + std::string(kVersion) + " -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n";
  out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  char buf[64];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = ox + scale * (points[i].x() - xmin);
    const double y = size - (oy + scale * (points[i].y() - ymin));
    std::snprintf(buf, sizeof buf, "%s%.4f,%.4f", i == 0 ? "" : " ", x, y);
    out += buf;
  }
  out += "\"/>\n</svg>\n";
  return out;
}

// ---------------------------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------------------------

namespace {

std::string_view trend_name(MassTrend t) {
  switch (t) {
    case MassTrend::Bounded:
      return "bounded";
    case MassTrend::Growing:
      return "growing";
    case MassTrend::Decaying:
      return "decaying";
  }
  return "bounded";
}

}  // namespace

nlohmann::json to_json(const MassEstimate& e) {
  nlohmann::json j;
  j["alpha"] = e.alpha;
  j["levels"] = e.levels;
  j["extrapolated"] = e.extrapolated;
  j["converged"] = e.converged;
  j["residual"] = e.residual;
  j["trend"] = trend_name(e.trend);
  nlohmann::json values = nlohmann::json::array();
  for (const auto& [delta, v] : e.coarse_values) values.push_back({{"delta", delta}, {"value", v}});
  j["coarse_values"] = std::move(values);
  return j;
}

nlohmann::json to_json(const DimensionEstimate& e) {
  nlohmann::json j;
  j["alpha_hat"] = e.alpha_hat;
  j["confidence"] = e.confidence;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& [a, s] : e.slope_trace) trace.push_back({{"alpha", a}, {"slope", s}});
  j["slope_trace"] = std::move(trace);
  return j;
}

nlohmann::json to_json(const StaircaseFunction& s) {
  nlohmann::json j;
  j["alpha"] = s.alpha();
  j["origin"] = s.origin();
  j["level"] = s.level();
  j["branching"] = s.branching();
  j["knots"] = s.knots();
  j["values"] = s.values();
  return j;
}

nlohmann::json to_json(const Vec3& v, std::size_t dim) {
  nlohmann::json a = nlohmann::json::array();
  for (std::size_t i = 0; i < dim; ++i) a.push_back(v(static_cast<Eigen::Index>(i)));
  return a;
}

nlohmann::json to_json(const FrenetFrame& f) {
  nlohmann::json j;
  j["t"] = f.param;
  j["S"] = f.s_value;
  j["tangent"] = to_json(f.t_vec);
  j["normal"] = to_json(f.n_vec);
  j["binormal"] = to_json(f.b_vec);
  j["curvature_vector"] = to_json(f.k_vec);
  j["kappa"] = f.kappa;
  j["rho"] = f.rho;
  j["tau"] = f.tau;
  j["speed"] = f.speed;
  j["convention"] = to_string(f.convention);
  return j;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace fracframe
