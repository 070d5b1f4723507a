#include "fracframe/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <variant>

#include <CLI11.hpp>

#include "fracframe/calculus.hpp"
#include "fracframe/errors.hpp"
#include "fracframe/frenet.hpp"
#include "fracframe/intrinsic.hpp"
#include "fracframe/io.hpp"
#include "fracframe/measure.hpp"
#include "fracframe/presets.hpp"
#include "fracframe/staircase.hpp"

namespace fracframe::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string command;
  std::optional<std::string> preset;
  std::optional<std::string> spec;
  std::string staircase = "koch";
  std::optional<std::string> staircase_spec;
  std::optional<double> alpha;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> offset;
  std::optional<int> levels;
  std::optional<int> level;
  std::optional<int> depth;
  std::optional<int> grid;
  std::string convention = "stieltjes";
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<std::string> function;
  std::optional<double> t;
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> tol;
  std::optional<double> origin;
  std::optional<std::string> strategy;
  std::optional<std::string> which;
  std::optional<std::string> kappa;
  std::optional<std::string> tau;
  std::optional<double> j0;
  std::optional<double> j1;
  std::optional<double> step;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

json config_of(const Options& o) {
  json j;
  j["command"] = o.command;
  put(j, "preset", o.preset);
  put(j, "spec", o.spec);
  put(j, "staircase_spec", o.staircase_spec);
  put(j, "alpha", o.alpha);
  put(j, "a", o.a);
  put(j, "b", o.b);
  put(j, "offset", o.offset);
  put(j, "levels", o.levels);
  put(j, "level", o.level);
  put(j, "depth", o.depth);
  put(j, "grid", o.grid);
  put(j, "format", o.format);
  put(j, "out", o.out);
  put(j, "function", o.function);
  put(j, "t", o.t);
  put(j, "lo", o.lo);
  put(j, "hi", o.hi);
  put(j, "tol", o.tol);
  put(j, "origin", o.origin);
  put(j, "strategy", o.strategy);
  put(j, "which", o.which);
  put(j, "kappa", o.kappa);
  put(j, "tau", o.tau);
  put(j, "j0", o.j0);
  put(j, "j1", o.j1);
  put(j, "step", o.step);
  j["staircase"] = o.staircase;
  j["convention"] = o.convention;
  return j;
}

std::size_t point_budget() {
  const char* env = std::getenv("FRACTAL_POINT_BUDGET");
  if (!env || !*env) return kDefaultPointBudget;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0 || env[0] == '-') {
    throw UsageError("FRACTAL_POINT_BUDGET must be a positive integer, got '" + std::string(env) + "'");
  }
  return static_cast<std::size_t>(v);
}

// ---------------------------------------------------------------------------------------------
// Sources
// ---------------------------------------------------------------------------------------------

std::shared_ptr<const StaircaseFunction> make_staircase(const Options& o) {
  StaircaseOptions so;
  so.point_budget = point_budget();
  const int level = o.level.value_or(6);
  if (o.staircase_spec) {
    const IFSCurve curve = parse_ifs_spec(*o.staircase_spec);
    return std::make_shared<const StaircaseFunction>(
        build_staircase(curve, o.alpha.value_or(curve.similarity_dimension()), 0.0, level, so));
  }
  if (o.staircase == "identity") return std::make_shared<const StaircaseFunction>(StaircaseFunction::identity());
  const IFSCurve koch = koch_curve();
  return std::make_shared<const StaircaseFunction>(
      build_staircase(koch, o.alpha.value_or(koch.similarity_dimension()), 0.0, level, so));
}

bool is_composed(const std::string& name) { return name != "koch"; }

PresetParams preset_params(const Options& o, bool needs_staircase) {
  PresetParams p;
  p.a = o.a.value_or(1.0);
  p.b = o.b.value_or(1.0);
  p.offset = o.offset.value_or(1.0);
  if (needs_staircase) p.staircase = make_staircase(o);
  return p;
}

/// The curve named by --spec or --preset.
Preset curve_source(const Options& o) {
  if (o.spec && o.preset) throw UsageError("give either --preset or --spec, not both");
  if (o.spec) return parse_ifs_spec(*o.spec);
  const std::string name = o.preset.value_or("koch");
  return make_preset(name, preset_params(o, is_composed(name)));
}

const ParametricCurve& as_curve(const Preset& p) {
  return std::visit([](const auto& c) -> const ParametricCurve& { return c; }, p);
}

StaircaseComposedCurve composed_source(const Options& o) {
  if (o.spec) throw UsageError("--spec describes an IFS curve; this command needs a staircase-composed --preset");
  const std::string name = o.preset.value_or("helix");
  if (!is_composed(name)) throw UsageError("preset '" + name + "' has no smooth profile; use helix, snowflake, cubic or logspiral");
  return std::get<StaircaseComposedCurve>(make_preset(name, preset_params(o, true)));
}

FrameOptions frame_options(const Options& o) {
  FrameOptions fo;
  fo.convention = parse_convention(o.convention);
  return fo;
}

std::vector<double> grid_points(const Interval& dom, int grid) {
  if (grid < 1) throw UsageError("--grid must be at least 1");
  std::vector<double> ts;
  for (int i = 0; i < grid; ++i) ts.push_back(dom.lo + dom.width() * (i + 0.5) / grid);
  return ts;
}

std::vector<Vec3> to_points(const std::vector<Vec2>& pts) {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts) out.emplace_back(p.x(), p.y(), 0.0);
  return out;
}

json points_json(const std::vector<Vec3>& pts, std::size_t dim) {
  json a = json::array();
  for (const Vec3& p : pts) a.push_back(to_json(p, dim));
  return a;
}

// ---------------------------------------------------------------------------------------------
// Commands: each returns the artifact text.
// ---------------------------------------------------------------------------------------------

std::string cmd_curve(const Options& o) {
  const Preset preset = curve_source(o);
  const ParametricCurve& curve = as_curve(preset);
  const std::size_t budget = point_budget();
  std::vector<Vec3> pts;
  if (o.grid) {
    if (*o.grid < 2) throw UsageError("--grid must be at least 2 for a polyline");
    if (static_cast<std::size_t>(*o.grid) > budget) throw ResourceError("grid exceeds the point budget");
    const Interval dom = curve.domain();
    const int depth = o.depth.value_or(12);
    const int cells = *o.grid - 1;
    for (int i = 0; i <= cells; ++i) {
      const double t = (i == cells) ? dom.hi : dom.lo + dom.width() * i / cells;
      const VecX p = curve.at(t, depth);
      pts.emplace_back(p(0), p(1), p.size() > 2 ? p(2) : 0.0);
    }
  } else if (const auto* ifs = std::get_if<IFSCurve>(&preset)) {
    pts = to_points(ifs->sample_polyline(o.level.value_or(5), budget).points);
  } else {
    const auto& sc = std::get<StaircaseComposedCurve>(preset);
    const int level = o.level.value_or(5);
    const auto m = static_cast<std::size_t>(sc.branching());
    std::size_t cells = 1;
    for (int k = 0; k < level; ++k) {
      cells *= m;
      if (cells + 1 > budget) throw ResourceError("level " + std::to_string(level) + " exceeds the point budget");
    }
    const Interval dom = sc.domain();
    for (std::size_t i = 0; i <= cells; ++i) {
      const double t = (i == cells) ? dom.hi : dom.lo + dom.width() * static_cast<double>(i) / static_cast<double>(cells);
      pts.push_back(sc.position(t));
    }
  }
  const std::string fmt = o.format.value_or("csv");
  if (fmt == "svg") return polyline_svg(pts);
  if (fmt == "csv") return polyline_csv(pts, curve.dimension());
  json j;
  j["config"] = config_of(o);
  j["count"] = pts.size();
  j["points"] = points_json(pts, curve.dimension());
  return dump_json(j);
}

std::string cmd_staircase(const Options& o) {
  const Preset preset = curve_source(o);
  const ParametricCurve& curve = as_curve(preset);
  double alpha = 1.0;
  if (o.alpha) {
    alpha = *o.alpha;
  } else if (const auto* ifs = std::get_if<IFSCurve>(&preset)) {
    alpha = ifs->similarity_dimension();
  } else {
    throw UsageError("--alpha is required for presets without a similarity dimension");
  }
  StaircaseOptions so;
  so.point_budget = point_budget();
  if (o.levels) so.refine_levels = *o.levels;
  const StaircaseFunction s = build_staircase(curve, alpha, o.origin.value_or(curve.domain().lo), o.level.value_or(6), so);
  if (o.format.value_or("csv") == "csv") return staircase_csv(s);
  json j = to_json(s);
  j["config"] = config_of(o);
  return dump_json(j);
}

std::pair<double, double> bounds(const Options& o, const Interval& dom) {
  const double lo = o.lo.value_or(dom.lo);
  const double hi = o.hi.value_or(dom.hi);
  if (!(lo < hi)) throw UsageError("--lo must be below --hi");
  return {lo, hi};
}

std::string cmd_mass(const Options& o) {
  const Preset preset = curve_source(o);
  const ParametricCurve& curve = as_curve(preset);
  double alpha = 1.0;
  if (o.alpha) {
    alpha = *o.alpha;
  } else if (const auto* ifs = std::get_if<IFSCurve>(&preset)) {
    alpha = ifs->similarity_dimension();
  } else {
    throw UsageError("--alpha is required for presets without a similarity dimension");
  }
  MassOptions mo;
  const std::string strategy = o.strategy.value_or("uniform");
  mo.coarse.strategy = strategy == "greedy" ? MassStrategy::Greedy : MassStrategy::Uniform;
  const auto [lo, hi] = bounds(o, curve.domain());
  json j = to_json(mass_function(curve, lo, hi, alpha, o.levels.value_or(6), mo));
  j["config"] = config_of(o);
  return dump_json(j);
}

std::string cmd_dimension(const Options& o) {
  const Preset preset = curve_source(o);
  const ParametricCurve& curve = as_curve(preset);
  const auto [lo, hi] = bounds(o, curve.domain());
  json j = to_json(gamma_dimension(curve, lo, hi, o.levels.value_or(7)));
  j["config"] = config_of(o);
  return dump_json(j);
}

std::string cmd_derivative(const Options& o) {
  const auto staircase = make_staircase(o);
  const NamedFunction nf = named_function(o.function.value_or("S2"), staircase);
  const Convention conv = parse_convention(o.convention);
  const double t = o.t.value_or(0.5);
  const double value = falpha_derivative(nf.f, *staircase, t, conv);
  double exact = nf.outer_derivative((*staircase)(t));
  if (conv == Convention::PaperT) exact /= staircase->gamma_factor();
  json j;
  j["config"] = config_of(o);
  j["function"] = nf.name;
  j["t"] = t;
  j["S"] = (*staircase)(t);
  j["value"] = value;
  j["exact"] = exact;
  j["error"] = std::abs(value - exact);
  return dump_json(j);
}

std::string cmd_integrate(const Options& o) {
  const auto staircase = make_staircase(o);
  const NamedFunction nf = named_function(o.function.value_or("S2"), staircase);
  IntegralOptions io;
  io.convention = parse_convention(o.convention);
  const auto [lo, hi] = bounds(o, staircase->domain());
  const IntegralResult r = falpha_integral(nf.f, *staircase, lo, hi, o.tol.value_or(1e-6), io);
  double exact = nf.outer_primitive((*staircase)(hi)) - nf.outer_primitive((*staircase)(lo));
  if (io.convention == Convention::PaperT) exact *= staircase->gamma_factor();
  json j;
  j["config"] = config_of(o);
  j["function"] = nf.name;
  j["lo"] = lo;
  j["hi"] = hi;
  j["value"] = r.value;
  j["upper"] = r.bracket.upper;
  j["lower"] = r.bracket.lower;
  j["cells"] = r.cells;
  j["exact"] = exact;
  j["error"] = std::abs(r.value - exact);
  return dump_json(j);
}

std::string cmd_frame(const Options& o) {
  const StaircaseComposedCurve sc = composed_source(o);
  const FrameCurve fc = frame_curve(sc);
  const FrameOptions fo = frame_options(o);
  std::vector<FrenetFrame> frames;
  for (double t : grid_points(sc.domain(), o.grid.value_or(32))) frames.push_back(frame(fc, t, fo));
  if (o.format.value_or("csv") == "csv") return frame_csv(frames);
  json j;
  j["config"] = config_of(o);
  j["frames"] = json::array();
  for (const auto& f : frames) j["frames"].push_back(to_json(f));
  return dump_json(j);
}

std::string cmd_frenet_check(const Options& o) {
  const StaircaseComposedCurve sc = composed_source(o);
  const FrameCurve fc = frame_curve(sc);
  const FrameOptions fo;
  json points = json::array();
  double worst = 0.0;
  double torsion_gap = 0.0;
  for (double t : grid_points(sc.domain(), o.grid.value_or(50))) {
    const FrenetFrame fr = frame(fc, t, fo);
    const FrenetResiduals r = frenet_residuals(fc, t, fo);
    json p{{"t", t}, {"kappa", fr.kappa}, {"tau", fr.tau}, {"r_t", r.r_t}, {"r_n", r.r_n}, {"r_b", r.r_b}};
    if (fc.dim == 3) {
      const DerivativeTriple d = derivative_triple(fc, t, false, fo);
      const double det = torsion_determinant(d.d1, d.d2, d.d3);
      p["tau_determinant"] = det;
      torsion_gap = std::max(torsion_gap, std::abs(det - fr.tau));
    }
    worst = std::max(worst, r.max());
    points.push_back(std::move(p));
  }
  json j;
  j["config"] = config_of(o);
  j["points"] = std::move(points);
  j["max_residual"] = worst;
  if (fc.dim == 3) j["max_torsion_gap"] = torsion_gap;
  return dump_json(j);
}

std::string cmd_indicatrix(const Options& o) {
  const StaircaseComposedCurve sc = composed_source(o);
  const FrameCurve fc = frame_curve(sc);
  const FrameOptions fo;
  const IndicatrixKind which = parse_indicatrix_kind(o.which.value_or("tangent"));
  const IndicatrixCurve ind = spherical_indicatrix(fc, which, grid_points(sc.domain(), o.grid.value_or(64)), fo);
  std::vector<double> radii;
  for (std::size_t i = 0; i < ind.params.size(); ++i) {
    double r = std::numeric_limits<double>::quiet_NaN();
    if (ind.defined[i]) {
      try {
        r = indicatrix_radius(fc, which, ind.params[i], fo);
      } catch (const FrameUndefinedError&) {
      }
    }
    radii.push_back(r);
  }
  const std::string fmt = o.format.value_or("csv");
  if (fmt == "csv") return indicatrix_csv(ind, radii);
  if (fmt == "svg") {
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i < ind.samples.size(); ++i) {
      if (ind.defined[i]) pts.push_back(ind.samples[i]);
    }
    return polyline_svg(pts);
  }
  json j;
  j["config"] = config_of(o);
  j["which"] = to_string(which);
  j["samples"] = json::array();
  for (std::size_t i = 0; i < ind.params.size(); ++i) {
    j["samples"].push_back(
        {{"t", ind.params[i]}, {"point", to_json(ind.samples[i])}, {"defined", bool(ind.defined[i])}, {"radius", radii[i]}});
  }
  return dump_json(j);
}

/// "1/J" or a number.
std::function<double(double)> coefficient(const std::string& text, const char* flag) {
  if (text == "1/J") return [](double j) { return 1.0 / j; };
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || used == 0) throw UsageError(std::string(flag) + " must be a number or 1/J, got '" + text + "'");
  return [v](double) { return v; };
}

std::string cmd_reconstruct(const Options& o) {
  const bool spiral = o.preset.value_or("") == "logspiral";
  if (o.preset && !spiral) throw UsageError("reconstruct supports --preset logspiral or explicit --kappa/--tau");
  if (!spiral && !o.kappa) throw UsageError("reconstruct needs --kappa (or --preset logspiral)");
  const auto kappa = coefficient(o.kappa.value_or("1/J"), "--kappa");
  const auto tau = coefficient(o.tau.value_or("0"), "--tau");
  const double j0 = o.j0.value_or(spiral ? std::exp(0.2) : 0.0);
  const double j1 = o.j1.value_or(spiral ? std::exp(2.0 * std::numbers::pi) : 1.0);
  IntrinsicOptions io;
  io.step = o.step.value_or(spiral ? 1e-2 : 1e-3);
  const std::size_t steps = static_cast<std::size_t>(std::ceil((j1 - j0) / io.step));
  if (steps + 1 > point_budget()) throw ResourceError("reconstruction exceeds the point budget");
  const FrameState initial = spiral ? spiral_initial_state(j0) : FrameState{};
  const auto samples = intrinsic_reconstruct(kappa, tau, initial, j0, j1, io);

  const std::string fmt = o.format.value_or("csv");
  if (fmt == "csv") return reconstruction_csv(samples);
  std::vector<Vec3> pts;
  for (const auto& s : samples) pts.push_back(s.state.position);
  if (fmt == "svg") return polyline_svg(pts);
  json j;
  j["config"] = config_of(o);
  j["count"] = samples.size();
  j["j"] = json::array();
  for (const auto& s : samples) j["j"].push_back(s.j);
  j["points"] = points_json(pts, 3);
  if (spiral && !o.kappa && !o.tau) {
    double err = 0.0;
    for (const auto& s : samples) err = std::max(err, (s.state.position - spiral_point(s.j)).norm());
    j["closed_form_error"] = err;
  }
  return dump_json(j);
}

// ---------------------------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------------------------

struct Command {
  CLI::App* app;
  std::function<std::string(const Options&)> body;
};

void add_source(CLI::App* c, Options& o) {
  c->add_option("--preset", o.preset, "Named curve")->check(CLI::IsMember(preset_names()));
  c->add_option("--spec", o.spec, "IFS spec file");
  c->add_option("--a", o.a, "Profile parameter a");
  c->add_option("--b", o.b, "Profile parameter b");
  c->add_option("--offset", o.offset, "Logspiral offset");
}

void add_staircase(CLI::App* c, Options& o) {
  c->add_option("--staircase", o.staircase, "Staircase: koch or identity")->check(CLI::IsMember({"koch", "identity"}));
  c->add_option("--staircase-spec", o.staircase_spec, "IFS spec file for the staircase");
  c->add_option("--alpha", o.alpha, "Staircase order (default: similarity dimension)");
  c->add_option("--level", o.level, "Staircase knot level");
}

void add_output(CLI::App* c, Options& o, std::vector<std::string> formats) {
  c->add_option("--format", o.format, "Output format")->check(CLI::IsMember(std::move(formats)));
  c->add_option("--out", o.out, "Output path (default: stdout)");
}

void add_convention(CLI::App* c, Options& o) {
  c->add_option("--convention", o.convention, "stieltjes or paper-t")->check(CLI::IsMember({"stieltjes", "paper-t"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractal curves, F^alpha-calculus and Frenet frames", "fracframe"};
  app.require_subcommand(1);
  Options o;
  std::vector<Command> commands;

  {
    auto* c = app.add_subcommand("curve", "Sample a curve polyline");
    add_source(c, o);
    add_staircase(c, o);
    c->add_option("--depth", o.depth, "Recursion depth for --grid sampling");
    c->add_option("--grid", o.grid, "Uniform parameter samples, endpoints included, instead of a level polyline");
    add_output(c, o, {"csv", "svg", "json"});
    commands.push_back({c, cmd_curve});
  }
  {
    auto* c = app.add_subcommand("staircase", "Tabulate the staircase function");
    add_source(c, o);
    c->add_option("--alpha", o.alpha, "Order (default: similarity dimension)");
    c->add_option("--level", o.level, "Knot level");
    c->add_option("--levels", o.levels, "Refinement levels per knot");
    c->add_option("--origin", o.origin, "Parameter where S vanishes");
    add_output(c, o, {"csv", "json"});
    commands.push_back({c, cmd_staircase});
  }
  {
    auto* c = app.add_subcommand("mass", "Estimate the mass function");
    add_source(c, o);
    c->add_option("--alpha", o.alpha, "Order (default: similarity dimension)");
    c->add_option("--levels", o.levels, "Number of delta levels");
    c->add_option("--lo", o.lo, "Section start");
    c->add_option("--hi", o.hi, "Section end");
    c->add_option("--strategy", o.strategy, "uniform or greedy")->check(CLI::IsMember({"uniform", "greedy"}));
    add_output(c, o, {"json"});
    commands.push_back({c, cmd_mass});
  }
  {
    auto* c = app.add_subcommand("dimension", "Estimate the gamma-dimension");
    add_source(c, o);
    c->add_option("--levels", o.levels, "Number of delta levels");
    c->add_option("--lo", o.lo, "Section start");
    c->add_option("--hi", o.hi, "Section end");
    add_output(c, o, {"json"});
    commands.push_back({c, cmd_dimension});
  }
  {
    auto* c = app.add_subcommand("derivative", "F^alpha-derivative of a named function");
    add_staircase(c, o);
    add_convention(c, o);
    c->add_option("--function", o.function, "Function name")->check(CLI::IsMember(named_function_names()));
    c->add_option("--t", o.t, "Parameter");
    add_output(c, o, {"json"});
    commands.push_back({c, cmd_derivative});
  }
  {
    auto* c = app.add_subcommand("integrate", "F^alpha-integral of a named function");
    add_staircase(c, o);
    add_convention(c, o);
    c->add_option("--function", o.function, "Function name")->check(CLI::IsMember(named_function_names()));
    c->add_option("--lo", o.lo, "Lower parameter");
    c->add_option("--hi", o.hi, "Upper parameter");
    c->add_option("--tol", o.tol, "Bracket tolerance");
    add_output(c, o, {"json"});
    commands.push_back({c, cmd_integrate});
  }
  {
    auto* c = app.add_subcommand("frame", "Frenet frames along a grid");
    add_source(c, o);
    add_staircase(c, o);
    add_convention(c, o);
    c->add_option("--grid", o.grid, "Number of grid points");
    add_output(c, o, {"csv", "json"});
    commands.push_back({c, cmd_frame});
  }
  {
    auto* c = app.add_subcommand("frenet-check", "Serret-Frenet residual report");
    add_source(c, o);
    add_staircase(c, o);
    c->add_option("--grid", o.grid, "Number of grid points");
    add_output(c, o, {"json"});
    commands.push_back({c, cmd_frenet_check});
  }
  {
    auto* c = app.add_subcommand("indicatrix", "Spherical indicatrix of a frame field");
    add_source(c, o);
    add_staircase(c, o);
    c->add_option("--which", o.which, "tangent, normal or binormal")
        ->check(CLI::IsMember({"tangent", "normal", "binormal"}));
    c->add_option("--grid", o.grid, "Number of grid points");
    add_output(c, o, {"csv", "svg", "json"});
    commands.push_back({c, cmd_indicatrix});
  }
  {
    auto* c = app.add_subcommand("reconstruct", "Integrate intrinsic equations");
    c->add_option("--preset", o.preset, "logspiral");
    c->add_option("--kappa", o.kappa, "Curvature: number or 1/J");
    c->add_option("--tau", o.tau, "Torsion: number or 1/J");
    c->add_option("--j0", o.j0, "Start of the J range");
    c->add_option("--j1", o.j1, "End of the J range");
    c->add_option("--step", o.step, "Integration step");
    add_output(c, o, {"csv", "svg", "json"});
    commands.push_back({c, cmd_reconstruct});
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) chosen = &c;
  }
  if (!chosen) {
    err << "error: no subcommand given\n\n" << app.help();
    return 2;
  }
  o.command = chosen->app->get_name();

  try {
    const std::string artifact = chosen->body(o);
    if (o.out) {
      std::ofstream file(*o.out, std::ios::binary);
      if (!file) throw DomainError("cannot write '" + *o.out + "'");
      file << artifact;
      if (!file) throw DomainError("failed writing '" + *o.out + "'");
    } else {
      out << artifact;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->app->help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace fracframe::cli
