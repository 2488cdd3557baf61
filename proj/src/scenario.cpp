#include "wingcrack/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace wingcrack {

ScenarioError::ScenarioError(const std::string& path, int line, const std::string& what)
    : Error(path + (line > 0 ? " (line " + std::to_string(line) + ")" : "") + ": " + what), path_(path), line_(line) {}

namespace {

using LineMap = std::map<std::string, int>;

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

class Reader {
 public:
  Reader(YAML::Node node, std::string path, ParseMode mode, LineMap& lines)
      : node_(std::move(node)), path_(std::move(path)), mode_(mode), lines_(lines) {
    if (!node_.IsMap()) fail(node_, path_, "expected a mapping");
    lines_[path_] = line_of(node_);
  }

  [[noreturn]] static void fail(const YAML::Node& n, const std::string& path, const std::string& what) {
    throw ScenarioError(path, line_of(n), what);
  }

  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node child(const std::string& key) {
    used_.insert(key);
    YAML::Node c = node_[key];
    if (c) lines_[sub(key)] = line_of(c);
    return c;
  }

  void number(const std::string& key, double& out) {
    if (YAML::Node c = child(key)) out = as_number(c, sub(key));
  }

  void integer(const std::string& key, int& out) {
    if (YAML::Node c = child(key)) {
      const double v = as_number(c, sub(key));
      if (v != std::floor(v) || std::abs(v) > 2e9) fail(c, sub(key), "expected an integer");
      out = static_cast<int>(v);
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (YAML::Node c = child(key)) {
      try {
        out = c.as<bool>();
      } catch (const YAML::Exception&) {
        fail(c, sub(key), "expected true or false");
      }
    }
  }

  void text(const std::string& key, std::string& out) {
    if (YAML::Node c = child(key)) {
      if (!c.IsScalar()) fail(c, sub(key), "expected a string");
      out = c.Scalar();
    }
  }

  static double as_number(const YAML::Node& c, const std::string& path) {
    if (!c.IsScalar()) fail(c, path, "expected a number");
    try {
      return c.as<double>();
    } catch (const YAML::Exception&) {
      fail(c, path, "expected a number");
    }
  }

  static Point as_point(const YAML::Node& c, const std::string& path) {
    if (!c.IsSequence() || c.size() != 2) fail(c, path, "expected a point [x, y]");
    return {as_number(c[0], path + "[0]"), as_number(c[1], path + "[1]")};
  }

  static std::vector<Point> as_points(const YAML::Node& c, const std::string& path) {
    if (!c.IsSequence()) fail(c, path, "expected a list of points");
    std::vector<Point> out;
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(as_point(c[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  static std::vector<std::string> as_strings(const YAML::Node& c, const std::string& path) {
    if (!c.IsSequence()) fail(c, path, "expected a list of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].IsScalar()) fail(c[i], path + "[" + std::to_string(i) + "]", "expected a string");
      out.push_back(c[i].Scalar());
    }
    return out;
  }

  void finish() {
    for (const auto& kv : node_) {
      const std::string key = kv.first.Scalar();
      if (used_.count(key)) continue;
      if (mode_ == ParseMode::Strict) fail(kv.first, sub(key), "unknown key");
      std::cerr << "warning: " << sub(key) << " (line " << line_of(kv.first) << "): unknown key ignored\n";
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  ParseMode mode_;
  LineMap& lines_;
  std::set<std::string> used_;
};

std::optional<double> optional_component(const YAML::Node& c, const std::string& path) {
  if (c.IsNull() || (c.IsScalar() && (c.Scalar() == "free" || c.Scalar() == "~"))) return std::nullopt;
  return Reader::as_number(c, path);
}

[[noreturn]] void invalid(const LineMap& lines, const std::string& path, const std::string& what) {
  auto it = lines.find(path);
  throw ScenarioError(path, it == lines.end() ? 0 : it->second, what);
}

void validate_impl(const Scenario& s, const LineMap& lines) {
  auto require = [&](bool ok, const std::string& path, const std::string& what) {
    if (!ok) invalid(lines, path, what);
  };
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };

  const Material& m = s.material;
  require(finite_pos(m.youngs_E), "material.youngs_E", "must be positive");
  require(std::isfinite(m.poisson_nu) && m.poisson_nu > 0.0 && m.poisson_nu < 0.5, "material.poisson_nu",
          "must lie in (0, 0.5)");
  require(finite_pos(m.K_Ic), "material.K_Ic", "must be positive");
  require(is_finite(s.body_force), "material.body_force", "must be finite");

  const Domain& d = s.geometry.domain;
  require(d.polygon.size() >= 3, "domain.polygon", "needs at least 3 vertices");
  require(d.edge_labels.size() == d.polygon.size(), "domain.edge_labels", "needs one label per polygon edge");
  require(d.vertex_labels.size() == d.polygon.size(), "domain.vertex_labels", "needs one label per polygon vertex");
  std::set<std::string> names;
  for (std::size_t i = 0; i < s.geometry.fractures.size(); ++i) {
    const FracturePolyline& f = s.geometry.fractures[i];
    const std::string p = "fractures[" + std::to_string(i) + "]";
    require(f.vertices.size() >= 2, p + ".vertices", "needs at least 2 vertices");
    require(finite_nonneg(f.friction_mu), p + ".friction_mu", "must be non-negative");
    require(finite_nonneg(f.cohesion_c), p + ".cohesion_c", "must be non-negative");
    require(!f.name.empty() && names.insert(f.name).second, p + ".name", "must be unique and non-empty");
    for (char c : f.name)
      require(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-', p + ".name",
              "may only contain letters, digits, '_' and '-'");
  }
  try {
    validate_geometry(s.geometry);
  } catch (const GeometryError& e) {
    invalid(lines, "fractures", e.what());
  }

  std::set<std::string> edge_labels(d.edge_labels.begin(), d.edge_labels.end());
  std::set<std::string> vertex_labels(d.vertex_labels.begin(), d.vertex_labels.end());
  for (std::size_t i = 0; i < s.boundary_conditions.size(); ++i) {
    const BoundaryCondition& bc = s.boundary_conditions[i];
    const std::string p = "boundary_conditions[" + std::to_string(i) + "]";
    const bool on_edge = edge_labels.count(bc.label) > 0, on_vertex = vertex_labels.count(bc.label) > 0;
    require(on_edge || on_vertex, p + ".label", "'" + bc.label + "' names no domain edge or vertex");
    require(bc.kind == BcKind::Displacement || on_edge, p + ".kind", "traction needs an edge label");
    require(bc.x || bc.y, p + ".value", "needs at least one component");
    require((!bc.x || std::isfinite(*bc.x)) && (!bc.y || std::isfinite(*bc.y)), p + ".value", "must be finite");
  }

  require(!s.load_steps.empty(), "solver.load_steps", "needs at least one step");
  for (std::size_t i = 0; i < s.load_steps.size(); ++i) {
    require(finite_nonneg(s.load_steps[i]), "solver.load_steps", "fractions must be non-negative");
    require(i == 0 || s.load_steps[i] >= s.load_steps[i - 1], "solver.load_steps", "fractions must be non-decreasing");
  }
  require(finite_pos(s.solver.tolerance), "solver.tolerance", "must be positive");
  require(s.solver.max_iterative_steps > 0, "solver.max_iterative_steps", "must be positive");
  const ActiveSetConfig& c = s.contact;
  require(finite_nonneg(c.c_n), "solver.contact.c_n", "must be non-negative (0 selects E / h_tip)");
  require(finite_nonneg(c.c_t), "solver.contact.c_t", "must be non-negative (0 selects E / h_tip)");
  require(c.max_iterations > 0, "solver.contact.max_iterations", "must be positive");
  require(finite_pos(c.tol_g), "solver.contact.tol_g", "must be positive");
  require(finite_pos(c.tol_lambda), "solver.contact.tol_lambda", "must be positive");
  require(finite_pos(c.tol_c), "solver.contact.tol_c", "must be positive");

  require(finite_pos(s.growth.da_max), "growth.da_max", "must be positive");
  require(finite_nonneg(s.growth.exponent_gamma), "growth.exponent_gamma", "must be non-negative");
  require(finite_nonneg(s.growth.snap_factor), "growth.snap_factor", "must be non-negative");
  require(s.growth.direction_iterations >= 0, "growth.direction_iterations", "must be non-negative");
  require(finite_pos(s.growth.direction_tolerance_deg), "growth.direction_tolerance_deg", "must be positive");
  require(s.caps.max_propagation_per_load > 0, "growth.max_steps_per_load", "must be positive");
  require(s.caps.max_total_steps > 0, "growth.max_total_steps", "must be positive");

  const MeshOptions& mo = s.mesh;
  require(finite_pos(mo.size.h_tip), "mesh.h_tip", "must be positive");
  require(std::isfinite(mo.size.h_max) && mo.size.h_max >= mo.size.h_tip, "mesh.h_max", "must be at least h_tip");
  require(finite_nonneg(mo.size.grading), "mesh.grading", "must be non-negative");
  require(mo.rosette_sectors >= 4, "mesh.rosette_sectors", "must be at least 4");
  require(finite_pos(mo.rosette_factor), "mesh.rosette_factor", "must be positive");
  require(std::isfinite(mo.min_angle_deg) && mo.min_angle_deg > 0.0 && mo.min_angle_deg <= 30.0, "mesh.min_angle_deg",
          "must lie in (0, 30]");
  require(std::isfinite(mo.min_size_factor) && mo.min_size_factor > 0.0 && mo.min_size_factor <= 1.0,
          "mesh.min_size_factor", "must lie in (0, 1]");
  require(mo.max_elements > 0, "mesh.max_elements", "must be positive");
  require(mo.smoothing_iterations >= 0, "mesh.smoothing_iterations", "must be non-negative");

  const AdaptivitySettings& a = s.adaptivity;
  require(std::isfinite(a.theta) && a.theta > 0.0 && a.theta <= 1.0, "adaptivity.theta", "must lie in (0, 1]");
  require(finite_pos(a.target_relative_error), "adaptivity.target_relative_error", "must be positive");
  require(a.max_passes >= 0, "adaptivity.max_passes", "must be non-negative");
  require(finite_pos(a.cavity_factor), "adaptivity.cavity_factor", "must be positive");
  require(s.output.vtk_every >= 0, "output.vtk_every", "must be non-negative");
  require(!s.output.directory.empty(), "output.directory", "must not be empty");
}

Scenario parse_root(const YAML::Node& root, ParseMode mode) {
  LineMap lines;
  Scenario s;
  Reader top(root, "", mode, lines);
  top.text("name", s.name);

  YAML::Node dn = top.child("domain");
  if (!dn) Reader::fail(root, "domain", "missing section");
  {
    Reader r(dn, "domain", mode, lines);
    YAML::Node poly = r.child("polygon");
    if (!poly) Reader::fail(dn, "domain.polygon", "missing");
    s.geometry.domain.polygon = Reader::as_points(poly, "domain.polygon");
    if (YAML::Node c = r.child("edge_labels")) s.geometry.domain.edge_labels = Reader::as_strings(c, "domain.edge_labels");
    if (YAML::Node c = r.child("vertex_labels"))
      s.geometry.domain.vertex_labels = Reader::as_strings(c, "domain.vertex_labels");
    r.finish();
    const std::size_t n = s.geometry.domain.polygon.size();
    auto& el = s.geometry.domain.edge_labels;
    auto& vl = s.geometry.domain.vertex_labels;
    if (el.empty())
      for (std::size_t i = 0; i < n; ++i) el.push_back("edge" + std::to_string(i));
    if (vl.empty())
      for (std::size_t i = 0; i < n; ++i) vl.push_back("v" + std::to_string(i));
  }

  if (YAML::Node mn = top.child("material")) {
    Reader r(mn, "material", mode, lines);
    r.number("youngs_E", s.material.youngs_E);
    r.number("poisson_nu", s.material.poisson_nu);
    r.number("K_Ic", s.material.K_Ic);
    std::string plane;
    r.text("mode", plane);
    if (plane == "plane_strain")
      s.material.mode = PlaneMode::PlaneStrain;
    else if (plane == "plane_stress")
      s.material.mode = PlaneMode::PlaneStress;
    else
      Reader::fail(mn["mode"] ? mn["mode"] : mn, "material.mode", "must be plane_strain or plane_stress");
    if (YAML::Node c = r.child("body_force")) s.body_force = Reader::as_point(c, "material.body_force");
    r.finish();
  } else {
    Reader::fail(root, "material", "missing section");
  }

  if (YAML::Node fn = top.child("fractures")) {
    if (!fn.IsSequence()) Reader::fail(fn, "fractures", "expected a list");
    for (std::size_t i = 0; i < fn.size(); ++i) {
      const std::string p = "fractures[" + std::to_string(i) + "]";
      Reader r(fn[i], p, mode, lines);
      FracturePolyline f;
      f.name = "f" + std::to_string(i);
      r.text("name", f.name);
      YAML::Node v = r.child("vertices");
      if (!v) Reader::fail(fn[i], p + ".vertices", "missing");
      f.vertices = Reader::as_points(v, p + ".vertices");
      r.number("friction_mu", f.friction_mu);
      r.number("cohesion_c", f.cohesion_c);
      r.boolean("tip_a_active", f.tip_a_active);
      r.boolean("tip_b_active", f.tip_b_active);
      r.finish();
      s.geometry.fractures.push_back(std::move(f));
    }
  }

  if (YAML::Node bn = top.child("boundary_conditions")) {
    if (!bn.IsSequence()) Reader::fail(bn, "boundary_conditions", "expected a list");
    for (std::size_t i = 0; i < bn.size(); ++i) {
      const std::string p = "boundary_conditions[" + std::to_string(i) + "]";
      Reader r(bn[i], p, mode, lines);
      BoundaryCondition bc;
      r.text("label", bc.label);
      if (bc.label.empty()) Reader::fail(bn[i], p + ".label", "missing");
      std::string kind;
      r.text("kind", kind);
      if (kind == "displacement")
        bc.kind = BcKind::Displacement;
      else if (kind == "traction")
        bc.kind = BcKind::Traction;
      else
        Reader::fail(bn[i]["kind"] ? bn[i]["kind"] : bn[i], p + ".kind", "must be displacement or traction");
      YAML::Node v = r.child("value");
      if (!v || !v.IsSequence() || v.size() != 2) Reader::fail(v ? v : bn[i], p + ".value", "expected [x, y] (use ~ for a free component)");
      bc.x = optional_component(v[0], p + ".value[0]");
      bc.y = optional_component(v[1], p + ".value[1]");
      r.finish();
      s.boundary_conditions.push_back(bc);
    }
  }

  if (YAML::Node sn = top.child("solver")) {
    Reader r(sn, "solver", mode, lines);
    r.number("tolerance", s.solver.tolerance);
    r.integer("max_iterative_steps", s.solver.max_iterative_steps);
    if (YAML::Node ls = r.child("load_steps")) {
      s.load_steps.clear();
      if (ls.IsScalar()) {
        const double n = Reader::as_number(ls, "solver.load_steps");
        if (n < 1 || n != std::floor(n) || n > 1e6) Reader::fail(ls, "solver.load_steps", "expected a positive step count or a list");
        for (int k = 1; k <= static_cast<int>(n); ++k) s.load_steps.push_back(static_cast<double>(k) / n);
      } else if (ls.IsSequence()) {
        for (std::size_t i = 0; i < ls.size(); ++i)
          s.load_steps.push_back(Reader::as_number(ls[i], "solver.load_steps[" + std::to_string(i) + "]"));
      } else {
        Reader::fail(ls, "solver.load_steps", "expected a positive step count or a list");
      }
    }
    if (YAML::Node cn = r.child("contact")) {
      Reader c(cn, "solver.contact", mode, lines);
      c.number("c_n", s.contact.c_n);
      c.number("c_t", s.contact.c_t);
      c.integer("max_iterations", s.contact.max_iterations);
      c.number("tol_g", s.contact.tol_g);
      c.number("tol_lambda", s.contact.tol_lambda);
      c.number("tol_c", s.contact.tol_c);
      c.finish();
    }
    r.finish();
  }

  if (YAML::Node gn = top.child("growth")) {
    Reader r(gn, "growth", mode, lines);
    r.number("da_max", s.growth.da_max);
    r.number("exponent_gamma", s.growth.exponent_gamma);
    r.number("snap_factor", s.growth.snap_factor);
    r.integer("direction_iterations", s.growth.direction_iterations);
    r.number("direction_tolerance_deg", s.growth.direction_tolerance_deg);
    r.integer("max_steps_per_load", s.caps.max_propagation_per_load);
    r.integer("max_total_steps", s.caps.max_total_steps);
    r.finish();
  }

  if (YAML::Node mn = top.child("mesh")) {
    Reader r(mn, "mesh", mode, lines);
    r.number("h_tip", s.mesh.size.h_tip);
    r.number("h_max", s.mesh.size.h_max);
    r.number("grading", s.mesh.size.grading);
    r.integer("rosette_sectors", s.mesh.rosette_sectors);
    r.number("rosette_factor", s.mesh.rosette_factor);
    r.number("min_angle_deg", s.mesh.min_angle_deg);
    r.number("min_size_factor", s.mesh.min_size_factor);
    int max_elements = static_cast<int>(s.mesh.max_elements);
    r.integer("max_elements", max_elements);
    if (max_elements <= 0) Reader::fail(mn["max_elements"], "mesh.max_elements", "must be positive");
    s.mesh.max_elements = static_cast<std::size_t>(max_elements);
    r.integer("smoothing_iterations", s.mesh.smoothing_iterations);
    r.finish();
  }

  if (YAML::Node an = top.child("adaptivity")) {
    Reader r(an, "adaptivity", mode, lines);
    r.boolean("enabled", s.adaptivity.enabled);
    r.number("theta", s.adaptivity.theta);
    r.number("target_relative_error", s.adaptivity.target_relative_error);
    r.integer("max_passes", s.adaptivity.max_passes);
    r.number("cavity_factor", s.adaptivity.cavity_factor);
    r.finish();
  }

  if (YAML::Node on = top.child("output")) {
    Reader r(on, "output", mode, lines);
    r.text("directory", s.output.directory);
    r.integer("vtk_every", s.output.vtk_every);
    r.finish();
  }
  top.finish();
  validate_impl(s, lines);
  return s;
}

}  // namespace

void validate_scenario(const Scenario& scenario) { validate_impl(scenario, {}); }

Scenario parse_scenario(const std::string& text, ParseMode mode) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ScenarioError("<document>", e.mark.line + 1, e.msg);
  }
  if (!root || root.IsNull()) throw ScenarioError("<document>", 0, "empty scenario");
  return parse_root(root, mode);
}

Scenario parse_scenario_file(const std::string& path, ParseMode mode) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, 0, "cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), mode);
}

namespace {

void emit_point(YAML::Emitter& out, Point p) { out << YAML::Flow << YAML::BeginSeq << p.x << p.y << YAML::EndSeq; }

void emit_points(YAML::Emitter& out, const std::vector<Point>& pts) {
  out << YAML::BeginSeq;
  for (Point p : pts) emit_point(out, p);
  out << YAML::EndSeq;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << s.name;

  out << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "polygon" << YAML::Value;
  emit_points(out, s.geometry.domain.polygon);
  out << YAML::Key << "edge_labels" << YAML::Value << YAML::Flow << s.geometry.domain.edge_labels;
  out << YAML::Key << "vertex_labels" << YAML::Value << YAML::Flow << s.geometry.domain.vertex_labels;
  out << YAML::EndMap;

  const Material& m = s.material;
  out << YAML::Key << "material" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "youngs_E" << YAML::Value << m.youngs_E;
  out << YAML::Key << "poisson_nu" << YAML::Value << m.poisson_nu;
  out << YAML::Key << "mode" << YAML::Value << (m.mode == PlaneMode::PlaneStrain ? "plane_strain" : "plane_stress");
  out << YAML::Key << "K_Ic" << YAML::Value << m.K_Ic;
  out << YAML::Key << "body_force" << YAML::Value;
  emit_point(out, s.body_force);
  out << YAML::EndMap;

  out << YAML::Key << "fractures" << YAML::Value << YAML::BeginSeq;
  for (const FracturePolyline& f : s.geometry.fractures) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << f.name;
    out << YAML::Key << "vertices" << YAML::Value;
    emit_points(out, f.vertices);
    out << YAML::Key << "friction_mu" << YAML::Value << f.friction_mu;
    out << YAML::Key << "cohesion_c" << YAML::Value << f.cohesion_c;
    out << YAML::Key << "tip_a_active" << YAML::Value << f.tip_a_active;
    out << YAML::Key << "tip_b_active" << YAML::Value << f.tip_b_active;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "boundary_conditions" << YAML::Value << YAML::BeginSeq;
  for (const BoundaryCondition& bc : s.boundary_conditions) {
    out << YAML::BeginMap;
    out << YAML::Key << "label" << YAML::Value << YAML::DoubleQuoted << bc.label;
    out << YAML::Key << "kind" << YAML::Value << (bc.kind == BcKind::Displacement ? "displacement" : "traction");
    out << YAML::Key << "value" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& c : {bc.x, bc.y}) {
      if (c)
        out << *c;
      else
        out << YAML::Null;
    }
    out << YAML::EndSeq << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tolerance" << YAML::Value << s.solver.tolerance;
  out << YAML::Key << "max_iterative_steps" << YAML::Value << s.solver.max_iterative_steps;
  out << YAML::Key << "load_steps" << YAML::Value << YAML::Flow << s.load_steps;
  out << YAML::Key << "contact" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "c_n" << YAML::Value << s.contact.c_n;
  out << YAML::Key << "c_t" << YAML::Value << s.contact.c_t;
  out << YAML::Key << "max_iterations" << YAML::Value << s.contact.max_iterations;
  out << YAML::Key << "tol_g" << YAML::Value << s.contact.tol_g;
  out << YAML::Key << "tol_lambda" << YAML::Value << s.contact.tol_lambda;
  out << YAML::Key << "tol_c" << YAML::Value << s.contact.tol_c;
  out << YAML::EndMap << YAML::EndMap;

  out << YAML::Key << "growth" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "da_max" << YAML::Value << s.growth.da_max;
  out << YAML::Key << "exponent_gamma" << YAML::Value << s.growth.exponent_gamma;
  out << YAML::Key << "snap_factor" << YAML::Value << s.growth.snap_factor;
  out << YAML::Key << "direction_iterations" << YAML::Value << s.growth.direction_iterations;
  out << YAML::Key << "direction_tolerance_deg" << YAML::Value << s.growth.direction_tolerance_deg;
  out << YAML::Key << "max_steps_per_load" << YAML::Value << s.caps.max_propagation_per_load;
  out << YAML::Key << "max_total_steps" << YAML::Value << s.caps.max_total_steps;
  out << YAML::EndMap;

  const MeshOptions& mo = s.mesh;
  out << YAML::Key << "mesh" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "h_tip" << YAML::Value << mo.size.h_tip;
  out << YAML::Key << "h_max" << YAML::Value << mo.size.h_max;
  out << YAML::Key << "grading" << YAML::Value << mo.size.grading;
  out << YAML::Key << "rosette_sectors" << YAML::Value << mo.rosette_sectors;
  out << YAML::Key << "rosette_factor" << YAML::Value << mo.rosette_factor;
  out << YAML::Key << "min_angle_deg" << YAML::Value << mo.min_angle_deg;
  out << YAML::Key << "min_size_factor" << YAML::Value << mo.min_size_factor;
  out << YAML::Key << "max_elements" << YAML::Value << mo.max_elements;
  out << YAML::Key << "smoothing_iterations" << YAML::Value << mo.smoothing_iterations;
  out << YAML::EndMap;

  const AdaptivitySettings& a = s.adaptivity;
  out << YAML::Key << "adaptivity" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << a.enabled;
  out << YAML::Key << "theta" << YAML::Value << a.theta;
  out << YAML::Key << "target_relative_error" << YAML::Value << a.target_relative_error;
  out << YAML::Key << "max_passes" << YAML::Value << a.max_passes;
  out << YAML::Key << "cavity_factor" << YAML::Value << a.cavity_factor;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "directory" << YAML::Value << YAML::DoubleQuoted << s.output.directory;
  out << YAML::Key << "vtk_every" << YAML::Value << s.output.vtk_every;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace wingcrack
