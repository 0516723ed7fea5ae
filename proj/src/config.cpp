#include "chb/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace chb {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

[[noreturn]] void fail(const std::string& key, const YAML::Node& node, const std::string& msg) {
  const int line = line_of(node);
  std::ostringstream os;
  os << "config";
  if (line > 0) os << " line " << line;
  os << ": '" << key << "' " << msg;
  throw ConfigError(os.str(), key, line);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail(key, node, "must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, node, "has an invalid value '" + node.Scalar() + "'");
  }
}

Voigt voigt_matrix(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence() || node.size() != 3) fail(key, node, "must be a 3x3 nested list");
  Voigt c;
  for (int i = 0; i < 3; ++i) {
    const YAML::Node row = node[static_cast<std::size_t>(i)];
    if (!row.IsSequence() || row.size() != 3) fail(key, row, "must be a 3x3 nested list");
    for (int j = 0; j < 3; ++j) c(i, j) = scalar<double>(row[static_cast<std::size_t>(j)], key);
  }
  return c;
}

void check_positive(double v, const std::string& key, int line = 0) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ConfigError("config: '" + key + "' must be positive and finite", key, line);
  }
}

void check_finite(double v, const std::string& key, int line = 0) {
  if (!std::isfinite(v)) throw ConfigError("config: '" + key + "' must be finite", key, line);
}

}  // namespace

void validate_config(const SimConfig& c) {
  if (c.nx < 2) throw ConfigError("config: 'nx' must be >= 2", "nx", 0);
  if (c.ny < 2) throw ConfigError("config: 'ny' must be >= 2", "ny", 0);
  const MaterialTable& m = c.material;
  check_positive(m.mobility, "mobility");
  check_positive(m.gamma, "gamma");
  check_finite(m.xi, "xi");
  check_positive(m.M_minus, "M_minus");
  check_positive(m.M_plus, "M_plus");
  check_finite(m.alpha_minus, "alpha_minus");
  check_finite(m.alpha_plus, "alpha_plus");
  check_positive(m.kappa_minus, "kappa_minus");
  check_positive(m.kappa_plus, "kappa_plus");
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const std::string key = what.substr(0, what.find(' '));
    throw ConfigError("config: " + what, key, 0);
  }
  check_positive(c.coupling.tau, "tau");
  if (!std::isfinite(c.coupling.t_end) || c.coupling.t_end < 0.0)
    throw ConfigError("config: 't_end' must be >= 0", "t_end", 0);
  check_positive(c.coupling.stagger_tol, "stagger_tol");
  check_positive(c.coupling.newton_tol, "newton_tol");
  if (c.coupling.stagger_max < 1) throw ConfigError("config: 'stagger_max' must be >= 1", "stagger_max", 0);
  if (c.coupling.newton_max < 1) throw ConfigError("config: 'newton_max' must be >= 1", "newton_max", 0);
  check_finite(c.scenario.p_top, "p_top");
  if (!c.scenario.flow_enabled() && c.scenario.p_top != 0.0)
    throw ConfigError("config: 'p_top' must be 0 when the flow subsystem is disabled", "p_top", 0);
  check_finite(c.sources.reaction, "reaction");
  check_finite(c.sources.fluid_source, "fluid_source");
  check_finite(c.sources.body_force.x, "body_force");
  check_finite(c.sources.body_force.y, "body_force");
  check_positive(c.interface_width, "interface_width");
  if (c.snapshot_interval < 1)
    throw ConfigError("config: 'snapshot_interval' must be >= 1", "snapshot_interval", 0);
  for (const Circle& circle : c.circles) {
    const bool inside = circle.radius > 0.0 && circle.center.x - circle.radius >= 0.0 &&
                        circle.center.x + circle.radius <= 1.0 &&
                        circle.center.y - circle.radius >= 0.0 &&
                        circle.center.y + circle.radius <= 1.0;
    if (!inside) throw ConfigError("config: 'circles' entry lies outside the unit square", "circles", 0);
  }
}

SimConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("config line " + std::to_string(e.mark.line + 1) + ": " + e.msg, "",
                      e.mark.line + 1);
  }
  SimConfig c;
  if (root.IsNull()) {
    validate_config(c);
    return c;
  }
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping", "", line_of(root));

  bool p_top_given = false;
  bool width_given = false;
  std::set<std::string> seen;
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (!seen.insert(key).second) fail(key, kv.first, "is given twice");
    MaterialTable& m = c.material;
    CouplingConfig& cp = c.coupling;

    if (key == "nx") c.nx = scalar<Index>(v, key);
    else if (key == "ny") c.ny = scalar<Index>(v, key);
    else if (key == "scenario") {
      try {
        c.scenario.kind = parse_scenario_kind(scalar<std::string>(v, key));
      } catch (const std::invalid_argument& e) {
        fail(key, v, e.what());
      }
    } else if (key == "p_top") {
      c.scenario.p_top = scalar<double>(v, key);
      p_top_given = true;
    } else if (key == "mobility") m.mobility = scalar<double>(v, key);
    else if (key == "gamma") m.gamma = scalar<double>(v, key);
    else if (key == "xi") m.xi = scalar<double>(v, key);
    else if (key == "M_minus") m.M_minus = scalar<double>(v, key);
    else if (key == "M_plus") m.M_plus = scalar<double>(v, key);
    else if (key == "alpha_minus") m.alpha_minus = scalar<double>(v, key);
    else if (key == "alpha_plus") m.alpha_plus = scalar<double>(v, key);
    else if (key == "kappa_minus") m.kappa_minus = scalar<double>(v, key);
    else if (key == "kappa_plus") m.kappa_plus = scalar<double>(v, key);
    else if (key == "C_minus") m.C_minus = voigt_matrix(v, key);
    else if (key == "C_plus") m.C_plus = voigt_matrix(v, key);
    else if (key == "tau") cp.tau = scalar<double>(v, key);
    else if (key == "t_end") cp.t_end = scalar<double>(v, key);
    else if (key == "stagger_tol") cp.stagger_tol = scalar<double>(v, key);
    else if (key == "stagger_max") cp.stagger_max = scalar<int>(v, key);
    else if (key == "newton_tol") cp.newton_tol = scalar<double>(v, key);
    else if (key == "newton_max") cp.newton_max = scalar<int>(v, key);
    else if (key == "reaction") c.sources.reaction = scalar<double>(v, key);
    else if (key == "fluid_source") c.sources.fluid_source = scalar<double>(v, key);
    else if (key == "body_force") {
      if (!v.IsSequence() || v.size() != 2) fail(key, v, "must be a list [fx, fy]");
      c.sources.body_force = {scalar<double>(v[0], key), scalar<double>(v[1], key)};
    } else if (key == "interface_width") {
      c.interface_width = scalar<double>(v, key);
      width_given = true;
    } else if (key == "snapshot_interval") c.snapshot_interval = scalar<Index>(v, key);
    else if (key == "output_dir") c.output_dir = scalar<std::string>(v, key);
    else if (key == "seed") c.seed = scalar<std::uint64_t>(v, key);
    else if (key == "circles") {
      if (!v.IsSequence()) fail(key, v, "must be a list of {x, y, radius} tables");
      c.circles.clear();
      for (const auto& item : v) {
        if (!item.IsMap()) fail(key, item, "entries must be {x, y, radius} tables");
        Circle circle;
        std::set<std::string> fields;
        for (const auto& f : item) {
          const std::string name = f.first.as<std::string>();
          const std::string full = "circles." + name;
          if (name == "x") circle.center.x = scalar<double>(f.second, full);
          else if (name == "y") circle.center.y = scalar<double>(f.second, full);
          else if (name == "radius") circle.radius = scalar<double>(f.second, full);
          else fail(full, f.first, "is not a known key");
          fields.insert(name);
        }
        if (fields.size() != 3) fail(key, item, "entries need x, y and radius");
        c.circles.push_back(circle);
      }
    } else {
      fail(key, kv.first, "is not a known key");
    }

    // Range checks that can point at the offending line.
    static const std::set<std::string> positive = {
        "mobility", "gamma", "M_minus", "M_plus", "kappa_minus", "kappa_plus", "tau",
        "stagger_tol", "newton_tol", "interface_width"};
    if (positive.count(key) && (!(v.as<double>() > 0.0) || !std::isfinite(v.as<double>())))
      fail(key, v, "must be positive and finite");
    if ((key == "nx" || key == "ny") && v.as<long long>() < 2) fail(key, v, "must be >= 2");
    if ((key == "stagger_max" || key == "newton_max" || key == "snapshot_interval") &&
        v.as<long long>() < 1)
      fail(key, v, "must be >= 1");
    if (key == "t_end" && !(v.as<double>() >= 0.0)) fail(key, v, "must be >= 0");
  }
  if (!p_top_given) c.scenario.p_top = Scenario::make(c.scenario.kind).p_top;
  if (!width_given) c.interface_width = 2.0 / static_cast<double>(c.nx);
  validate_config(c);
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'", "", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "nx" << YAML::Value << c.nx;
  out << YAML::Key << "ny" << YAML::Value << c.ny;
  out << YAML::Key << "scenario" << YAML::Value << std::string(to_string(c.scenario.kind));
  out << YAML::Key << "p_top" << YAML::Value << c.scenario.p_top;
  const MaterialTable& m = c.material;
  out << YAML::Key << "mobility" << YAML::Value << m.mobility;
  out << YAML::Key << "gamma" << YAML::Value << m.gamma;
  out << YAML::Key << "xi" << YAML::Value << m.xi;
  out << YAML::Key << "M_minus" << YAML::Value << m.M_minus;
  out << YAML::Key << "M_plus" << YAML::Value << m.M_plus;
  out << YAML::Key << "alpha_minus" << YAML::Value << m.alpha_minus;
  out << YAML::Key << "alpha_plus" << YAML::Value << m.alpha_plus;
  out << YAML::Key << "kappa_minus" << YAML::Value << m.kappa_minus;
  out << YAML::Key << "kappa_plus" << YAML::Value << m.kappa_plus;
  for (const auto& [name, mat] : {std::pair{"C_minus", &m.C_minus}, std::pair{"C_plus", &m.C_plus}}) {
    out << YAML::Key << name << YAML::Value << YAML::BeginSeq;
    for (int i = 0; i < 3; ++i) {
      out << YAML::Flow << YAML::BeginSeq;
      for (int j = 0; j < 3; ++j) out << (*mat)(i, j);
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  const CouplingConfig& cp = c.coupling;
  out << YAML::Key << "tau" << YAML::Value << cp.tau;
  out << YAML::Key << "t_end" << YAML::Value << cp.t_end;
  out << YAML::Key << "stagger_tol" << YAML::Value << cp.stagger_tol;
  out << YAML::Key << "stagger_max" << YAML::Value << cp.stagger_max;
  out << YAML::Key << "newton_tol" << YAML::Value << cp.newton_tol;
  out << YAML::Key << "newton_max" << YAML::Value << cp.newton_max;
  out << YAML::Key << "reaction" << YAML::Value << c.sources.reaction;
  out << YAML::Key << "fluid_source" << YAML::Value << c.sources.fluid_source;
  out << YAML::Key << "body_force" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << c.sources.body_force.x << c.sources.body_force.y << YAML::EndSeq;
  out << YAML::Key << "circles" << YAML::Value << YAML::BeginSeq;
  for (const Circle& circle : c.circles) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "x" << YAML::Value << circle.center.x
        << YAML::Key << "y" << YAML::Value << circle.center.y << YAML::Key << "radius"
        << YAML::Value << circle.radius << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "interface_width" << YAML::Value << c.interface_width;
  out << YAML::Key << "snapshot_interval" << YAML::Value << c.snapshot_interval;
  out << YAML::Key << "output_dir" << YAML::Value << c.output_dir;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace chb
