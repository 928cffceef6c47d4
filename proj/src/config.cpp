#include "caplab/config.hpp"

#include <cmath>
#include <fstream>

#include "caplab/errors.hpp"
#include "caplab/expression.hpp"
#include "caplab/interp.hpp"

namespace caplab {

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> table = {
      {"modica-bound", 1e-9},
      {"subsolution-min-lhs", 1e-6},
      {"boundary-slope-constant", 1e-8},
      {"identity-equation-boundary", 1e-4},
      {"identity-P-normal-derivative", 1e-4},
      {"identity-recovered-curvature", 1e-6},
      {"pohozaev-normalized-residual", 1e-4},
      {"w-exp-bound", 0.0},
      {"grad-sup-explicit-bound", 0.0},
      {"hamiltonian-drift", 1e-8},
  };
  return table;
}

ReactionTerm reaction_from_json(const nlohmann::json& decl, double kappa, double search_lo,
                                double search_hi) {
  if (!decl.is_object() || !decl.contains("type"))
    throw Error(ErrorKind::InvalidInput, "reaction declaration needs a \"type\" field");
  std::string type = decl.at("type").get<std::string>();
  if (type == "linear") {
    double b = decl.value("b", 1.0);
    if (!(b > 0.0)) throw Error(ErrorKind::InvalidInput, "linear reaction needs b > 0");
    double ch;
    if (decl.contains("c_h")) {
      ch = decl.at("c_h").get<double>();
    } else {
      // close F(c_h) = 0 for the normalized primitive
      double F0 = 1.0 / std::sqrt(1.0 + kappa * kappa) - 1.0;
      ch = std::sqrt(-2.0 * F0 / b);
    }
    return make_reaction([b, ch](double v) { return b * (ch - v); },
                         [b](double) { return -b; }, kappa, search_lo, search_hi);
  }
  if (type == "expression") {
    if (!decl.contains("f"))
      throw Error(ErrorKind::InvalidInput, "expression reaction needs an \"f\" string");
    Expression f = Expression::parse(decl.at("f").get<std::string>());
    Expression fp = f.derivative();
    return make_reaction([f](double u) { return f.eval(u); },
                         [fp](double u) { return fp.eval(u); }, kappa, search_lo, search_hi);
  }
  if (type == "table") {
    if (!decl.contains("u") || !decl.contains("f"))
      throw Error(ErrorKind::InvalidInput, "table reaction needs \"u\" and \"f\" arrays");
    auto u = decl.at("u").get<std::vector<double>>();
    auto f = decl.at("f").get<std::vector<double>>();
    if (u.size() != f.size() || u.size() < 2)
      throw Error(ErrorKind::InvalidInput, "table reaction arrays must match, length >= 2");
    PchipInterpolant interp(u, f);
    return make_reaction([interp](double x) { return interp.eval(x); },
                         [interp](double x) { return interp.deriv(x); }, kappa, search_lo,
                         search_hi);
  }
  throw Error(ErrorKind::InvalidInput, "unknown reaction type \"" + type + "\"");
}

ReactionTerm RunConfig::make_reaction_term() const {
  return reaction_from_json(reaction, kappa, search_lo, search_hi);
}

double RunConfig::tolerance(const std::string& check) const {
  auto it = tolerances.find(check);
  if (it == tolerances.end())
    throw Error(ErrorKind::InvalidInput, "no tolerance on record for check \"" + check + "\"");
  return it->second;
}

RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "config root must be an object");
  RunConfig c;
  c.tolerances = default_tolerances();
  c.reaction = j.value("reaction", nlohmann::json{{"type", "linear"}, {"b", 1.0}});
  c.kappa = j.value("kappa", c.kappa);
  if (!(c.kappa < 0.0)) throw Error(ErrorKind::InvalidInput, "kappa must be negative");
  if (j.contains("search")) {
    auto s = j.at("search").get<std::vector<double>>();
    if (s.size() != 2) throw Error(ErrorKind::InvalidInput, "search must be [lo, hi]");
    c.search_lo = s[0];
    c.search_hi = s[1];
  }
  if (!(c.search_lo < 0.0 && c.search_hi > 0.0))
    throw Error(ErrorKind::InvalidInput, "search interval must contain 0 in its interior");
  c.delta_hint = j.value("delta_hint", c.delta_hint);
  if (j.contains("radii")) c.radii = j.at("radii").get<std::vector<double>>();
  if (c.radii.empty()) throw Error(ErrorKind::InvalidInput, "radius list must be nonempty");
  for (size_t i = 0; i < c.radii.size(); ++i) {
    if (!(c.radii[i] > 0.0))
      throw Error(ErrorKind::InvalidInput, "radii must be positive");
    if (i > 0 && !(c.radii[i] > c.radii[i - 1]))
      throw Error(ErrorKind::InvalidInput, "radius list must be strictly increasing");
  }
  c.grid_h = j.value("grid_h", c.grid_h);
  if (!(c.grid_h > 0.0)) throw Error(ErrorKind::InvalidInput, "grid_h must be positive");
  c.dimension = j.value("dimension", c.dimension);
  if (c.dimension < 2) throw Error(ErrorKind::InvalidInput, "dimension must be >= 2");
  c.epsilon0 = j.value("epsilon0", c.epsilon0);
  c.profile_T = j.value("profile_T", c.profile_T);
  c.profile_step = j.value("profile_step", c.profile_step);
  c.out_dir = j.value("out_dir", c.out_dir);
  if (j.contains("tolerances")) {
    for (auto& [name, value] : j.at("tolerances").items()) {
      if (!c.tolerances.count(name))
        throw Error(ErrorKind::InvalidInput, "tolerance names an unknown check \"" + name + "\"");
      c.tolerances[name] = value.get<double>();
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::InvalidInput, "cannot open config file " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace caplab
