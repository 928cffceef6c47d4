#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "caplab/reaction.hpp"

namespace caplab {

// Run parameters shared by the CLI commands. The reaction declaration is
// kept as raw JSON and instantiated on demand:
//   {"type": "linear", "b": 1.0}                       f(v) = b (c_h - v)
//   {"type": "expression", "f": "..."}                 symbolic derivative
//   {"type": "table", "u": [...], "f": [...]}          monotone cubic fit
// The linear form derives c_h from kappa unless "c_h" overrides it.
struct RunConfig {
  nlohmann::json reaction;
  double kappa = -1.0;
  double search_lo = -0.25;
  double search_hi = 1.5;
  double delta_hint = 0.1;
  std::vector<double> radii{25.0, 50.0, 100.0};
  double grid_h = 0.025;
  int dimension = 2;
  double epsilon0 = 1.0;
  double profile_T = 20.0;
  double profile_step = 1e-4;
  std::string out_dir = ".";
  std::map<std::string, double> tolerances;  // seeded with the frozen table

  ReactionTerm make_reaction_term() const;
  double tolerance(const std::string& check) const;  // throws on unknown name
};

// The frozen per-check tolerance table (calibration output); a config file
// may override individual entries but must not name unknown checks.
const std::map<std::string, double>& default_tolerances();

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Instantiates a declaration; shared with the CLI flag overrides.
ReactionTerm reaction_from_json(const nlohmann::json& decl, double kappa, double search_lo,
                                double search_hi);

}  // namespace caplab
