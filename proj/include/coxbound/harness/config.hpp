#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "coxbound/harness/catalog.hpp"

namespace coxbound {

// Everything a run needs; residues and directions stay as JSON until the building is known.
struct ExperimentConfig {
  nlohmann::json system = {{"catalog", "tree3"}};
  nlohmann::json w0;  // null: the catalog default, or racg-kernel
  int radius = 3;
  int horizon = kDefaultHorizon;
  int n_min = 1;
  int n_max = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<nlohmann::json> pairs;       // {"x": residue, "y": residue}
  std::vector<nlohmann::json> directions;  // {"apartment": chamber, "direction": direction}

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j{{"system", c.system}, {"radius", c.radius}, {"horizon", c.horizon}, {"n_min", c.n_min},
                   {"n_max", c.n_max},   {"seed", c.seed},     {"out", c.out},         {"pairs", c.pairs},
                   {"directions", c.directions}};
  if (!c.w0.is_null()) j["w0"] = c.w0;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw InputError("config must be a JSON object");
    c.system = j.value("system", c.system);
    c.w0 = j.value("w0", nlohmann::json());
    c.radius = j.value("radius", c.radius);
    c.horizon = j.value("horizon", c.horizon);
    c.n_min = j.value("n_min", c.n_min);
    c.n_max = j.value("n_max", c.n_max);
    c.seed = j.value("seed", c.seed);
    c.out = j.value("out", c.out);
    c.pairs = j.value("pairs", c.pairs);
    c.directions = j.value("directions", c.directions);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad config: ") + e.what());
  }
  if (c.radius < 0 || c.horizon < 1 || c.n_min < 1 || c.n_max < c.n_min) throw InputError("caps must be positive");
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("config is not JSON: ") + e.what());
  }
}

// The config with its building, subgroup, residues and directions parsed.
struct Experiment {
  ExperimentConfig config;
  GraphProductBuilding building;
  Subgroup w0;
  std::vector<std::pair<BuildingResidue, BuildingResidue>> pairs;
  std::vector<BuildingDirection> directions;
};

inline GraphProductBuilding building_of(const nlohmann::json& system) {
  if (system.contains("catalog")) return catalog_entry(system.at("catalog").get<std::string>()).building();
  return building_from_json(system);
}

// With no directions given, a seeded sample of driven directions through the identity apartment.
inline Experiment load_experiment(const ExperimentConfig& c, int sample = 4) {
  GraphProductBuilding b = building_of(c.system);
  std::string kind = "racg-kernel";
  if (c.system.contains("catalog")) kind = catalog_entry(c.system.at("catalog").get<std::string>()).w0;
  Subgroup w0 = c.w0.is_null() ? default_subgroup(b.system(), kind) : subgroup_from_json(b.system(), c.w0);
  Experiment e{c, b, std::move(w0), {}, {}};
  try {
    for (const auto& p : c.pairs) e.pairs.emplace_back(b.residue_from_json(p.at("x")), b.residue_from_json(p.at("y")));
    for (const auto& d : c.directions)
      e.directions.push_back({b.parse(d.value("apartment", "e")), direction_from_json(b.complex(), d.at("direction"))});
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("bad config entry: ") + ex.what());
  }
  if (e.pairs.empty()) e.pairs.emplace_back(b.chamber(b.identity()), b.chamber(b.generator(0)));
  if (e.directions.empty()) {
    std::mt19937_64 rng(c.seed);
    for (auto& d : sample_directions(b.complex(), rng, sample)) e.directions.push_back({b.identity(), std::move(d)});
  }
  return e;
}

}  // namespace coxbound
