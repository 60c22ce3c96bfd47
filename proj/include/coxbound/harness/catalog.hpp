#pragma once

#include <random>
#include <string>
#include <vector>

#include "coxbound/building/measures.hpp"

namespace coxbound {

struct CatalogEntry {
  std::string name;
  std::string summary;
  CoxeterSystem system;
  std::vector<int> thickness;
  std::string w0;  // default subgroup kind

  GraphProductBuilding building() const { return {system, thickness}; }
};

inline CoxeterSystem two_lines() { return dihedral(kInfinity).product(dihedral(kInfinity, "u", "v")); }

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"dinf", "infinite dihedral group, thin", dihedral(kInfinity), {2, 2}, "racg-kernel"},
      {"free3", "free Coxeter group on three generators, thin", free_coxeter(3), {2, 2, 2}, "racg-kernel"},
      {"dinf2", "product of two infinite dihedral groups, thin", two_lines(), {2, 2, 2, 2}, "factor"},
      {"pentagon", "right-angled pentagon group, thin", polygon_racg(5), std::vector<int>(5, 2), "racg-kernel"},
      {"tree3", "thick tree, every panel of size 3", dihedral(kInfinity), {3, 3}, "factor"},
      {"trees33", "product of two thick trees (3,3)", two_lines(), {3, 3, 3, 3}, "factor"},
      {"pentagon3", "right-angled pentagon building, every panel of size 3", polygon_racg(5), std::vector<int>(5, 3),
       "racg-kernel"},
  };
  return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw InputError("no catalog entry named '" + name + "'");
}

inline Subgroup default_subgroup(const CoxeterSystem& sys, const std::string& kind) {
  return subgroup_from_json(sys, {{"kind", kind}});
}

// Random driven directions: a residue in a small ball and a driver word of infinite order.
inline std::vector<Direction> sample_directions(const CoxeterComplex& X, std::mt19937_64& rng, int count,
                                                int base_radius = 1, int max_driver = 4) {
  const auto& G = X.group();
  const auto bases = G.ball(base_radius);
  const auto& types = X.spherical_types();
  std::vector<Direction> out;
  for (int attempts = 0; static_cast<int>(out.size()) < count; ++attempts) {
    if (attempts > 1000 * count) throw CapExceeded("could not sample enough directions of infinite order");
    Word w;
    const int len = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_driver - 1));
    for (int i = 0; i < len; ++i) w.push_back(static_cast<Gen>(rng() % static_cast<unsigned>(X.rank())));
    const Element g = G.reduce(w);
    Direction d = Direction::driven(X.residue(bases[rng() % bases.size()], types[rng() % types.size()]), g);
    try {
      validate_direction(X, d);
    } catch (const InputError&) {
      continue;
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace coxbound
