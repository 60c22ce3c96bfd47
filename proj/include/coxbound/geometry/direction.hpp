#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coxbound/geometry/complex.hpp"

namespace coxbound {

inline constexpr int kDefaultHorizon = 16;

// A finitely presented point of the bordification, given by a residue sequence x_k.
struct Direction {
  enum class Kind { interior, driven, explicit_ };

  Kind kind = Kind::interior;
  Residue base;                  // interior point, or x_0 for driven
  Element driver;                // driven: x_k = driver^k * base
  std::vector<Residue> sequence; // explicit
  int horizon = 0;               // explicit: declared stabilization index

  static Direction interior(Residue R) {
    Direction d;
    d.base = std::move(R);
    return d;
  }

  static Direction driven(Residue x0, Element g) {
    Direction d;
    d.kind = Kind::driven;
    d.base = std::move(x0);
    d.driver = std::move(g);
    return d;
  }

  static Direction explicit_sequence(std::vector<Residue> seq, int horizon) {
    if (seq.empty()) throw InputError("explicit direction needs a nonempty sequence");
    Direction d;
    d.kind = Kind::explicit_;
    d.sequence = std::move(seq);
    d.horizon = horizon;
    return d;
  }

  friend bool operator==(const Direction&, const Direction&) = default;
};

// Rejects drivers of finite order (l(g^k) must strictly increase for k <= checks) and drivers whose
// sequence keeps crossing a nearby wall, as a finite-order factor of a product does.
inline void validate_direction(const CoxeterComplex& X, const Direction& xi, int checks = 8) {
  if (xi.kind != Direction::Kind::driven) return;
  const auto& G = X.group();
  std::size_t prev = 0;
  Element p = G.identity();
  std::vector<Residue> tail;
  for (int k = 1; k <= 2 * checks; ++k) {
    p = G.multiply(p, xi.driver);
    if (k <= checks && p.length() <= prev) throw InputError("driver " + G.format(xi.driver) + " does not have infinite order");
    prev = p.length();
    if (k >= checks) tail.push_back(X.translate(p, xi.base));
  }
  const int radius = static_cast<int>(xi.driver.length() + xi.base.base.length()) + 1;
  for (const Element& t : G.reflections_in_ball(radius)) {
    const int first = X.sign(t, tail.front());
    for (const Residue& R : tail)
      if (X.sign(t, R) != first)
        throw InputError("driver " + G.format(xi.driver) + " does not converge: it keeps crossing " + G.format(t));
  }
}

inline Residue residue_at(const CoxeterComplex& X, const Direction& xi, int k) {
  switch (xi.kind) {
    case Direction::Kind::interior:
      return xi.base;
    case Direction::Kind::driven:
      return X.translate(X.group().power(xi.driver, k), xi.base);
    case Direction::Kind::explicit_:
      return xi.sequence[std::min<std::size_t>(k, xi.sequence.size() - 1)];
  }
  return xi.base;
}

inline Direction translate(const CoxeterComplex& X, const Element& w, const Direction& xi) {
  Direction out = xi;
  out.base = X.translate(w, xi.base);
  if (xi.kind == Direction::Kind::driven) out.driver = X.group().conjugate(w, xi.driver);
  for (auto& R : out.sequence) R = X.translate(w, R);
  return out;
}

// Sign of x_k for the wall of t, constant over k in [horizon/2, horizon]; nullopt if it moves.
inline std::optional<int> eventual_sign(const CoxeterComplex& X, const Direction& xi, const Element& t, int horizon) {
  if (xi.kind == Direction::Kind::interior) return X.sign(t, xi.base);
  const int first = X.sign(t, residue_at(X, xi, horizon / 2));
  for (int k = horizon / 2 + 1; k <= horizon; ++k)
    if (X.sign(t, residue_at(X, xi, k)) != first) return std::nullopt;
  return first;
}

struct ConvergenceReport {
  bool stabilized = true;
  std::vector<int> index;  // per probe; -1 when the probe never settled
};

inline std::vector<Residue> projection_vector(const CoxeterComplex& X, const Residue& R,
                                              const std::vector<Residue>& probes) {
  std::vector<Residue> out;
  out.reserve(probes.size());
  for (const Residue& S : probes) out.push_back(X.project_residue(S, R));
  return out;
}

// A probe settles at index i if proj_S(x_k) is constant for i <= k <= horizon and i <= horizon/2.
// Explicit sequences are only read up to their last given term.
inline ConvergenceReport certify_convergence(const CoxeterComplex& X, const Direction& xi,
                                             const std::vector<Residue>& probes, int horizon) {
  ConvergenceReport rep;
  if (xi.kind == Direction::Kind::explicit_) horizon = std::min<int>(horizon, static_cast<int>(xi.sequence.size()) - 1);
  std::vector<std::vector<Residue>> vecs;
  for (int k = 0; k <= horizon; ++k) vecs.push_back(projection_vector(X, residue_at(X, xi, k), probes));
  for (std::size_t p = 0; p < probes.size(); ++p) {
    int idx = horizon;
    while (idx > 0 && vecs[idx - 1][p] == vecs[horizon][p]) --idx;
    if (idx > horizon / 2) {
      rep.stabilized = false;
      idx = -1;
    }
    rep.index.push_back(idx);
  }
  return rep;
}

// Roots (with wall in a ball) eventually containing x_k; tri-state for walls that keep moving.
struct RootSet {
  std::vector<Root> roots;
  std::vector<int> index;              // first k after which x_k stays in the root
  std::vector<Element> undetermined;   // walls whose side never settled
};

inline RootSet phi_of(const CoxeterComplex& X, const Direction& xi, int wall_radius, int horizon) {
  RootSet out;
  std::vector<Residue> seq;
  for (int k = 0; k <= horizon; ++k) seq.push_back(residue_at(X, xi, k));
  for (const Element& t : X.group().reflections_in_ball(wall_radius)) {
    std::vector<int> sg;
    for (const Residue& R : seq) sg.push_back(X.sign(t, R));
    bool settled = false;
    for (bool positive : {true, false}) {
      const int side = positive ? 1 : -1;
      int idx = horizon + 1;
      while (idx > 0 && (sg[idx - 1] == side || sg[idx - 1] == 0)) --idx;
      if (idx <= horizon / 2) {
        out.roots.push_back({t, positive});
        out.index.push_back(idx);
        settled = true;
      }
    }
    if (!settled) out.undetermined.push_back(t);
  }
  return out;
}

inline nlohmann::json direction_to_json(const CoxeterComplex& X, const Direction& xi) {
  switch (xi.kind) {
    case Direction::Kind::interior:
      return {{"kind", "interior"}, {"residue", X.to_json(xi.base)}};
    case Direction::Kind::driven:
      return {{"kind", "driven"}, {"base", X.to_json(xi.base)}, {"driver", X.group().format(xi.driver)}};
    case Direction::Kind::explicit_: {
      nlohmann::json seq = nlohmann::json::array();
      for (const Residue& R : xi.sequence) seq.push_back(X.to_json(R));
      return {{"kind", "explicit"}, {"sequence", seq}, {"horizon", xi.horizon}};
    }
  }
  return {};
}

inline Direction direction_from_json(const CoxeterComplex& X, const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "interior") return Direction::interior(X.residue_from_json(j.at("residue")));
    if (kind == "driven") {
      Direction d = Direction::driven(X.residue_from_json(j.at("base")), X.group().parse(j.at("driver").get<std::string>()));
      validate_direction(X, d);
      return d;
    }
    if (kind == "explicit") {
      std::vector<Residue> seq;
      for (const auto& r : j.at("sequence")) seq.push_back(X.residue_from_json(r));
      return Direction::explicit_sequence(std::move(seq), j.value("horizon", 0));
    }
    throw InputError("unknown direction kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad direction: ") + e.what());
  }
}

}  // namespace coxbound
