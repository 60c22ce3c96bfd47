#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "coxbound/geometry/direction.hpp"

namespace coxbound {

using ResidueFilter = std::function<bool(const Residue&)>;
using ChamberFilter = std::function<bool(const Element&)>;

inline ResidueFilter in_ball_filter(const CoxeterComplex& X, int radius) {
  return [&X, radius](const Residue& R) { return X.in_ball(R, radius); };
}

// Chambers on some minimal gallery from a to b. With `prune`, galleries stop at the first rejected
// chamber, which is exact when the accepted set is closed under going back towards a.
inline std::set<Element> interval_chambers(const CoxeterComplex& X, const Element& a, const Element& b,
                                           const ChamberFilter& prune = {}) {
  const auto& G = X.group();
  std::set<Word> seen{Word{}};
  std::vector<std::pair<Word, Word>> frontier{{Word{}, G.multiply(G.inverse(a), b).word}};
  std::set<Element> out{a};
  while (!frontier.empty()) {
    std::vector<std::pair<Word, Word>> next;
    for (const auto& [u, v] : frontier)
      for (int s = 0; s < X.rank(); ++s) {
        const Gen g = static_cast<Gen>(s);
        if (!G.is_left_descent(g, v)) continue;
        Element us = G.normalize(G.right_mul(u, g));
        if (!seen.insert(us.word).second) continue;
        Element c = G.multiply(a, us);
        if (prune && !prune(c)) continue;
        out.insert(std::move(c));
        next.push_back({us.word, G.left_mul(g, v)});
      }
    frontier = std::move(next);
  }
  return out;
}

// Conv(x,y) by scanning the residues whose chambers all lie on galleries between x and y.
inline std::vector<Residue> hull(const CoxeterComplex& X, const Residue& x, const Residue& y,
                                 const ResidueFilter& keep = {}, const ChamberFilter& prune = {}) {
  std::set<Element> cand;
  for (const Element& a : X.chambers(x))
    for (const Element& b : X.chambers(y)) cand.merge(interval_chambers(X, a, b, prune));
  std::set<Residue> out;
  for (const Element& c : cand)
    for (TypeSet J : X.spherical_types()) {
      Residue R = X.residue(c, J);
      if (R.base != c || (keep && !keep(R))) continue;
      bool inside = true;
      for (const Element& d : X.chambers(R)) inside = inside && cand.count(d);
      if (inside && X.between(x, y, R)) out.insert(R);
    }
  return {out.begin(), out.end()};
}

inline constexpr int kSectorCap = 1 << 12;

// Q(x,xi) restricted to `keep`: the residues of Conv(x,x_K) lying in Conv(x,x_k) for k = K+1 and 2K,
// with K doubled until two successive values agree.
inline std::vector<Residue> sector(const CoxeterComplex& X, const Residue& x, const Direction& xi,
                                   const ResidueFilter& keep, int start = 4, int cap = kSectorCap,
                                   const ChamberFilter& prune = {}) {
  if (xi.kind == Direction::Kind::interior) return hull(X, x, xi.base, keep, prune);
  auto at = [&](int K) {
    std::vector<Residue> out;
    const Residue a = residue_at(X, xi, K + 1), b = residue_at(X, xi, 2 * K);
    for (const Residue& R : hull(X, x, residue_at(X, xi, K), keep, prune))
      if (X.between(x, a, R) && X.between(x, b, R)) out.push_back(R);
    return out;
  };
  int K = std::max(1, start);
  if (xi.kind == Direction::Kind::explicit_) K = std::max(K, xi.horizon);
  auto cur = at(K);
  for (; 2 * K <= cap; K *= 2) {
    auto next = at(2 * K);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  throw NotStabilized("sector did not stabilize before index " + std::to_string(cap));
}

// Horizon at which x_{h/2} is well past every wall meeting the ball of the given radius.
inline int sign_horizon(const CoxeterComplex& X, const Direction& xi, int radius) {
  if (xi.kind == Direction::Kind::interior) return 0;
  if (xi.kind == Direction::Kind::explicit_) return std::max<int>(2 * xi.horizon, 2);
  const auto& G = X.group();
  int h = 2;
  const std::size_t need = 2 * static_cast<std::size_t>(radius) + 2 * xi.base.base.length() + 4;
  while (G.power(xi.driver, h / 2).length() < need) {
    h *= 2;
    if (h > kSectorCap) throw NotStabilized("driver too short for the requested radius");
  }
  return h;
}

// Intersection of the roots containing both x and (eventually) every x_k, on a ball.
inline std::vector<Residue> sector_by_roots(const CoxeterComplex& X, const Residue& x, const Direction& xi, int radius) {
  const int h = sign_horizon(X, xi, radius);
  std::vector<Residue> tail;
  for (int k = h / 2; k <= h; ++k) tail.push_back(residue_at(X, xi, k));
  std::map<Element, int> eventual;
  auto eventual_of = [&](const Element& t) {
    auto it = eventual.find(t);
    if (it != eventual.end()) return it->second;
    const int e = X.sign(t, tail.front());
    for (const Residue& R : tail)
      if (X.sign(t, R) != e) throw NotStabilized("wall " + X.group().format(t) + " has no eventual side");
    return eventual[t] = e;
  };
  std::vector<Residue> out;
  for (const Residue& R : X.residues_in_ball(radius)) {
    bool inside = true;
    for (const Element& t : X.separating_walls(R, x)) {
      const int e = eventual_of(t), a = X.sign(t, x), r = X.sign(t, R);
      if (r < std::min(a, e) || r > std::max(a, e)) {
        inside = false;
        break;
      }
    }
    if (inside) out.push_back(R);
  }
  return out;
}

}  // namespace coxbound
