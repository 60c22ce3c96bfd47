#pragma once

#include <map>
#include <vector>

#include "coxbound/geometry/sector.hpp"
#include "coxbound/measures/push.hpp"
#include "coxbound/measures/tree_lambda.hpp"
#include "coxbound/trees/tree_system.hpp"

namespace coxbound {

// Per tree: segment of length N_i if p_i(x,x_k) settles, a ray if it keeps growing.
inline std::vector<TreeShape> tree_shapes(const TreeSystem& ts, const Residue& x, const Direction& xi,
                                          int cap = kSectorCap) {
  std::vector<TreeShape> out(ts.size());
  if (xi.kind == Direction::Kind::interior) {
    auto p = ts.positions(x, xi.base);
    for (int i = 0; i < ts.size(); ++i) out[i] = {false, p[i]};
    return out;
  }
  const auto& X = ts.complex();
  auto pos = [&](int k) { return ts.positions(x, residue_at(X, xi, k)); };
  // segment length counts only walls whose side has settled: x_k may sit on a new wall every step
  auto settled = [&](int K) {
    const Residue a = residue_at(X, xi, K), b = residue_at(X, xi, K + 1), c = residue_at(X, xi, 2 * K);
    std::vector<int> p(ts.size(), 0);
    for (const auto& [t, rep] : X.separating_wall_reps(x, c)) {
      const int e = X.sign(t, c);
      if (X.sign(t, a) == e && X.sign(t, b) == e) p[ts.class_of(rep.first, rep.second)] += std::abs(X.sign(t, x) - e);
    }
    return p;
  };
  auto a = pos(2), b = pos(4);
  for (int K = 4; 2 * K <= cap; K *= 2) {
    auto c = pos(2 * K);
    bool decided = true;
    for (int i = 0; i < ts.size(); ++i) {
      if (a[i] == b[i] && b[i] == c[i])
        out[i] = {false, c[i]};
      else if (a[i] < b[i] && b[i] < c[i])
        out[i] = {true, 0};
      else
        decided = false;
    }
    if (decided) {
      const auto N = settled(K);
      for (int i = 0; i < ts.size(); ++i)
        if (!out[i].end) out[i].N = N[i];
      return out;
    }
    a = std::move(b);
    b = std::move(c);
  }
  throw NotStabilized("tree positions of the direction did not settle");
}

// The part of Q(x,xi) that can carry mass for n <= n_max, with its position vectors.
struct SectorData {
  Residue x;
  Direction xi;
  int n_max = 0;
  std::vector<TreeShape> shapes;
  std::vector<Residue> residues;
  std::vector<Position> positions;
};

inline SectorData sector_data(const TreeSystem& ts, const Residue& x, const Direction& xi, int n_max) {
  SectorData d{x, xi, n_max, tree_shapes(ts, x, xi), {}, {}};
  std::vector<int> box(ts.size());
  for (int i = 0; i < ts.size(); ++i) box[i] = d.shapes[i].end ? 4 * n_max : d.shapes[i].N;
  std::map<Residue, Position> cache;
  auto keep = [&](const Residue& R) {
    auto it = cache.find(R);
    if (it == cache.end()) it = cache.emplace(R, ts.positions(x, R)).first;
    for (int i = 0; i < ts.size(); ++i)
      if (it->second[i] > box[i]) return false;
    return true;
  };
  // a chamber of a residue R sits at most one step further than R per wall cutting R
  const int slack = static_cast<int>(ts.complex().max_reflections());
  auto prune = [&](const Element& c) {
    auto p = ts.positions(x, ts.complex().chamber(c));
    for (int i = 0; i < ts.size(); ++i)
      if (p[i] > box[i] + slack) return false;
    return true;
  };
  d.residues = sector(ts.complex(), x, xi, keep, 4, kSectorCap, prune);
  std::set<Position> seen;
  for (const Residue& R : d.residues) {
    d.positions.push_back(cache.count(R) ? cache.at(R) : ts.positions(x, R));
    if (!seen.insert(d.positions.back()).second)
      throw InvariantViolation("two residues of a sector share a position vector");
  }
  return d;
}

// The pushed product measure, averaged over the tree orders sigma_w of the cosets of W0.
inline Measure<Residue> coxeter_mu(const TreeSystem& ts, const SectorData& d, int n) {
  if (n < 1 || n > d.n_max) throw InputError("n outside the range the sector was computed for");
  std::vector<Measure<int>> f;
  for (const TreeShape& s : d.shapes) f.push_back(tree_lambda(s, n));
  std::map<Position, Residue> at;
  for (std::size_t i = 0; i < d.residues.size(); ++i) at.emplace(d.positions[i], d.residues[i]);
  Measure<Residue> out;
  const auto reps = ts.coset_representatives();
  const Rational share(1, static_cast<long>(reps.size()));
  std::map<std::vector<int>, int> orders;
  for (const Element& w : reps) ++orders[ts.permutation(w)];
  for (const auto& [order, count] : orders)
    for (const auto& [p, wgt] : push_product(d.positions, f, order)) add_mass(out, at.at(p), wgt * share * count);
  return out;
}

inline Measure<Residue> coxeter_mu(const TreeSystem& ts, const Residue& x, const Direction& xi, int n) {
  return coxeter_mu(ts, sector_data(ts, x, xi, n), n);
}

// Z(x,xi,n,k) in a tree-shaped complex, read off from root distances along the sector.
inline std::vector<Residue> z_set(const CoxeterComplex& T, const Residue& x, const Direction& xi, int n, int k) {
  const int lo = 2 * (n - k), hi = 2 * (n + k);
  auto keep = [&](const Residue& R) { return T.root_distance2(x, R) <= hi; };
  std::vector<Residue> out;
  if (xi.kind == Direction::Kind::interior) {
    if (2 * k <= 2 * n - T.root_distance2(x, xi.base)) return {xi.base};
    for (const Residue& R : sector(T, x, xi, keep))
      if (T.root_distance2(x, R) >= lo || R == xi.base) out.push_back(R);
    if (std::find(out.begin(), out.end(), xi.base) == out.end()) out.push_back(xi.base);
    std::sort(out.begin(), out.end());
    return out;
  }
  for (const Residue& R : sector(T, x, xi, keep))
    if (T.root_distance2(x, R) >= lo) out.push_back(R);
  return out;
}

inline Measure<Residue> tree_lambda_residues(const CoxeterComplex& T, const Residue& x, const Direction& xi, int n) {
  Measure<Residue> out;
  for (int k = 1; k <= n; ++k) {
    auto Z = z_set(T, x, xi, n, k);
    const Rational w(1, static_cast<long>(Z.size()) * n);
    for (const Residue& R : Z) add_mass(out, R, w);
  }
  return out;
}

// Tensor product of tree measures, one per factor.
inline Measure<std::vector<Residue>> product_lambda(const std::vector<const CoxeterComplex*>& trees,
                                                     const std::vector<Residue>& xs, const std::vector<Direction>& xis,
                                                     int n) {
  Measure<std::vector<Residue>> out{{{}, Rational(1)}};
  for (std::size_t j = 0; j < trees.size(); ++j) {
    auto f = tree_lambda_residues(*trees[j], xs[j], xis[j], n);
    Measure<std::vector<Residue>> next;
    for (const auto& [key, w] : out)
      for (const auto& [R, v] : f) {
        auto k2 = key;
        k2.push_back(R);
        add_mass(next, k2, w * v);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace coxbound
