#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "coxbound/geometry/direction.hpp"

namespace coxbound {

using Perm = std::vector<int>;

// Image of W in a finite permutation group, given on generators; elements are indexed, identity is 0.
class FiniteQuotient {
 public:
  FiniteQuotient() : elems_{Perm{0}}, index_{{Perm{0}, 0}} {}

  explicit FiniteQuotient(std::vector<Perm> gens, std::size_t cap = 50'000) : gens_(std::move(gens)) {
    const std::size_t m = gens_.empty() ? 1 : gens_.front().size();
    Perm id(m);
    std::iota(id.begin(), id.end(), 0);
    elems_.push_back(id);
    index_[id] = 0;
    for (std::size_t i = 0; i < elems_.size(); ++i)
      for (const Perm& g : gens_) {
        Perm p = compose(elems_[i], g);
        if (index_.emplace(p, static_cast<int>(elems_.size())).second) {
          elems_.push_back(std::move(p));
          if (elems_.size() > cap) throw CapExceeded("finite quotient exceeds " + std::to_string(cap) + " elements");
        }
      }
    gen_table_.resize(elems_.size());
    for (std::size_t i = 0; i < elems_.size(); ++i)
      for (const Perm& g : gens_) gen_table_[i].push_back(index_.at(compose(elems_[i], g)));
  }

  int size() const noexcept { return static_cast<int>(elems_.size()); }
  const std::vector<Perm>& generators() const noexcept { return gens_; }

  int times_generator(int q, Gen s) const { return gens_.empty() ? 0 : gen_table_[q][s]; }

  int multiply(int a, int b) const { return gens_.empty() ? 0 : index_.at(compose(elems_[a], elems_[b])); }

  int of(const Word& w) const {
    int q = 0;
    for (Gen s : w) q = times_generator(q, s);
    return q;
  }

 private:
  static Perm compose(const Perm& a, const Perm& b) {
    Perm out(b.size());
    for (std::size_t x = 0; x < b.size(); ++x) out[x] = a[b[x]];
    return out;
  }

  std::vector<Perm> gens_;
  std::vector<Perm> elems_;
  std::map<Perm, int> index_;
  std::vector<std::vector<int>> gen_table_;
};

// Finite-index normal subgroup W0, the kernel of a homomorphism to a finite permutation group.
// The factor kind keeps W0 = W and splits the walls of a product of free Coxeter groups by factor.
struct Subgroup {
  enum class Kind { racg_kernel, user_supplied, factor };

  Kind kind = Kind::racg_kernel;
  FiniteQuotient quotient;
  std::vector<Perm> images;   // user-supplied generator images
  std::vector<int> factor_of; // factor kind: generator -> factor index

  int index() const { return quotient.size(); }
  bool contains(const Element& w) const { return quotient.of(w.word) == 0; }

  // Parity kernel: W -> (Z/2)^rank acting regularly on 2^rank points.
  static Subgroup racg_kernel(const CoxeterSystem& sys) {
    if (!sys.is_right_angled()) throw InputError("racg-kernel needs a right-angled system");
    if (sys.rank() > 12) throw InputError("racg-kernel supports rank at most 12");
    const int m = 1 << sys.rank();
    std::vector<Perm> gens;
    for (int s = 0; s < sys.rank(); ++s) {
      Perm p(m);
      for (int x = 0; x < m; ++x) p[x] = x ^ (1 << s);
      gens.push_back(std::move(p));
    }
    Subgroup out;
    out.quotient = FiniteQuotient(std::move(gens));
    return out;
  }

  static Subgroup user_supplied(const CoxeterSystem& sys, std::vector<Perm> images) {
    if (static_cast<int>(images.size()) != sys.rank()) throw InputError("need one permutation per generator");
    const std::size_t m = images.front().size();
    for (const Perm& p : images) {
      if (p.size() != m) throw InputError("generator permutations must act on the same points");
      std::vector<int> sorted = p;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < m; ++i)
        if (sorted[i] != static_cast<int>(i)) throw InputError("generator image is not a permutation");
    }
    // the images must satisfy the Coxeter relations
    for (int s = 0; s < sys.rank(); ++s)
      for (int t = s; t < sys.rank(); ++t) {
        const int order = s == t ? 1 : sys.order(static_cast<Gen>(s), static_cast<Gen>(t));
        if (order == kInfinity) continue;
        for (std::size_t x = 0; x < m; ++x) {
          int y = static_cast<int>(x);
          for (int k = 0; k < order; ++k) y = images[s][images[t][y]];
          if (y != static_cast<int>(x)) throw InputError("generator permutations violate a Coxeter relation");
        }
      }
    Subgroup out;
    out.kind = Kind::user_supplied;
    out.images = images;
    out.quotient = FiniteQuotient(std::move(images));
    return out;
  }

  static Subgroup factors(const CoxeterSystem& sys) {
    const int n = sys.rank();
    std::vector<int> comp(n, -1);
    int count = 0;
    for (int s = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<int> stack{s};
      comp[s] = count;
      while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        for (int b = 0; b < n; ++b)
          if (comp[b] < 0 && !sys.commute(static_cast<Gen>(a), static_cast<Gen>(b))) {
            comp[b] = count;
            stack.push_back(b);
          }
      }
      ++count;
    }
    for (int s = 0; s < n; ++s)
      for (int t = s + 1; t < n; ++t)
        if (comp[s] == comp[t] && sys.order(static_cast<Gen>(s), static_cast<Gen>(t)) != kInfinity)
          throw InputError("factor kind needs a product of free Coxeter groups");
    Subgroup out;
    out.kind = Kind::factor;
    out.factor_of = comp;
    return out;
  }
};

inline Subgroup subgroup_from_json(const CoxeterSystem& sys, const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "racg-kernel") return Subgroup::racg_kernel(sys);
    if (kind == "factor") return Subgroup::factors(sys);
    if (kind == "user-supplied") {
      std::vector<Perm> images;
      for (const auto& l : sys.labels()) images.push_back(j.at("images").at(l).get<Perm>());
      return Subgroup::user_supplied(sys, std::move(images));
    }
    throw InputError("unknown subgroup kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad subgroup: ") + e.what());
  }
}

inline nlohmann::json to_json(const CoxeterSystem& sys, const Subgroup& W0) {
  switch (W0.kind) {
    case Subgroup::Kind::racg_kernel:
      return {{"kind", "racg-kernel"}};
    case Subgroup::Kind::factor:
      return {{"kind", "factor"}};
    case Subgroup::Kind::user_supplied: {
      nlohmann::json im = nlohmann::json::object();
      for (int s = 0; s < sys.rank(); ++s) im[sys.label(static_cast<Gen>(s))] = W0.images[s];
      return {{"kind", "user-supplied"}, {"images", im}};
    }
  }
  return {};
}

// A vertex of T_i is the set of class-i walls separating it from the identity chamber; an edge is its wall.
struct TreeResidue {
  int tree = 0;
  bool edge = false;
  std::vector<Element> walls;

  friend bool operator==(const TreeResidue&, const TreeResidue&) = default;
  friend auto operator<=>(const TreeResidue& a, const TreeResidue& b) {
    if (a.tree != b.tree) return a.tree <=> b.tree;
    if (a.edge != b.edge) return a.edge <=> b.edge;
    return std::lexicographical_compare_three_way(a.walls.begin(), a.walls.end(), b.walls.begin(), b.walls.end());
  }
};

struct TreeCheck {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  bool connected = false;
  bool consistent_edges = true;
  bool ok() const { return connected && consistent_edges && edges + 1 == vertices; }
};

// Trees T_1..T_l: one per W0-orbit of walls, edges the walls of the orbit.
class TreeSystem {
 public:
  TreeSystem(const CoxeterComplex& X, Subgroup W0) : X_(&X), W0_(std::move(W0)) {
    const int n = X.rank();
    if (W0_.kind == Subgroup::Kind::factor) {
      l_ = *std::max_element(W0_.factor_of.begin(), W0_.factor_of.end()) + 1;
      for (int i = 0; i < l_; ++i) rep_.push_back({0, static_cast<Gen>(std::find(W0_.factor_of.begin(), W0_.factor_of.end(), i) - W0_.factor_of.begin())});
      return;
    }
    const int Q = W0_.quotient.size();
    parent_.resize(static_cast<std::size_t>(Q) * n);
    std::iota(parent_.begin(), parent_.end(), 0);
    const auto& G = X.group();
    // same wall: (c,s) ~ (cs,s), and (c,s) ~ (cx,s') for x in a finite rank-2 parabolic with x s' x^{-1} = s
    for (int q = 0; q < Q; ++q)
      for (int s = 0; s < n; ++s) {
        unite(node(q, s), node(W0_.quotient.times_generator(q, static_cast<Gen>(s)), s));
        for (int r = 0; r < n; ++r) {
          if (r == s) continue;
          const TypeSet J = (TypeSet{1} << s) | (TypeSet{1} << r);
          if (!X.spherical(J)) continue;
          const Element gs = G.generator(static_cast<Gen>(s));
          for (const Element& x : X.parabolic(J))
            for (int s2 : {s, r}) {
              if (G.conjugate(x, G.generator(static_cast<Gen>(s2))) != gs) continue;
              unite(node(q, s), node(W0_.quotient.multiply(q, W0_.quotient.of(x.word)), s2));
            }
        }
      }
    std::map<int, int> ids;
    for (int q = 0; q < Q; ++q)
      for (int s = 0; s < n; ++s) {
        const int root = find(node(q, s));
        if (ids.emplace(root, static_cast<int>(ids.size())).second) rep_.push_back({q, static_cast<Gen>(s)});
      }
    class_id_.resize(parent_.size());
    for (std::size_t v = 0; v < parent_.size(); ++v) class_id_[v] = ids.at(find(static_cast<int>(v)));
    l_ = static_cast<int>(ids.size());
  }

  const CoxeterComplex& complex() const noexcept { return *X_; }
  const Subgroup& subgroup() const noexcept { return W0_; }
  int size() const noexcept { return l_; }
  int index() const { return W0_.index(); }

  int coset(const Element& w) const { return W0_.quotient.of(w.word); }

  int class_of(const Element& c, Gen s) const {
    if (W0_.kind == Subgroup::Kind::factor) return W0_.factor_of[s];
    return class_id_[node(coset(c), s)];
  }

  int class_of_wall(const Element& t) const {
    auto [c, s] = wall_rep(t);
    return class_of(c, s);
  }

  // t = c s c^{-1}, by conjugating t down along left descents.
  std::pair<Element, Gen> wall_rep(const Element& t) const {
    const auto& G = X_->group();
    Element c = G.identity(), u = t;
    while (u.length() > 1) {
      bool found = false;
      for (int s = 0; s < X_->rank() && !found; ++s) {
        const Gen g = static_cast<Gen>(s);
        if (!G.is_left_descent(g, u.word)) continue;
        Element v = G.conjugate(G.generator(g), u);
        if (v.length() + 2 == u.length()) {
          c = G.multiply(c, G.generator(g));
          u = std::move(v);
          found = true;
        }
      }
      if (!found) throw InvariantViolation(G.format(t) + " is not a reflection");
    }
    if (u.length() != 1) throw InvariantViolation(G.format(t) + " is not a reflection");
    return {c, u.word.front()};
  }

  // sigma_w: the tree carrying w*H for H in tree i.
  std::vector<int> permutation(const Element& w) const {
    std::vector<int> out(l_);
    if (W0_.kind == Subgroup::Kind::factor) {
      std::iota(out.begin(), out.end(), 0);
      return out;
    }
    const int qw = coset(w);
    for (int i = 0; i < l_; ++i) out[i] = class_id_[node(W0_.quotient.multiply(qw, rep_[i].first), rep_[i].second)];
    return out;
  }

  // p_i(x,R) = sum over class-i walls of |sigma(x) - sigma(R)|, twice the tree root-distance.
  std::vector<int> positions(const Residue& x, const Residue& R) const {
    std::vector<int> p(l_, 0);
    for (const auto& [t, rep] : X_->separating_wall_reps(x, R))
      p[class_of(rep.first, rep.second)] += std::abs(X_->sign(t, x) - X_->sign(t, R));
    return p;
  }

  TreeResidue psi(int i, const Residue& R) const {
    TreeResidue out{i, false, {}};
    for (const auto& lr : X_->reflections(R.J)) {
      const Element c = X_->group().multiply(R.base, lr.v);
      if (class_of(c, lr.s) != i) continue;
      const Element t = X_->group().conjugate(R.base, lr.reflection);
      if (out.edge && out.walls.front() != t) throw InvariantViolation("residue cut by two walls of one tree");
      out.edge = true;
      out.walls = {t};
    }
    if (out.edge) return out;
    std::map<Element, std::pair<Element, Gen>> reps;
    X_->wall_reps_between(X_->group().identity(), R.base, reps);
    for (const auto& [t, rep] : reps)
      if (class_of(rep.first, rep.second) == i) out.walls.push_back(t);
    return out;
  }

  std::vector<TreeResidue> psi(const Residue& R) const {
    std::vector<TreeResidue> out;
    for (int i = 0; i < l_; ++i) out.push_back(psi(i, R));
    return out;
  }

  // Vertices from chambers of the ball, edges from class-i walls between adjacent ball chambers.
  TreeCheck check_tree(int i, int radius) const {
    const auto& G = X_->group();
    auto ball = G.ball(radius);
    std::set<Element> in_ball(ball.begin(), ball.end());
    std::map<TreeResidue, int> vid;
    std::map<Element, std::pair<int, int>> edges;
    TreeCheck out;
    auto vertex = [&](const Element& c) {
      return vid.emplace(psi(i, X_->chamber(c)), static_cast<int>(vid.size())).first->second;
    };
    for (const Element& c : ball) vertex(c);
    for (const Element& c : ball)
      for (int s = 0; s < X_->rank(); ++s) {
        const Element d = G.multiply(c, G.generator(static_cast<Gen>(s)));
        if (!in_ball.count(d) || class_of(c, static_cast<Gen>(s)) != i) continue;
        std::pair<int, int> e = std::minmax(vertex(c), vertex(d));
        auto [it, fresh] = edges.emplace(G.conjugate(c, G.generator(static_cast<Gen>(s))), e);
        if (!fresh && it->second != e) out.consistent_edges = false;
        if (e.first == e.second) out.consistent_edges = false;
      }
    out.vertices = vid.size();
    out.edges = edges.size();
    std::vector<int> comp(out.vertices);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> root = [&](int v) { return comp[v] == v ? v : comp[v] = root(comp[v]); };
    for (const auto& [t, e] : edges) comp[root(e.first)] = root(e.second);
    std::set<int> roots;
    for (std::size_t v = 0; v < out.vertices; ++v) roots.insert(root(static_cast<int>(v)));
    out.connected = roots.size() == 1;
    return out;
  }

  // Elements g of W0 in a ball moving a wall H must move it off itself: the product of the two
  // reflections has infinite order. Returns the number of violations.
  std::size_t wall_disjointness_violations(int group_radius, int wall_radius) const {
    const auto& G = X_->group();
    int max_order = 2;
    for (int s = 0; s < X_->rank(); ++s)
      for (int r = 0; r < X_->rank(); ++r) max_order = std::max(max_order, X_->system().order(static_cast<Gen>(s), static_cast<Gen>(r)));
    auto walls = G.reflections_in_ball(wall_radius);
    std::size_t bad = 0;
    for (const Element& g : G.ball(group_radius)) {
      if (!W0_.contains(g) || g.is_identity()) continue;
      for (const Element& t : walls) {
        const Element u = G.multiply(t, G.conjugate(g, t));
        if (u.is_identity()) continue;
        Element p = u;
        for (int k = 2; k <= 2 * max_order && !p.is_identity(); ++k) p = G.multiply(p, u);
        if (p.is_identity()) ++bad;
      }
    }
    return bad;
  }

  // A shortest element in every coset of W0.
  std::vector<Element> coset_representatives(int max_radius = 16) const {
    if (W0_.kind == Subgroup::Kind::factor) return {X_->group().identity()};
    std::map<int, Element> found;
    for (int r = 0; r <= max_radius && static_cast<int>(found.size()) < index(); ++r)
      for (const Element& w : X_->group().ball(r)) found.emplace(coset(w), w);
    if (static_cast<int>(found.size()) != index()) throw CapExceeded("coset representatives not found in ball");
    std::vector<Element> out;
    for (auto& [q, w] : found) out.push_back(w);
    return out;
  }

 private:
  int node(int q, int s) const { return q * X_->rank() + s; }
  int find(int v) { return parent_[v] == v ? v : parent_[v] = find(parent_[v]); }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

  const CoxeterComplex* X_ = nullptr;
  Subgroup W0_;
  int l_ = 0;
  std::vector<int> parent_;
  std::vector<int> class_id_;
  std::vector<std::pair<int, Gen>> rep_;
};

// A half-tree of T_i: one side of the edge `wall`, `near` being the side of the identity vertex.
struct TreeRoot {
  int tree = 0;
  Element wall;
  bool near = true;

  friend bool operator==(const TreeRoot&, const TreeRoot&) = default;
  friend auto operator<=>(const TreeRoot& a, const TreeRoot& b) {
    if (a.tree != b.tree) return a.tree <=> b.tree;
    if (auto c = a.wall <=> b.wall; c != 0) return c;
    return a.near <=> b.near;
  }
};

inline TreeRoot Psi(const TreeSystem& ts, const Root& a) { return {ts.class_of_wall(a.reflection), a.reflection, a.positive}; }

inline Root Psi_inverse(const TreeRoot& h) { return {h.wall, h.near}; }

inline bool vertex_in_half_tree(const TreeRoot& h, const TreeResidue& v) {
  if (v.tree != h.tree || v.edge) throw InputError("not a vertex of the tree of the half-tree");
  return (std::find(v.walls.begin(), v.walls.end(), h.wall) == v.walls.end()) == h.near;
}

// w.h for the action of W on the trees through psi(R) -> psi(wR): the half-tree of T_{sigma_w(i)}
// cut by w t w^{-1} containing the image of a vertex of h.
inline TreeRoot act(const TreeSystem& ts, const Element& w, const TreeRoot& h) {
  const auto& G = ts.complex().group();
  const Element c = h.near ? G.identity() : h.wall;
  TreeRoot out{ts.permutation(w)[h.tree], G.conjugate(w, h.wall), true};
  out.near = vertex_in_half_tree({out.tree, out.wall, true}, ts.psi(out.tree, ts.complex().chamber(G.multiply(w, c))));
  return out;
}

// phi_i(xi): the limit vertex or edge of psi_i(x_k), or an end of T_i given by the half-trees
// (with wall in a ball) eventually containing psi_i(x_k).
struct TreeBoundaryPoint {
  int tree = 0;
  bool end = false;
  TreeResidue limit;
  std::vector<TreeRoot> half_trees;

  friend bool operator==(const TreeBoundaryPoint&, const TreeBoundaryPoint&) = default;
};

inline std::vector<TreeBoundaryPoint> phi_boundary(const TreeSystem& ts, const Direction& xi, int wall_radius, int horizon) {
  const auto& X = ts.complex();
  const auto& G = X.group();
  const Residue origin = X.chamber(G.identity());
  std::vector<Residue> window;
  for (int k = horizon / 2; k <= horizon; ++k) window.push_back(residue_at(X, xi, k));
  const auto first = ts.positions(origin, window.front()), mid = ts.positions(origin, window[window.size() / 2]),
             last = ts.positions(origin, window.back());
  std::vector<TreeBoundaryPoint> out(ts.size());
  for (int i = 0; i < ts.size(); ++i) {
    out[i].tree = i;
    out[i].end = first[i] < mid[i] && mid[i] < last[i];
    out[i].limit = {i, false, {}};
  }
  // the limit: class-i walls with a settled side, an edge when one of them keeps cutting x_k
  for (const auto& [t, rep] : X.separating_wall_reps(origin, window.back())) {
    const int i = ts.class_of(rep.first, rep.second), e = X.sign(t, window.back());
    if (out[i].end) continue;
    bool stable = true;
    for (const Residue& R : window) stable = stable && X.sign(t, R) == e;
    if (!stable) continue;
    if (e == 0) {
      out[i].limit.edge = true;
      out[i].limit.walls = {t};
    } else if (!out[i].limit.edge) {
      out[i].limit.walls.push_back(t);
    }
  }
  for (auto& p : out) std::sort(p.limit.walls.begin(), p.limit.walls.end());
  for (const Root& a : phi_of(X, xi, wall_radius, horizon).roots) {
    const TreeRoot h = Psi(ts, a);
    out[h.tree].half_trees.push_back(h);
  }
  return out;
}

}  // namespace coxbound
