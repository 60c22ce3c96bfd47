#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coxbound/coxeter/group.hpp"

namespace coxbound {

// Spherical residue base*W_J, with base the unique shortest chamber.
struct Residue {
  Element base;
  TypeSet J = 0;

  friend bool operator==(const Residue&, const Residue&) = default;
  friend std::strong_ordering operator<=>(const Residue& a, const Residue& b) {
    if (auto c = a.base <=> b.base; c != 0) return c;
    return a.J <=> b.J;
  }
};

struct ResidueHash {
  std::size_t operator()(const Residue& r) const noexcept {
    return ElementHash{}(r.base) * 31u + r.J;
  }
};

// A reflection of a spherical parabolic written as v s v^{-1}.
struct LocalReflection {
  Element reflection;
  Element v;
  Gen s = 0;
};

// Coxeter complex of (W,S): chambers are group elements.
class CoxeterComplex {
 public:
  CoxeterComplex() = default;

  explicit CoxeterComplex(CoxeterSystem sys) : group_(std::move(sys)) {
    if (group_.rank() > 16) throw InputError("rank above 16 is not supported by the complex");
    collect_spherical(0, 0);
    std::sort(spherical_types_.begin(), spherical_types_.end(), [](TypeSet a, TypeSet b) {
      return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b;
    });
    for (TypeSet J : spherical_types_) {
      auto& refl = reflections_[J];
      std::set<Element> seen;
      for (const Element& v : parabolics_.at(J))
        for (int s = 0; s < rank(); ++s) {
          if (!(J >> s & 1)) continue;
          Element t = group_.conjugate(v, group_.generator(static_cast<Gen>(s)));
          if (seen.insert(t).second) refl.push_back({t, v, static_cast<Gen>(s)});
        }
      std::sort(refl.begin(), refl.end(),
                [](const LocalReflection& a, const LocalReflection& b) { return a.reflection < b.reflection; });
      max_reflections_ = std::max(max_reflections_, refl.size());
    }
  }

  const CoxeterGroup& group() const noexcept { return group_; }
  const CoxeterSystem& system() const noexcept { return group_.system(); }
  int rank() const noexcept { return group_.rank(); }

  bool spherical(TypeSet J) const { return parabolics_.count(J) != 0; }
  const std::vector<TypeSet>& spherical_types() const noexcept { return spherical_types_; }
  std::size_t max_reflections() const noexcept { return max_reflections_; }

  const std::vector<Element>& parabolic(TypeSet J) const {
    auto it = parabolics_.find(J);
    if (it == parabolics_.end()) throw InputError("type set is not spherical (W_J exceeds 10000 elements)");
    return it->second;
  }

  const std::vector<LocalReflection>& reflections(TypeSet J) const {
    parabolic(J);
    return reflections_.at(J);
  }

  Residue residue(const Element& c, TypeSet J) const {
    parabolic(J);
    Word w = c.word;
    for (bool changed = true; changed;) {
      changed = false;
      for (int s = 0; s < rank(); ++s)
        if ((J >> s & 1) && group_.is_right_descent(w, static_cast<Gen>(s))) {
          w = group_.right_mul(std::move(w), static_cast<Gen>(s));
          changed = true;
        }
    }
    return Residue{group_.normalize(w), J};
  }

  Residue chamber(const Element& c) const { return Residue{c, 0}; }

  std::vector<Element> chambers(const Residue& R) const {
    if (R.J == 0) return {R.base};
    if (auto it = chambers_memo_.find(R); it != chambers_memo_.end()) return it->second;
    std::vector<Element> out;
    for (const Element& v : parabolic(R.J)) out.push_back(group_.multiply(R.base, v));
    std::sort(out.begin(), out.end());
    if (chambers_memo_.size() > kMemoCap) chambers_memo_.clear();
    chambers_memo_.emplace(R, out);
    return out;
  }

  bool contains(const Residue& R, const Element& c) const {
    const Element u = group_.multiply(group_.inverse(R.base), c);
    for (Gen g : u.word)
      if (!(R.J >> g & 1)) return false;
    return true;
  }

  // Every chamber of R has length <= radius.
  bool in_ball(const Residue& R, int radius) const {
    for (const Element& c : chambers(R))
      if (static_cast<int>(c.length()) > radius) return false;
    return true;
  }

  std::vector<Residue> residues_in_ball(int radius, std::size_t cap = kDefaultBallCap) const {
    std::set<Residue> out;
    for (const Element& c : group_.ball(radius, cap))
      for (TypeSet J : spherical_types_) {
        Residue R = residue(c, J);
        if (R.base == c && in_ball(R, radius)) out.insert(R);
      }
    return {out.begin(), out.end()};
  }

  Residue translate(const Element& w, const Residue& R) const { return residue(group_.multiply(w, R.base), R.J); }

  // +1: R lies on the identity side of the wall of t; -1: opposite side; 0: the wall cuts R.
  int sign(const Element& t, const Residue& R) const {
    bool plus = false, minus = false;
    for (const Element& c : chambers(R)) (chamber_sign(t, c) > 0 ? plus : minus) = true;
    return plus && minus ? 0 : (plus ? 1 : -1);
  }

  int chamber_sign(const Element& t, const Element& c) const {
    return group_.product_length(t.word, c.word) > c.length() ? 1 : -1;
  }

  // Reflections of the walls crossed by a minimal gallery from c to d.
  std::vector<Element> walls_between(const Element& c, const Element& d) const {
    const Element u = group_.multiply(group_.inverse(c), d);
    std::vector<Element> out;
    Element p = c;
    for (Gen s : u.word) {
      out.push_back(group_.conjugate(p, group_.generator(s)));
      p = group_.multiply(p, group_.generator(s));
    }
    return out;
  }

  std::vector<Element> cut_walls(const Residue& R) const {
    std::vector<Element> out;
    for (const auto& lr : reflections(R.J)) out.push_back(group_.conjugate(R.base, lr.reflection));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Walls crossed by a minimal gallery from c to d, each with a chamber c' and type s so that t = c' s c'^{-1}.
  void wall_reps_between(const Element& c, const Element& d, std::map<Element, std::pair<Element, Gen>>& out) const {
    const Element u = group_.multiply(group_.inverse(c), d);
    Element p = c;
    for (Gen s : u.word) {
      out.emplace(group_.conjugate(p, group_.generator(s)), std::pair{p, s});
      p = group_.multiply(p, group_.generator(s));
    }
  }

  std::map<Element, std::pair<Element, Gen>> separating_wall_reps(const Residue& R, const Residue& S) const {
    auto key = std::pair{R, S};
    if (auto it = walls_memo_.find(key); it != walls_memo_.end()) return it->second;
    std::map<Element, std::pair<Element, Gen>> out;
    for (const Element& r : chambers(R)) wall_reps_between(r, S.base, out);
    for (const Element& s : chambers(S)) wall_reps_between(R.base, s, out);
    if (walls_memo_.size() > kMemoCap) walls_memo_.clear();
    walls_memo_.emplace(std::move(key), out);
    return out;
  }

  // Every wall separating a chamber of R from a chamber of S.
  std::vector<Element> separating_walls(const Residue& R, const Residue& S) const {
    std::vector<Element> out;
    for (const auto& [t, rep] : separating_wall_reps(R, S)) out.push_back(t);
    return out;
  }

  // Roots meeting R but not S, and roots meeting S but not R.
  std::pair<std::vector<Root>, std::vector<Root>> separating_roots(const Residue& R, const Residue& S) const {
    std::vector<Root> rs, sr;
    for (const Element& t : separating_walls(R, S)) {
      const int a = sign(t, R), b = sign(t, S);
      for (bool positive : {true, false}) {
        const int side = positive ? 1 : -1;
        if ((a == side || a == 0) && b == -side) rs.push_back({t, positive});
        if ((b == side || b == 0) && a == -side) sr.push_back({t, positive});
      }
    }
    return {rs, sr};
  }

  // Twice the root-distance; an integer.
  int root_distance2(const Residue& R, const Residue& S) const {
    int total = 0;
    for (const Element& t : separating_walls(R, S)) total += std::abs(sign(t, R) - sign(t, S));
    return total;
  }

  int gallery_distance(const Element& c, const Element& d) const {
    return static_cast<int>(group_.multiply(group_.inverse(c), d).length());
  }

  Element project(const Residue& R, const Element& c) const {
    const auto ch = chambers(R);
    int best = -1;
    std::vector<Element> arg;
    for (const Element& r : ch) {
      const int d = gallery_distance(r, c);
      if (best < 0 || d < best) {
        best = d;
        arg = {r};
      } else if (d == best) {
        arg.push_back(r);
      }
    }
    if (arg.size() != 1) throw InvariantViolation("projection onto a residue is not unique");
    return arg.front();
  }

  Residue project_residue(const Residue& R, const Residue& S) const {
    std::set<Element> image;
    for (const Element& c : chambers(S)) image.insert(project(R, c));
    const Element base = *image.begin();
    TypeSet Jp = 0;
    for (int s = 0; s < rank(); ++s)
      if ((R.J >> s & 1) && image.count(group_.multiply(base, group_.generator(static_cast<Gen>(s)))))
        Jp |= TypeSet{1} << s;
    Residue out = residue(base, Jp);
    const auto ch = chambers(out);
    if (std::set<Element>(ch.begin(), ch.end()) != image)
      throw InvariantViolation("projection of a residue is not a residue");
    return out;
  }

  // R lies in Conv(x,y): on every wall, the side of R lies between the sides of x and y.
  bool between(const Residue& x, const Residue& y, const Residue& R) const {
    for (const Element& t : separating_walls(R, x)) {
      const int a = sign(t, x), b = sign(t, y), r = sign(t, R);
      if (r < std::min(a, b) || r > std::max(a, b)) return false;
    }
    return true;
  }

  std::vector<Residue> convex_hull(const Residue& x, const Residue& y, int radius) const {
    for (const Element& a : chambers(x))
      for (const Element& b : chambers(y))
        if (static_cast<int>(a.length()) + gallery_distance(a, b) > radius - 2)
          throw CapExceeded("ball too small for the convex hull");
    std::vector<Residue> out;
    for (const Residue& R : residues_in_ball(radius))
      if (between(x, y, R)) out.push_back(R);
    return out;
  }

  std::string format(const Residue& R) const {
    std::string out = group_.format(R.base) + " {";
    bool first = true;
    for (int s = 0; s < rank(); ++s)
      if (R.J >> s & 1) {
        out += (first ? "" : ",") + system().label(static_cast<Gen>(s));
        first = false;
      }
    return out + "}";
  }

  TypeSet parse_types(const nlohmann::json& labels) const {
    TypeSet J = 0;
    for (const auto& l : labels) J |= TypeSet{1} << system().index_of(l.get<std::string>());
    return J;
  }

  nlohmann::json type_labels(TypeSet J) const {
    nlohmann::json out = nlohmann::json::array();
    for (int s = 0; s < rank(); ++s)
      if (J >> s & 1) out.push_back(system().label(static_cast<Gen>(s)));
    return out;
  }

  nlohmann::json to_json(const Residue& R) const {
    return {{"base", group_.format(R.base)}, {"J", type_labels(R.J)}};
  }

  Residue residue_from_json(const nlohmann::json& j) const {
    try {
      return residue(group_.parse(j.at("base").get<std::string>()), parse_types(j.value("J", nlohmann::json::array())));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("bad residue: ") + e.what());
    }
  }

 private:
  void collect_spherical(TypeSet J, int from) {
    auto W = group_.parabolic(J);
    if (!W) return;
    parabolics_.emplace(J, std::move(*W));
    spherical_types_.push_back(J);
    for (int s = from; s < rank(); ++s) collect_spherical(J | (TypeSet{1} << s), s + 1);
  }

  CoxeterGroup group_;
  std::unordered_map<TypeSet, std::vector<Element>> parabolics_;
  std::unordered_map<TypeSet, std::vector<LocalReflection>> reflections_;
  std::vector<TypeSet> spherical_types_;
  std::size_t max_reflections_ = 0;

  static constexpr std::size_t kMemoCap = 1 << 16;
  mutable std::unordered_map<Residue, std::vector<Element>, ResidueHash> chambers_memo_;
  mutable std::map<std::pair<Residue, Residue>, std::map<Element, std::pair<Element, Gen>>> walls_memo_;
};

}  // namespace coxbound
