#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "coxbound/geometry/complex.hpp"

namespace coxbound {

// One letter of the graph product: generator s raised to e in Z/q_s, 0 < e < q_s.
struct Syllable {
  Gen s = 0;
  int e = 1;

  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

using Chamber = std::vector<Syllable>;

// A spherical residue C*G_J of the building, with C its shortest chamber.
struct BuildingResidue {
  Chamber base;
  TypeSet J = 0;

  friend auto operator<=>(const BuildingResidue&, const BuildingResidue&) = default;
};

// Right-angled building of the graph product of the cyclic groups Z/q_s.
class GraphProductBuilding {
 public:
  GraphProductBuilding(CoxeterSystem sys, std::vector<int> q) : complex_(std::move(sys)), q_(std::move(q)) {
    if (!system().is_right_angled()) throw InputError("graph-product buildings need a right-angled system");
    if (static_cast<int>(q_.size()) != rank()) throw InputError("one thickness per generator is required");
    for (int v : q_)
      if (v < 2) throw InputError("thickness must be at least 2");
  }

  const CoxeterComplex& complex() const noexcept { return complex_; }
  const CoxeterGroup& group() const noexcept { return complex_.group(); }
  const CoxeterSystem& system() const noexcept { return complex_.system(); }
  int rank() const noexcept { return complex_.rank(); }
  int thickness(Gen s) const { return q_.at(s); }
  const std::vector<int>& thicknesses() const noexcept { return q_; }
  bool thin() const {
    return std::all_of(q_.begin(), q_.end(), [](int v) { return v == 2; });
  }

  Chamber identity() const { return {}; }

  // Reduces any syllable word (exponents taken mod q_s) and returns the shuffled normal form.
  Chamber normal_form(const std::vector<Syllable>& word) const {
    Chamber out;
    for (const Syllable& x : word) {
      if (x.s >= rank()) throw InputError("syllable color out of range");
      append(out, {x.s, ((x.e % q_[x.s]) + q_[x.s]) % q_[x.s]});
    }
    return shuffle(out);
  }

  Chamber multiply(const Chamber& a, const Chamber& b) const {
    Chamber w = a;
    for (const Syllable& x : b) append(w, x);
    return shuffle(w);
  }

  Chamber inverse(const Chamber& a) const {
    Chamber w;
    for (auto it = a.rbegin(); it != a.rend(); ++it) w.push_back({it->s, q_[it->s] - it->e});
    return shuffle(w);
  }

  Chamber generator(Gen s, int e = 1) const { return normal_form({{s, e}}); }

  // Standard lift of W: every letter becomes exponent e.
  Chamber lift(const Element& w, int e = 1) const {
    std::vector<Syllable> word;
    for (Gen s : w.word) word.push_back({s, e});
    return normal_form(word);
  }

  Element color(const Chamber& c) const {
    Word w;
    for (const Syllable& x : c) w.push_back(x.s);
    return group().normalize(w);
  }

  Element delta(const Chamber& c, const Chamber& d) const { return color(multiply(inverse(c), d)); }

  // The q_s chambers of the s-panel through c, c included.
  std::vector<Chamber> panel(const Chamber& c, Gen s) const {
    std::vector<Chamber> out;
    for (int e = 0; e < q_[s]; ++e) out.push_back(multiply(c, e ? generator(s, e) : Chamber{}));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Chambers whose normal form has at most `radius` syllables.
  std::vector<Chamber> ball(int radius, std::size_t cap = kDefaultBallCap) const {
    std::set<Chamber> seen{identity()};
    std::vector<Chamber> frontier{identity()};
    for (int r = 0; r < radius; ++r) {
      std::vector<Chamber> next;
      for (const Chamber& c : frontier)
        for (int s = 0; s < rank(); ++s)
          for (int e = 1; e < q_[s]; ++e) {
            Chamber d = multiply(c, generator(static_cast<Gen>(s), e));
            if (d.size() != c.size() + 1 || !seen.insert(d).second) continue;
            if (seen.size() > cap) throw CapExceeded("building ball exceeds " + std::to_string(cap) + " chambers");
            next.push_back(std::move(d));
          }
      frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
  }

  BuildingResidue residue(const Chamber& c, TypeSet J) const {
    complex_.parabolic(J);
    Chamber w = c;
    for (std::size_t i = w.size(); i-- > 0;)
      if ((J >> w[i].s & 1) && removable_right(w, i)) w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
    return {std::move(w), J};
  }

  BuildingResidue chamber(const Chamber& c) const { return {c, 0}; }

  std::vector<Chamber> chambers(const BuildingResidue& R) const {
    std::vector<Chamber> out{R.base};
    for (int s = 0; s < rank(); ++s) {
      if (!(R.J >> s & 1)) continue;
      std::vector<Chamber> next;
      for (const Chamber& c : out)
        for (int e = 0; e < q_[s]; ++e) next.push_back(e ? multiply(c, generator(static_cast<Gen>(s), e)) : c);
      out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool contains(const BuildingResidue& R, const Chamber& c) const { return residue(c, R.J) == R; }

  BuildingResidue translate(const Chamber& g, const BuildingResidue& R) const {
    return residue(multiply(g, R.base), R.J);
  }

  // Chamber of R nearest to d.
  Chamber gate(const BuildingResidue& R, const Chamber& d) const {
    Chamber u = multiply(inverse(R.base), d), lead;
    for (bool moved = true; moved;) {
      moved = false;
      for (std::size_t i = 0; i < u.size(); ++i)
        if ((R.J >> u[i].s & 1) && removable_left(u, i)) {
          lead.push_back(u[i]);
          u.erase(u.begin() + static_cast<std::ptrdiff_t>(i));
          moved = true;
          break;
        }
    }
    return multiply(R.base, normal_form(lead));
  }

  // The chamber at Weyl distance w from c on a minimal gallery from c to d; w must be a prefix of delta(c,d).
  Chamber on_gallery(const Chamber& c, const Chamber& d, const Element& w) const {
    Chamber u = multiply(inverse(c), d), taken;
    for (Gen s : w.word) {
      std::size_t i = 0;
      while (i < u.size() && !(u[i].s == s && removable_left(u, i))) ++i;
      if (i == u.size()) throw InvariantViolation(group().format(w) + " is not a prefix of the Weyl distance");
      taken.push_back(u[i]);
      u.erase(u.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return multiply(c, normal_form(taken));
  }

  // Chamber strings: "s1.t2" (label followed by exponent, "s3^1" when the label ends in a digit), "e" for the identity.
  Chamber parse(const std::string& text) const {
    if (text.empty() || text == "e" || text == "1") return identity();
    std::vector<Syllable> word;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t dot = std::min(text.find('.', pos), text.size());
      const std::string tok = text.substr(pos, dot - pos);
      std::size_t k = tok.find('^'), skip = 1;
      if (k == std::string::npos) {
        for (k = tok.size(), skip = 0; k > 0 && std::isdigit(static_cast<unsigned char>(tok[k - 1]));) --k;
      }
      if (k == 0 || k + skip >= tok.size()) throw InputError("bad syllable '" + tok + "' in chamber '" + text + "'");
      const Gen s = system().index_of(tok.substr(0, k));
      const int e = std::stoi(tok.substr(k + skip));
      if (e <= 0 || e >= q_[s]) throw InputError("exponent out of range in '" + tok + "'");
      word.push_back({s, e});
      pos = dot + 1;
    }
    return normal_form(word);
  }

  std::string format(const Chamber& c) const {
    if (c.empty()) return "e";
    std::string out;
    for (const Syllable& x : c) {
      if (!out.empty()) out += '.';
      const std::string& l = system().label(x.s);
      out += l + (std::isdigit(static_cast<unsigned char>(l.back())) ? "^" : "") + std::to_string(x.e);
    }
    return out;
  }

  std::string format(const BuildingResidue& R) const {
    std::string out = format(R.base) + " {";
    bool first = true;
    for (int s = 0; s < rank(); ++s)
      if (R.J >> s & 1) {
        out += (first ? "" : ",") + system().label(static_cast<Gen>(s));
        first = false;
      }
    return out + "}";
  }

  nlohmann::json to_json(const BuildingResidue& R) const {
    std::vector<std::string> type;
    for (int s = 0; s < rank(); ++s)
      if (R.J >> s & 1) type.push_back(system().label(static_cast<Gen>(s)));
    return {{"chamber", format(R.base)}, {"type", type}};
  }

  BuildingResidue residue_from_json(const nlohmann::json& j) const {
    try {
      TypeSet J = 0;
      for (const auto& l : j.value("type", std::vector<std::string>{})) J |= TypeSet{1} << system().index_of(l);
      if (!complex_.spherical(J)) throw InputError("residue type is not spherical");
      return residue(parse(j.at("chamber").get<std::string>()), J);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("bad residue: ") + e.what());
    }
  }

  nlohmann::json spec_json() const {
    nlohmann::json th;
    for (int s = 0; s < rank(); ++s) th[system().label(static_cast<Gen>(s))] = q_[s];
    return {{"coxeter", coxbound::to_json(system())}, {"thickness", th}};
  }

 private:
  CoxeterComplex complex_;
  std::vector<int> q_;

  bool removable_right(const Chamber& w, std::size_t i) const {
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (!system().commute(w[i].s, w[j].s) || w[i].s == w[j].s) return false;
    return true;
  }

  bool removable_left(const Chamber& w, std::size_t i) const {
    for (std::size_t j = 0; j < i; ++j)
      if (!system().commute(w[i].s, w[j].s) || w[i].s == w[j].s) return false;
    return true;
  }

  // Appends a syllable to a reduced word, merging with a same-colored syllable it can reach.
  void append(Chamber& w, Syllable x) const {
    if (x.e == 0) return;
    for (std::size_t i = w.size(); i-- > 0;) {
      if (w[i].s == x.s) {
        const int e = (w[i].e + x.e) % q_[x.s];
        if (e != 0) {
          w[i].e = e;
          return;
        }
        Chamber tail(w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
        w.resize(i);
        for (const Syllable& y : tail) append(w, y);
        return;
      }
      if (!system().commute(w[i].s, x.s)) break;
    }
    w.push_back(x);
  }

  // Lexicographically least reordering by color among commutation-equivalent words.
  Chamber shuffle(const Chamber& w) const {
    const std::size_t n = w.size();
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<int> indeg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (w[i].s == w[j].s || !system().commute(w[i].s, w[j].s)) {
          succ[i].push_back(j);
          ++indeg[j];
        }
    using Item = std::pair<Gen, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] == 0) ready.push({w[i].s, i});
    Chamber out;
    out.reserve(n);
    while (!ready.empty()) {
      auto [g, i] = ready.top();
      ready.pop();
      out.push_back(w[i]);
      for (std::size_t j : succ[i])
        if (--indeg[j] == 0) ready.push({w[j].s, j});
    }
    return out;
  }
};

inline GraphProductBuilding building_from_json(const nlohmann::json& j) {
  try {
    CoxeterSystem sys = coxeter_from_json(j.at("coxeter"));
    std::vector<int> q(sys.rank(), 2);
    if (j.contains("thickness"))
      for (const auto& [label, v] : j.at("thickness").items()) q.at(sys.index_of(label)) = v.get<int>();
    return GraphProductBuilding(std::move(sys), std::move(q));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad building: ") + e.what());
  }
}

// ---- axioms ----

using WeylDistance = std::function<Element(const Chamber&, const Chamber&)>;

struct AxiomReport {
  long pairs = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Exhaustive check, on a ball, of: delta(C,D) = 1 iff C = D; for C' s-adjacent to C,
// delta(C',D) is s*delta(C,D) or delta(C,D), and is s*delta when that is longer; some C' realizes s*delta.
inline AxiomReport check_building_axioms(const GraphProductBuilding& b, int radius, WeylDistance delta = {},
                                         std::size_t max_reports = 20) {
  if (!delta) delta = [&b](const Chamber& c, const Chamber& d) { return b.delta(c, d); };
  const auto& G = b.group();
  AxiomReport rep;
  auto report = [&](std::string msg) {
    if (rep.violations.size() < max_reports) rep.violations.push_back(std::move(msg));
  };
  const auto chambers = b.ball(radius);
  std::vector<std::vector<std::vector<Chamber>>> panels(chambers.size());
  for (std::size_t i = 0; i < chambers.size(); ++i)
    for (int s = 0; s < b.rank(); ++s) panels[i].push_back(b.panel(chambers[i], static_cast<Gen>(s)));
  for (std::size_t i = 0; i < chambers.size(); ++i)
    for (const Chamber& D : chambers) {
      const Chamber& C = chambers[i];
      ++rep.pairs;
      const Element w = delta(C, D);
      if (w.is_identity() != (C == D)) report("(i) fails at " + b.format(C) + ", " + b.format(D));
      for (int s = 0; s < b.rank(); ++s) {
        const Element sw = G.multiply(G.generator(static_cast<Gen>(s)), w);
        const bool longer = sw.length() > w.length();
        bool realized = false;
        for (const Chamber& Cp : panels[i][s]) {
          const Element v = delta(Cp, D);
          realized = realized || v == sw;
          if (Cp == C) continue;
          if (!(v == sw || v == w) || (longer && v != sw))
            report("(ii) fails at " + b.format(Cp) + " ~" + G.system().label(static_cast<Gen>(s)) + " " + b.format(C) +
                   ", " + b.format(D));
        }
        if (!realized) report("(iii) fails at " + b.format(C) + ", " + b.format(D) + ", " + G.system().label(static_cast<Gen>(s)));
      }
    }
  return rep;
}

// ---- apartments ----

// beta: ball of W -> chambers, a W-isometry onto part of an apartment.
struct ApartmentChart {
  Chamber base;
  int radius = 0;
  std::map<Element, Chamber> beta;
  std::map<Chamber, Element> inverse;

  const Chamber& at(const Element& w) const {
    auto it = beta.find(w);
    if (it == beta.end()) throw CapExceeded("element outside the apartment chart");
    return it->second;
  }

  std::optional<Element> locate(const Chamber& c) const {
    auto it = inverse.find(c);
    if (it == inverse.end()) return std::nullopt;
    return it->second;
  }
};

inline bool validate_chart(const GraphProductBuilding& b, const ApartmentChart& A) {
  const auto& G = b.group();
  for (const auto& [u, cu] : A.beta)
    for (const auto& [v, cv] : A.beta)
      if (b.delta(cu, cv) != G.multiply(G.inverse(u), v)) return false;
  return true;
}

// Largest common prefix of u and v in the weak order.
inline Element weak_meet(const CoxeterGroup& G, const Element& u, const Element& v) {
  Element m = G.identity();
  Element a = u, b = v;
  for (bool grew = true; grew;) {
    grew = false;
    for (int s = 0; s < G.rank(); ++s) {
      const Gen g = static_cast<Gen>(s);
      if (G.is_left_descent(g, a.word) && G.is_left_descent(g, b.word)) {
        m = G.multiply(m, G.generator(g));
        a = G.multiply(G.generator(g), a);
        b = G.multiply(G.generator(g), b);
        grew = true;
        break;
      }
    }
  }
  return m;
}

// Chart through C and D: along a minimal gallery to D, then the standard lift with exponent e off it.
inline ApartmentChart find_apartment(const GraphProductBuilding& b, const Chamber& C, const Chamber& D, int radius) {
  const auto& G = b.group();
  const Element d = b.delta(C, D);
  const int r = std::max<int>(radius, static_cast<int>(d.length()));
  const auto ball = G.ball(r);
  int max_q = 2;
  for (int q : b.thicknesses()) max_q = std::max(max_q, q);
  for (int e = 1; e < max_q; ++e) {
    ApartmentChart A{C, r, {}, {}};
    for (const Element& w : ball) {
      const Element m = weak_meet(G, w, d);
      std::vector<Syllable> rest;
      for (Gen s : G.multiply(G.inverse(m), w).word) rest.push_back({s, std::min(e, b.thickness(s) - 1)});
      Chamber c = b.multiply(b.on_gallery(C, D, m), b.normal_form(rest));
      A.inverse.emplace(c, w);
      A.beta.emplace(w, std::move(c));
    }
    if (A.inverse.size() == A.beta.size() && validate_chart(b, A)) return A;
  }
  throw InvariantViolation("no apartment chart through " + b.format(C) + " and " + b.format(D) + " validated");
}

// Retraction onto the chart centered at c: the chamber of the chart at the same Weyl distance from c as d.
inline Chamber retraction(const GraphProductBuilding& b, const ApartmentChart& A, const Chamber& c, const Chamber& d) {
  const auto u = A.locate(c);
  if (!u) throw InputError("retraction center " + b.format(c) + " is not in the chart");
  return A.at(b.group().multiply(*u, b.delta(c, d)));
}

}  // namespace coxbound
