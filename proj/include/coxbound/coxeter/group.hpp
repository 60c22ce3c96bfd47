#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coxbound/coxeter/system.hpp"
#include "coxbound/errors.hpp"

namespace coxbound {

using Word = std::vector<Gen>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Gen g : w) {
      h ^= g;
      h *= 1099511628211ull;
    }
    return h ^ w.size();
  }
};

// ShortLex order: shorter first, then lexicographic on generator indices.
inline bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// A group element, always stored as its ShortLex normal form.
struct Element {
  Word word;

  std::size_t length() const noexcept { return word.size(); }
  bool is_identity() const noexcept { return word.empty(); }

  friend bool operator==(const Element&, const Element&) = default;
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) {
    if (a.word.size() != b.word.size()) return a.word.size() <=> b.word.size();
    return a.word <=> b.word;
  }
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept { return WordHash{}(e.word); }
};

// Half-space of the Coxeter complex. `positive` is the side containing the identity chamber.
struct Root {
  Element reflection;
  bool positive = true;

  Root opposite() const { return {reflection, !positive}; }
  friend bool operator==(const Root&, const Root&) = default;
  friend auto operator<=>(const Root& a, const Root& b) {
    if (auto c = a.reflection <=> b.reflection; c != 0) return c;
    return a.positive <=> b.positive;
  }
};

inline constexpr std::size_t kDefaultBallCap = 2'000'000;
inline constexpr std::size_t kParabolicCap = 10'000;
inline constexpr std::size_t kBraidClassCap = 200'000;

class CoxeterGroup {
 public:
  CoxeterGroup() = default;

  explicit CoxeterGroup(CoxeterSystem sys) : sys_(std::move(sys)) {
    ra_ = sys_.is_right_angled();
    const int n = sys_.rank();
    blocks_.assign(n, 0);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        if (!sys_.commute(static_cast<Gen>(s), static_cast<Gen>(t)) || s == t)
          blocks_[s] |= TypeSet{1} << t;
  }

  const CoxeterSystem& system() const noexcept { return sys_; }
  int rank() const noexcept { return sys_.rank(); }
  bool right_angled() const noexcept { return ra_; }

  Element identity() const { return {}; }
  Element generator(Gen s) const {
    check_gen(s);
    return Element{{s}};
  }

  Element reduce(const Word& w) const {
    for (Gen g : w) check_gen(g);
    if (ra_) {
      Word cur;
      cur.reserve(w.size());
      for (Gen g : w) ra_append(cur, g);
      return Element{ra_normal(cur)};
    }
    Word cur;
    for (Gen g : w) cur = tits_append(cur, g);
    return Element{std::move(cur)};
  }

  // Normal form of a word already known to be reduced.
  Element normalize(const Word& reduced) const {
    if (ra_) return Element{ra_normal(reduced)};
    return Element{class_min(reduced)};
  }

  Element multiply(const Element& a, const Element& b) const {
    if (ra_) {
      Word cur = a.word;
      for (Gen g : b.word) ra_append(cur, g);
      return Element{ra_normal(cur)};
    }
    Word cur = a.word;
    for (Gen g : b.word) cur = tits_append(cur, g);
    return Element{std::move(cur)};
  }

  Element inverse(const Element& a) const {
    Word w(a.word.rbegin(), a.word.rend());
    return normalize(w);
  }

  Element power(const Element& g, int k) const {
    if (k < 0) return power(inverse(g), -k);
    Element r;
    Element base = g;
    while (k > 0) {
      if (k & 1) r = multiply(r, base);
      k >>= 1;
      if (k) base = multiply(base, base);
    }
    return r;
  }

  Element conjugate(const Element& w, const Element& t) const {
    return multiply(multiply(w, t), inverse(w));
  }

  // l(s w) < l(w) for a reduced word w.
  bool is_left_descent(Gen s, const Word& w) const {
    if (ra_) {
      TypeSet blocked = 0;
      for (Gen g : w) {
        if (blocked & (TypeSet{1} << s)) return false;
        if (g == s) return true;
        blocked |= blocks_[g];
      }
      return false;
    }
    for (const Word& v : braid_class(w))
      if (!v.empty() && v.front() == s) return true;
    return false;
  }

  bool is_right_descent(const Word& w, Gen s) const {
    if (ra_) {
      TypeSet blocked = 0;
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (blocked & (TypeSet{1} << s)) return false;
        if (*it == s) return true;
        blocked |= blocks_[*it];
      }
      return false;
    }
    for (const Word& v : braid_class(w))
      if (!v.empty() && v.back() == s) return true;
    return false;
  }

  // Reduced word for s*w. Right-angled case: reduced but not normalized.
  Word left_mul(Gen s, Word w) const {
    if (ra_) {
      TypeSet blocked = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (blocked & (TypeSet{1} << s)) break;
        if (w[i] == s) {
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
          return w;
        }
        blocked |= blocks_[w[i]];
      }
      w.insert(w.begin(), s);
      return w;
    }
    Word r{s};
    r.insert(r.end(), w.begin(), w.end());
    return reduce(r).word;
  }

  Word right_mul(Word w, Gen s) const {
    if (ra_) {
      ra_append(w, s);
      return w;
    }
    return tits_append(w, s);
  }

  // Reduced word for t*w, applying t's letters right to left.
  Word left_mul(const Word& t, Word w) const {
    for (auto it = t.rbegin(); it != t.rend(); ++it) w = left_mul(*it, std::move(w));
    return w;
  }

  std::size_t product_length(const Word& t, const Word& w) const { return left_mul(t, w).size(); }

  std::vector<Element> ball(int radius, std::size_t cap = kDefaultBallCap) const {
    if (radius < 0) throw InputError("ball radius must be nonnegative");
    std::vector<Element> out{identity()};
    std::unordered_set<Word, WordHash> seen{Word{}};
    std::vector<Word> frontier{Word{}};
    for (int r = 0; r < radius && !frontier.empty(); ++r) {
      std::vector<Word> next;
      for (const Word& w : frontier) {
        for (int s = 0; s < rank(); ++s) {
          const Gen g = static_cast<Gen>(s);
          if (is_right_descent(w, g)) continue;
          Word v = normalize(right_mul(w, g)).word;
          if (seen.insert(v).second) {
            if (seen.size() > cap) throw CapExceeded("ball enumeration exceeded cap of " + std::to_string(cap));
            next.push_back(v);
          }
        }
      }
      for (const Word& v : next) out.push_back(Element{v});
      frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // All reflections of length <= radius.
  std::vector<Element> reflections_in_ball(int radius, std::size_t cap = kDefaultBallCap) const {
    if (radius < 1) return {};
    std::set<Element> refl;
    for (const Element& w : ball((radius - 1) / 2, cap))
      for (int s = 0; s < rank(); ++s) {
        Element t = conjugate(w, generator(static_cast<Gen>(s)));
        if (static_cast<int>(t.length()) <= radius) refl.insert(std::move(t));
      }
    return {refl.begin(), refl.end()};
  }

  // Elements of W_J, or nullopt when more than `cap` are found (J treated as non-spherical).
  std::optional<std::vector<Element>> parabolic(TypeSet J, std::size_t cap = kParabolicCap) const {
    if (ra_) {
      for (int s = 0; s < rank(); ++s)
        for (int t = s + 1; t < rank(); ++t)
          if ((J >> s & 1) && (J >> t & 1) && !sys_.commute(static_cast<Gen>(s), static_cast<Gen>(t)))
            return std::nullopt;
    }
    std::vector<Element> out{identity()};
    std::unordered_set<Word, WordHash> seen{Word{}};
    std::vector<Word> frontier{Word{}};
    while (!frontier.empty()) {
      std::vector<Word> next;
      for (const Word& w : frontier)
        for (int s = 0; s < rank(); ++s) {
          if (!(J >> s & 1)) continue;
          const Gen g = static_cast<Gen>(s);
          if (is_right_descent(w, g)) continue;
          Word v = normalize(right_mul(w, g)).word;
          if (seen.insert(v).second) {
            if (seen.size() > cap) return std::nullopt;
            next.push_back(v);
          }
        }
      for (const Word& v : next) out.push_back(Element{v});
      frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_spherical(TypeSet J) const { return parabolic(J).has_value(); }

  bool is_reflection(const Element& t) const {
    if (t.length() % 2 == 0) return false;
    const auto refl = reflections_in_ball(static_cast<int>(t.length()));
    return std::binary_search(refl.begin(), refl.end(), t);
  }

  Element parse(const std::string& text) const {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    for (std::string tok; in >> tok;) tokens.push_back(tok);
    if (tokens.empty() || (tokens.size() == 1 && (tokens[0] == "e" || tokens[0] == "1"))) return identity();
    Word w;
    if (tokens.size() == 1) {
      const std::string& tok = tokens[0];
      bool is_label = false;
      for (const auto& l : sys_.labels()) is_label |= (l == tok);
      if (!is_label) {
        for (char c : tok) w.push_back(sys_.index_of(std::string(1, c)));
        return reduce(w);
      }
    }
    for (const auto& tok : tokens) w.push_back(sys_.index_of(tok));
    return reduce(w);
  }

  std::string format(const Element& e) const { return format_word(e.word); }

  std::string format_word(const Word& w) const {
    if (w.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += sys_.label(w[i]);
    }
    return out;
  }

  TypeSet blocks(Gen s) const { return blocks_[s]; }

 private:
  void check_gen(Gen g) const {
    if (g >= rank()) throw InputError("generator index " + std::to_string(g) + " out of range");
  }

  void ra_append(Word& w, Gen s) const {
    for (std::size_t i = w.size(); i-- > 0;) {
      if (w[i] == s) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        return;
      }
      if (!sys_.commute(w[i], s)) break;
    }
    w.push_back(s);
  }

  // Lexicographically least linearization of the trace of w.
  Word ra_normal(const Word& w) const {
    const std::size_t n = w.size();
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<int> indeg(n, 0);
    std::vector<long> last(rank(), -1);
    for (std::size_t i = 0; i < n; ++i) {
      for (int g = 0; g < rank(); ++g)
        if ((blocks_[w[i]] >> g & 1) && last[g] >= 0) {
          succ[static_cast<std::size_t>(last[g])].push_back(i);
          ++indeg[i];
        }
      last[w[i]] = static_cast<long>(i);
    }
    using Item = std::pair<Gen, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] == 0) ready.push({w[i], i});
    Word out;
    out.reserve(n);
    while (!ready.empty()) {
      auto [g, i] = ready.top();
      ready.pop();
      out.push_back(g);
      for (std::size_t j : succ[i])
        if (--indeg[j] == 0) ready.push({w[j], j});
    }
    return out;
  }

  std::vector<Word> braid_class(const Word& w) const {
    std::unordered_set<Word, WordHash> seen{w};
    std::vector<Word> stack{w}, out{w};
    while (!stack.empty()) {
      Word v = std::move(stack.back());
      stack.pop_back();
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const Gen a = v[i], b = v[i + 1];
        if (a == b) continue;
        const int m = sys_.order(a, b);
        if (m == kInfinity || i + static_cast<std::size_t>(m) > v.size()) continue;
        bool alt = true;
        for (int k = 0; k < m && alt; ++k) alt = v[i + k] == (k % 2 ? b : a);
        if (!alt) continue;
        Word u = v;
        for (int k = 0; k < m; ++k) u[i + k] = (k % 2 ? a : b);
        if (seen.insert(u).second) {
          if (seen.size() > kBraidClassCap) throw CapExceeded("braid class exceeded cap");
          stack.push_back(u);
          out.push_back(std::move(u));
        }
      }
    }
    return out;
  }

  Word class_min(const Word& w) const {
    auto cls = braid_class(w);
    return *std::min_element(cls.begin(), cls.end());
  }

  // cur is a normal form; returns the normal form of cur*s.
  Word tits_append(const Word& cur, Gen s) const {
    for (Word v : braid_class(cur))
      if (!v.empty() && v.back() == s) {
        v.pop_back();
        return class_min(v);
      }
    Word v = cur;
    v.push_back(s);
    return class_min(v);
  }

  CoxeterSystem sys_;
  bool ra_ = false;
  std::vector<TypeSet> blocks_;
};

inline Root simple_root(Gen s) { return Root{Element{{s}}, true}; }

inline bool root_contains(const CoxeterGroup& g, const Root& r, const Element& c) {
  const bool identity_side = g.product_length(r.reflection.word, c.word) > c.length();
  return identity_side == r.positive;
}

// w * alpha
inline Root translate(const CoxeterGroup& g, const Element& w, const Root& r) {
  Root out;
  out.reflection = g.conjugate(w, r.reflection);
  // w*alpha contains the identity iff w^{-1} lies in alpha
  out.positive = root_contains(g, r, g.inverse(w));
  return out;
}

}  // namespace coxbound
